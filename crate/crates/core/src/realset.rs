//! Finite unions of real intervals with independent open/closed endpoints.
//!
//! Every set the library produces (level sets, the pieces of `{F_λ ≤ α}`,
//! exceptional null sets) is a [`RealSet`]. Endpoint membership is data and
//! is decided by exact comparisons, never by a tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// One end of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Bound {
    Unbounded,
    Closed(f64),
    Open(f64),
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Bound::Unbounded => None,
            Bound::Closed(v) | Bound::Open(v) => Some(v),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Bound::Closed(_))
    }

    // Sort keys: a lower bound `[a` starts before `(a`; an upper bound `a)`
    // ends before `a]`.
    fn lower_key(&self) -> (f64, u8) {
        match *self {
            Bound::Unbounded => (f64::NEG_INFINITY, 0),
            Bound::Closed(a) => (a, 0),
            Bound::Open(a) => (a, 1),
        }
    }

    fn upper_key(&self) -> (f64, u8) {
        match *self {
            Bound::Unbounded => (f64::INFINITY, 1),
            Bound::Open(b) => (b, 0),
            Bound::Closed(b) => (b, 1),
        }
    }

    fn flipped(&self) -> Bound {
        match *self {
            Bound::Unbounded => Bound::Unbounded,
            Bound::Closed(v) => Bound::Open(v),
            Bound::Open(v) => Bound::Closed(v),
        }
    }
}

fn cmp_key(a: (f64, u8), b: (f64, u8)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// A single interval `lower .. upper`, possibly empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lower: Bound,
    upper: Bound,
}

impl Interval {
    /// Builds an interval, rejecting NaN or infinite finite-bounds and
    /// reversed endpoints.
    pub fn new(lower: Bound, upper: Bound) -> Result<Self> {
        for b in [lower, upper] {
            if let Some(v) = b.value() {
                if !v.is_finite() {
                    return Err(Error::MalformedInterval(format!(
                        "endpoint {v} must be finite (use an unbounded end instead)"
                    )));
                }
            }
        }
        if let (Some(a), Some(b)) = (lower.value(), upper.value()) {
            if a > b {
                return Err(Error::MalformedInterval(format!(
                    "lower {a} exceeds upper {b}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn closed(a: f64, b: f64) -> Self {
        Self {
            lower: Bound::Closed(a),
            upper: Bound::Closed(b),
        }
    }

    pub fn open(a: f64, b: f64) -> Self {
        Self {
            lower: Bound::Open(a),
            upper: Bound::Open(b),
        }
    }

    pub fn closed_open(a: f64, b: f64) -> Self {
        Self {
            lower: Bound::Closed(a),
            upper: Bound::Open(b),
        }
    }

    pub fn open_closed(a: f64, b: f64) -> Self {
        Self {
            lower: Bound::Open(a),
            upper: Bound::Closed(b),
        }
    }

    pub fn point(a: f64) -> Self {
        Self::closed(a, a)
    }

    /// `(-inf, b)`
    pub fn below(b: f64) -> Self {
        Self {
            lower: Bound::Unbounded,
            upper: Bound::Open(b),
        }
    }

    /// `(-inf, b]`
    pub fn at_most(b: f64) -> Self {
        Self {
            lower: Bound::Unbounded,
            upper: Bound::Closed(b),
        }
    }

    /// `(a, +inf)`
    pub fn above(a: f64) -> Self {
        Self {
            lower: Bound::Open(a),
            upper: Bound::Unbounded,
        }
    }

    /// `[a, +inf)`
    pub fn at_least(a: f64) -> Self {
        Self {
            lower: Bound::Closed(a),
            upper: Bound::Unbounded,
        }
    }

    pub fn everything() -> Self {
        Self {
            lower: Bound::Unbounded,
            upper: Bound::Unbounded,
        }
    }

    pub fn lower(&self) -> Bound {
        self.lower
    }

    pub fn upper(&self) -> Bound {
        self.upper
    }

    pub fn is_empty(&self) -> bool {
        match (self.lower.value(), self.upper.value()) {
            (Some(a), Some(b)) => {
                a > b || (a == b && !(self.lower.is_closed() && self.upper.is_closed()))
            }
            _ => false,
        }
    }

    pub fn is_singleton(&self) -> bool {
        matches!((self.lower, self.upper), (Bound::Closed(a), Bound::Closed(b)) if a == b)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above_lower = match self.lower {
            Bound::Unbounded => true,
            Bound::Closed(a) => x >= a,
            Bound::Open(a) => x > a,
        };
        let below_upper = match self.upper {
            Bound::Unbounded => true,
            Bound::Closed(b) => x <= b,
            Bound::Open(b) => x < b,
        };
        above_lower && below_upper
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lower = if cmp_key(self.lower.lower_key(), other.lower.lower_key()) == Ordering::Less {
            other.lower
        } else {
            self.lower
        };
        let upper = if cmp_key(self.upper.upper_key(), other.upper.upper_key()) == Ordering::Greater
        {
            other.upper
        } else {
            self.upper
        };
        Interval { lower, upper }
    }

    // True when `next` (which starts no earlier than `self`) overlaps or
    // abuts `self` so that the union has no gap.
    fn joins(&self, next: &Interval) -> bool {
        match (self.upper, next.lower) {
            (Bound::Unbounded, _) | (_, Bound::Unbounded) => true,
            (u, l) => {
                let (b, a) = (u.value().unwrap(), l.value().unwrap());
                a < b || (a == b && (u.is_closed() || l.is_closed()))
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        if self.is_singleton() {
            return write!(f, "{{{}}}", self.lower.value().unwrap());
        }
        match self.lower {
            Bound::Unbounded => write!(f, "(-inf, ")?,
            Bound::Closed(a) => write!(f, "[{a}, ")?,
            Bound::Open(a) => write!(f, "({a}, ")?,
        }
        match self.upper {
            Bound::Unbounded => write!(f, "+inf)"),
            Bound::Closed(b) => write!(f, "{b}]"),
            Bound::Open(b) => write!(f, "{b})"),
        }
    }
}

/// Parses the notation produced by `Display`: `[a, b)`, `(a, b]`, `{a}`,
/// `(-inf, b)`, `[a, +inf)`.
impl FromStr for Interval {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = |why: &str| Error::MalformedInterval(format!("`{t}`: {why}"));
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let a = parse_endpoint(inner).ok_or_else(|| bad("expected a number inside braces"))?;
            return Interval::new(Bound::Closed(a), Bound::Closed(a));
        }
        let (open_lo, open_hi) = match (t.chars().next(), t.chars().last()) {
            (Some(l @ ('(' | '[')), Some(r @ (')' | ']'))) if t.len() >= 2 => (l == '(', r == ')'),
            _ => return Err(bad("expected brackets such as [a, b) or braces {a}")),
        };
        let (lo, hi) = t[1..t.len() - 1]
            .split_once(',')
            .ok_or_else(|| bad("expected two comma-separated ends"))?;
        let lower = match lo.trim() {
            "-inf" => Bound::Unbounded,
            s => {
                let a = parse_endpoint(s).ok_or_else(|| bad("lower end is not a number"))?;
                if open_lo {
                    Bound::Open(a)
                } else {
                    Bound::Closed(a)
                }
            }
        };
        let upper = match hi.trim() {
            "inf" | "+inf" => Bound::Unbounded,
            s => {
                let b = parse_endpoint(s).ok_or_else(|| bad("upper end is not a number"))?;
                if open_hi {
                    Bound::Open(b)
                } else {
                    Bound::Closed(b)
                }
            }
        };
        Interval::new(lower, upper)
    }
}

fn parse_endpoint(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// A finite union of pairwise disjoint, sorted, non-empty intervals.
///
/// Construction always normalizes, so two sets are equal exactly when their
/// component lists are equal.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RealSet {
    components: Vec<Interval>,
}

impl RealSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_interval(interval: Interval) -> Self {
        Self::from_intervals(vec![interval])
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = intervals.into_iter().filter(|i| !i.is_empty()).collect();
        parts.sort_by(|a, b| {
            cmp_key(a.lower.lower_key(), b.lower.lower_key())
                .then(cmp_key(a.upper.upper_key(), b.upper.upper_key()))
        });
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for part in parts {
            match merged.last_mut() {
                Some(last) if last.joins(&part) => {
                    if cmp_key(part.upper.upper_key(), last.upper.upper_key()) == Ordering::Greater
                    {
                        last.upper = part.upper;
                    }
                }
                _ => merged.push(part),
            }
        }
        Self { components: merged }
    }

    /// Checks that a list of intervals is already disjoint and sorted, as
    /// produced by [`RealSet::components`].
    pub fn from_disjoint(intervals: Vec<Interval>) -> Result<Self> {
        for (i, pair) in intervals.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            let ordered = cmp_key(a.lower.lower_key(), b.lower.lower_key()) == Ordering::Less;
            if !ordered || !a.intersect(b).is_empty() {
                return Err(Error::MalformedSet(format!(
                    "components {i} and {} overlap or are unsorted",
                    i + 1
                )));
            }
        }
        Ok(Self {
            components: intervals.into_iter().filter(|i| !i.is_empty()).collect(),
        })
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    pub fn union(&self, other: &RealSet) -> RealSet {
        RealSet::from_intervals(
            self.components
                .iter()
                .chain(other.components.iter())
                .copied(),
        )
    }

    pub fn intersection(&self, other: &RealSet) -> RealSet {
        let mut out = Vec::new();
        for a in &self.components {
            for b in &other.components {
                out.push(a.intersect(b));
            }
        }
        RealSet::from_intervals(out)
    }

    pub fn complement(&self) -> RealSet {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut start = Bound::Unbounded;
        for (i, c) in self.components.iter().enumerate() {
            if !(i == 0 && c.lower == Bound::Unbounded) {
                out.push(Interval {
                    lower: start,
                    upper: c.lower.flipped(),
                });
            }
            start = c.upper.flipped();
        }
        if self.components.is_empty() {
            return RealSet::from_interval(Interval::everything());
        }
        if self.components.last().map(|c| c.upper) != Some(Bound::Unbounded) {
            out.push(Interval {
                lower: start,
                upper: Bound::Unbounded,
            });
        }
        RealSet::from_intervals(out)
    }

    pub fn difference(&self, other: &RealSet) -> RealSet {
        self.intersection(&other.complement())
    }
}

impl From<Interval> for RealSet {
    fn from(interval: Interval) -> Self {
        RealSet::from_interval(interval)
    }
}

/// Parses a union of intervals joined by `∪` or `u`; `∅` or `empty` is the
/// empty set.
impl FromStr for RealSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "∅" || t.eq_ignore_ascii_case("empty") {
            return Ok(RealSet::empty());
        }
        let parts = t
            .split(['∪', 'u', 'U'])
            .map(|p| p.parse::<Interval>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::MalformedSet(e.to_string()))?;
        Ok(RealSet::from_intervals(parts))
    }
}

impl fmt::Display for RealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
