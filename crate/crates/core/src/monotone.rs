//! Bounded, nondecreasing, right-continuous step-linear functions.
//!
//! A [`MonotoneStepLinear`] is described by finitely many knots
//! `x_0 < x_1 < … < x_{k-1}`, a nonnegative atom (jump) at each knot, and a
//! nonnegative linear rise on every gap `[x_i, x_{i+1}]`. Below the first knot
//! the function equals its `base`; from the last knot on it equals its `top`.
//!
//! Cumulative values at every knot are computed once at construction and all
//! evaluations read from them, so that values at knots, left limits and
//! plateau levels compare exactly with each other.

use serde::Serialize;

use crate::cdf::Cdf;
use crate::error::{Error, Result};
use crate::realset::{Interval, RealSet};

/// Where a generalized inverse lands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Located {
    /// The target set is everything (inverse is `-inf`).
    Below,
    /// The target set is empty (inverse is `+inf`).
    Above,
    /// Exactly at knot `i`.
    Knot(usize),
    /// Strictly inside the rising segment `(x_i, x_{i+1})`, at the given abscissa.
    Segment(usize, f64),
}

impl Located {
    pub(crate) fn abscissa(&self, knots: &[f64]) -> f64 {
        match *self {
            Located::Below => f64::NEG_INFINITY,
            Located::Above => f64::INFINITY,
            Located::Knot(i) => knots[i],
            Located::Segment(_, x) => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneStepLinear {
    knots: Vec<f64>,
    atoms: Vec<f64>,
    rises: Vec<f64>,
    base: f64,
    #[serde(skip)]
    left: Vec<f64>,
    #[serde(skip)]
    right: Vec<f64>,
}

impl MonotoneStepLinear {
    /// `rises[i]` is the total increase over `[knots[i], knots[i + 1]]`, so
    /// `rises.len() + 1 == knots.len()` (or both empty).
    pub fn new(knots: Vec<f64>, atoms: Vec<f64>, rises: Vec<f64>, base: f64) -> Result<Self> {
        if atoms.len() != knots.len() {
            return Err(invalid(
                "atoms",
                format!("expected {} entries, got {}", knots.len(), atoms.len()),
            ));
        }
        let expected_rises = knots.len().saturating_sub(1);
        if rises.len() != expected_rises {
            return Err(invalid(
                "rises",
                format!("expected {expected_rises} entries, got {}", rises.len()),
            ));
        }
        if !base.is_finite() {
            return Err(invalid("base", format!("{base} is not finite")));
        }
        for (i, &x) in knots.iter().enumerate() {
            if !x.is_finite() {
                return Err(invalid(
                    &format!("knots[{i}]"),
                    format!("{x} is not finite"),
                ));
            }
            if i > 0 && knots[i - 1] >= x {
                return Err(invalid(
                    &format!("knots[{i}]"),
                    "knots must be strictly increasing".into(),
                ));
            }
        }
        for (name, values) in [("atoms", &atoms), ("rises", &rises)] {
            for (i, &m) in values.iter().enumerate() {
                if !m.is_finite() || m < 0.0 {
                    return Err(invalid(
                        &format!("{name}[{i}]"),
                        format!("{m} must be finite and nonnegative"),
                    ));
                }
            }
        }

        let mut left = Vec::with_capacity(knots.len());
        let mut right = Vec::with_capacity(knots.len());
        let mut level = base;
        for i in 0..knots.len() {
            if i > 0 {
                level += rises[i - 1];
            }
            left.push(level);
            level += atoms[i];
            right.push(level);
        }
        Ok(Self {
            knots,
            atoms,
            rises,
            base,
            left,
            right,
        })
    }

    /// Builds from cumulative left limits and values at the knots. Atoms and
    /// rises are recovered as differences.
    pub(crate) fn from_cumulative(
        knots: Vec<f64>,
        left: Vec<f64>,
        right: Vec<f64>,
        base: f64,
    ) -> Self {
        let atoms = left.iter().zip(&right).map(|(l, r)| r - l).collect();
        let rises = right
            .iter()
            .zip(left.iter().skip(1))
            .map(|(r, l)| l - r)
            .collect();
        Self {
            knots,
            atoms,
            rises,
            base,
            left,
            right,
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn rises(&self) -> &[f64] {
        &self.rises
    }

    /// `G(x_i-)` at every knot.
    pub fn left_limits(&self) -> &[f64] {
        &self.left
    }

    /// `G(x_i)` at every knot.
    pub fn knot_values(&self) -> &[f64] {
        &self.right
    }

    /// Value on `(-inf, x_0)`, the lower limit `c_*`.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Value on `[x_{k-1}, inf)`, the upper limit `c^*`.
    pub fn top(&self) -> f64 {
        self.right.last().copied().unwrap_or(self.base)
    }

    pub fn is_constant(&self) -> bool {
        self.top() == self.base
    }

    /// `G(x)`, including the atom at `x` if `x` is a knot.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.knots.len();
        if x.is_nan() {
            return f64::NAN;
        }
        if k == 0 || x < self.knots[0] {
            return self.base;
        }
        let i = self.knots.partition_point(|&t| t <= x) - 1;
        if self.knots[i] == x || i + 1 == k {
            return self.right[i];
        }
        self.interpolate(i, x)
    }

    /// `G(x-)`.
    pub fn eval_left(&self, x: f64) -> f64 {
        match self.knot_index(x) {
            Some(i) => self.left[i],
            None => self.eval(x),
        }
    }

    /// `G(x) - G(x-)`; zero away from knots.
    pub fn jump(&self, x: f64) -> f64 {
        match self.knot_index(x) {
            Some(i) => self.right[i] - self.left[i],
            None => 0.0,
        }
    }

    pub(crate) fn knot_index(&self, x: f64) -> Option<usize> {
        self.knots.binary_search_by(|t| t.total_cmp(&x)).ok()
    }

    fn interpolate(&self, i: usize, x: f64) -> f64 {
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (lo, hi) = (self.right[i], self.left[i + 1]);
        let t = (x - x0) / (x1 - x0);
        (lo + (hi - lo) * t).clamp(lo, hi)
    }

    /// Locates `inf {x : G(x) >= alpha}` structurally.
    pub(crate) fn locate_lower(&self, alpha: f64) -> Located {
        if alpha <= self.base {
            return Located::Below;
        }
        if alpha > self.top() {
            return Located::Above;
        }
        let i = self.right.partition_point(|&r| r < alpha);
        if i == 0 || self.left[i] <= alpha {
            return Located::Knot(i);
        }
        Located::Segment(i - 1, self.solve_in_segment(i - 1, alpha))
    }

    /// Least float `x` in `(x_i, x_{i+1})` with `G(x) >= alpha`, for
    /// `G(x_i) < alpha < G(x_{i+1}-)`.
    fn solve_in_segment(&self, i: usize, alpha: f64) -> f64 {
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (lo, hi) = (self.right[i], self.left[i + 1]);
        let mut x = x0 + (x1 - x0) * ((alpha - lo) / (hi - lo));
        x = x.clamp(x0.next_up(), x1.next_down());
        // A linear solve can be off by a few ulps; settle on the float boundary.
        for _ in 0..64 {
            if self.interpolate(i, x) >= alpha || x.next_up() >= x1 {
                break;
            }
            x = x.next_up();
        }
        for _ in 0..64 {
            let prev = x.next_down();
            if prev <= x0 || self.interpolate(i, prev) < alpha {
                break;
            }
            x = prev;
        }
        x
    }

    /// Generalized inverse `inf {x : G(x) >= alpha}`; `-inf` when the set is
    /// all of R, `+inf` when it is empty.
    pub fn lower_inverse(&self, alpha: f64) -> f64 {
        self.locate_lower(alpha).abscissa(&self.knots)
    }

    /// `{x : G(x) >= alpha}`, assembled piece by piece from the knots and
    /// segments (independently of [`Self::lower_inverse`]).
    pub fn superlevel_set(&self, alpha: f64) -> RealSet {
        let k = self.knots.len();
        if k == 0 {
            return if self.base >= alpha {
                Interval::everything().into()
            } else {
                RealSet::empty()
            };
        }
        let mut parts = Vec::new();
        if self.base >= alpha {
            parts.push(Interval::below(self.knots[0]));
        }
        for i in 0..k {
            if self.right[i] >= alpha {
                parts.push(Interval::point(self.knots[i]));
            }
            if i + 1 == k {
                if self.right[i] >= alpha {
                    parts.push(Interval::above(self.knots[i]));
                }
                continue;
            }
            let (x0, x1) = (self.knots[i], self.knots[i + 1]);
            if self.right[i] >= alpha {
                parts.push(Interval::open(x0, x1));
            } else if self.left[i + 1] > alpha {
                parts.push(Interval::closed_open(self.solve_in_segment(i, alpha), x1));
            }
        }
        RealSet::from_intervals(parts)
    }

    /// Evaluates the four equivalent characterizations of a distribution
    /// function for a `G` with range in `[0, 1]`.
    ///
    /// Each condition is checked on its own: (i) from the limits, (ii) from
    /// sampled values of `G`, (iii) from the superlevel sets, (iv) from the
    /// generalized inverse. The predicates in `alpha` only change at values
    /// taken by `G`, so testing those values, the midpoints between them and a
    /// dense grid covers all of `(0, 1)`.
    pub fn df_condition_report(&self) -> DfConditionReport {
        let levels = self.critical_alphas();
        let lowest = self.eval(self.knots.first().map_or(0.0, |x| x - 1.0));
        let highest = self.eval(self.knots.last().copied().unwrap_or(0.0));

        let cond_limits = self.base == 0.0 && self.top() == 1.0;
        let cond_both_nonempty = levels.iter().all(|&a| lowest < a && highest >= a);
        let cond_bounded_below = levels.iter().all(|&a| {
            let set = self.superlevel_set(a);
            !set.is_empty() && set.components()[0].lower().value().is_some()
        });
        let cond_inf_finite = levels.iter().all(|&a| self.lower_inverse(a).is_finite());
        DfConditionReport {
            cond_limits,
            cond_both_nonempty,
            cond_bounded_below,
            cond_inf_finite,
        }
    }

    fn critical_alphas(&self) -> Vec<f64> {
        let mut values: Vec<f64> = [0.0, 1.0, self.base, self.top()]
            .into_iter()
            .chain(self.left.iter().copied())
            .chain(self.right.iter().copied())
            .filter(|v| (0.0..=1.0).contains(v))
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let mut alphas: Vec<f64> = values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        alphas.extend(values.iter().copied());
        alphas.extend((1..1000).map(|j| j as f64 / 1000.0));
        alphas.retain(|&a| a > 0.0 && a < 1.0);
        alphas
    }

    /// Affine rescaling `(G - c_*) / (c^* - c_*)` onto a distribution function.
    pub fn normalize(&self) -> Result<Cdf> {
        let (lo, hi) = (self.base, self.top());
        if hi <= lo {
            return Err(Error::DegenerateRange(lo));
        }
        let span = hi - lo;
        let scale = |v: &f64| (v - lo) / span;
        let body = Self::from_cumulative(
            self.knots.clone(),
            self.left.iter().map(scale).collect(),
            self.right.iter().map(scale).collect(),
            0.0,
        );
        Ok(Cdf::from_normalized(body))
    }
}

fn invalid(field: &str, reason: String) -> Error {
    Error::InvalidField {
        field: field.to_string(),
        reason,
    }
}

/// The four conditions that, for a nondecreasing `G` with values in `[0, 1]`,
/// are each equivalent to `G` being a distribution function (given
/// right-continuity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DfConditionReport {
    /// `G(-inf) = 0` and `G(+inf) = 1`.
    pub cond_limits: bool,
    /// For every `alpha` in (0,1), `{G < alpha}` and `{G >= alpha}` are non-empty.
    pub cond_both_nonempty: bool,
    /// For every `alpha` in (0,1), `{G >= alpha}` is non-empty and bounded below.
    pub cond_bounded_below: bool,
    /// For every `alpha` in (0,1), `inf {G >= alpha}` is a real number.
    pub cond_inf_finite: bool,
}

impl DfConditionReport {
    pub fn all_agree(&self) -> bool {
        let c = [
            self.cond_limits,
            self.cond_both_nonempty,
            self.cond_bounded_below,
            self.cond_inf_finite,
        ];
        c.iter().all(|&b| b == c[0])
    }
}
