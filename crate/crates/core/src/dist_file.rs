//! The JSON distribution file format.
//!
//! ```json
//! {"base": 0,
//!  "breakpoints": [{"x": 0.5, "atom": 0.25}],
//!  "segments": [{"from": 0.0, "to": 0.25, "increase": 0.25},
//!               {"from": 0.5, "to": 1.0, "increase": 0.5}]}
//! ```
//!
//! Segment endpoints do not have to coincide with breakpoints; the union of
//! all abscissas becomes the knot set and each segment's increase is spread
//! linearly over the knot gaps it covers. Overlapping segments add up.

use serde::{Deserialize, Serialize};

use crate::cdf::Cdf;
use crate::error::{Error, Result};
use crate::monotone::MonotoneStepLinear;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Breakpoint {
    pub x: f64,
    pub atom: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    pub increase: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    #[serde(default)]
    pub base: f64,
    #[serde(default)]
    pub breakpoints: Vec<Breakpoint>,
    #[serde(default)]
    pub segments: Vec<Segment>,
}

impl DistFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn base(mut self, base: f64) -> Self {
        self.base = base;
        self
    }

    pub fn atom(mut self, x: f64, atom: f64) -> Self {
        self.breakpoints.push(Breakpoint { x, atom });
        self
    }

    pub fn segment(mut self, from: f64, to: f64, increase: f64) -> Self {
        self.segments.push(Segment { from, to, increase });
        self
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data always serializes")
    }

    pub fn to_function(&self) -> Result<MonotoneStepLinear> {
        let mut xs = Vec::new();
        for (i, b) in self.breakpoints.iter().enumerate() {
            finite(b.x, || format!("breakpoints[{i}].x"))?;
            mass(b.atom, || format!("breakpoints[{i}].atom"))?;
            xs.push(b.x);
        }
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            let i = self.breakpoints.iter().rposition(|b| b.x == w[0]).unwrap();
            return Err(field(
                format!("breakpoints[{i}].x"),
                format!("duplicate breakpoint at {}", w[0]),
            ));
        }
        for (i, s) in self.segments.iter().enumerate() {
            finite(s.from, || format!("segments[{i}].from"))?;
            finite(s.to, || format!("segments[{i}].to"))?;
            mass(s.increase, || format!("segments[{i}].increase"))?;
            if s.from >= s.to {
                return Err(field(
                    format!("segments[{i}].to"),
                    format!("must exceed `from` ({})", s.from),
                ));
            }
            xs.push(s.from);
            xs.push(s.to);
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();

        let mut atoms = vec![0.0; xs.len()];
        for b in &self.breakpoints {
            let i = xs.binary_search_by(|t| t.total_cmp(&b.x)).unwrap();
            atoms[i] = b.atom;
        }
        let mut rises = vec![0.0; xs.len().saturating_sub(1)];
        for s in &self.segments {
            let start = xs.binary_search_by(|t| t.total_cmp(&s.from)).unwrap();
            let end = xs.binary_search_by(|t| t.total_cmp(&s.to)).unwrap();
            let width = s.to - s.from;
            if end == start + 1 {
                rises[start] += s.increase;
                continue;
            }
            for (j, rise) in rises.iter_mut().enumerate().take(end).skip(start) {
                *rise += s.increase * (xs[j + 1] - xs[j]) / width;
            }
        }
        if !self.base.is_finite() {
            return Err(field("base".into(), format!("{} is not finite", self.base)));
        }
        MonotoneStepLinear::new(xs, atoms, rises, self.base)
    }

    /// Parses the masses into a validated distribution function. See
    /// [`Cdf::new`] for the mass tolerance.
    pub fn to_cdf(&self) -> Result<Cdf> {
        Cdf::new(&self.to_function()?)
    }
}

fn field(field: String, reason: String) -> Error {
    Error::InvalidField { field, reason }
}

fn finite(v: f64, name: impl Fn() -> String) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(field(name(), format!("{v} is not finite")))
    }
}

fn mass(v: f64, name: impl Fn() -> String) -> Result<()> {
    finite(v, &name)?;
    if v < 0.0 {
        return Err(field(name(), format!("{v} is negative")));
    }
    Ok(())
}
