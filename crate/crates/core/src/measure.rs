//! The Lebesgue–Stieltjes measure `μ_F` of intervals and finite unions,
//! read off `F` and its left limits: `μ_F((x, y]) = F(y) - F(x)`,
//! `μ_F((x, y)) = F(y-) - F(x)`, `μ_F([x, y]) = F(y) - F(x-)`, and so on.

use serde::Serialize;

use crate::cdf::Cdf;
use crate::error::Result;
use crate::realset::{Bound, Interval, RealSet};

/// A value of `μ_F`, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct MeasureValue(f64);

impl MeasureValue {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// `μ_F` of a single interval. Unbounded ends use the limits 0 and 1.
pub fn measure_interval(f: &Cdf, interval: &Interval) -> Result<MeasureValue> {
    let interval = Interval::new(interval.lower(), interval.upper())?;
    if interval.is_empty() {
        return Ok(MeasureValue(0.0));
    }
    let below = match interval.lower() {
        Bound::Unbounded => 0.0,
        Bound::Closed(a) => f.eval_left(a),
        Bound::Open(a) => f.eval(a),
    };
    let through = match interval.upper() {
        Bound::Unbounded => 1.0,
        Bound::Closed(b) => f.eval(b),
        Bound::Open(b) => f.eval_left(b),
    };
    Ok(MeasureValue((through - below).max(0.0)))
}

/// `μ_F` of a finite disjoint union, by additivity.
pub fn measure_set(f: &Cdf, s: &RealSet) -> Result<MeasureValue> {
    let checked = RealSet::from_disjoint(s.components().to_vec())?;
    let mut total = 0.0;
    for c in checked.components() {
        total += measure_interval(f, c)?.value();
    }
    Ok(MeasureValue(total))
}

/// `μ_F({F = α})`. On a plateau (`ξ < η`) this is `α - F(ξ-) = ΔF(ξ)`.
pub fn measure_level_set(f: &Cdf, alpha: f64) -> Result<MeasureValue> {
    let info = f.level_info(alpha)?;
    if info.is_plateau() {
        let value = alpha - info.f_xi_left;
        debug_assert_eq!(value, info.beta());
        debug_assert_eq!(
            Ok(MeasureValue(value)),
            measure_set(f, &f.level_set(alpha)?)
        );
        return Ok(MeasureValue(value));
    }
    measure_set(f, &f.level_set(alpha)?)
}
