//! The randomized transform `F_λ(x) = F(x-) + λ ΔF(x)`, the jump bijection
//! `Φ_F`, and the almost-everywhere inversion `F^∧(F_λ(x)) = x` with its
//! explicit exceptional set.

use serde::Serialize;

use crate::cdf::{blend, check_lambda_half_open, Cdf};
use crate::error::{Error, Result};
use crate::measure::measure_set;
use crate::realset::{Interval, RealSet};

/// The interpolation weight `λ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformParam {
    lambda: f64,
}

impl TransformParam {
    pub fn new(lambda: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&lambda) {
            Ok(Self { lambda })
        } else {
            Err(Error::LambdaOutOfRange(lambda))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// `F(x-) + λ ΔF(x) = (1 - λ) F(x-) + λ F(x)`, always inside `[F(x-), F(x)]`.
pub fn transform(f: &Cdf, x: f64, lambda: TransformParam) -> f64 {
    blend(f.eval_left(x), f.eval(x), lambda.lambda)
}

/// `{α ∈ (0,1) : F^∧(α) = x}`. Always contains `(F(x-), F(x))` and lies in
/// `[F(x-), F(x)]`; the endpoints depend on what surrounds `x`.
pub fn quantile_range_of_point(f: &Cdf, x: f64) -> RealSet {
    let body = f.body();
    let knots = body.knots();
    let (left, right) = (body.left_limits(), body.knot_values());
    let unit = Interval::open(0.0, 1.0);
    let range = match body.knot_index(x) {
        Some(i) => {
            // F stays below F(x-) just before x only when it is still rising there.
            let rising_into = i > 0 && left[i] > right[i - 1];
            if rising_into {
                Interval::closed(left[i], right[i])
            } else {
                Interval::open_closed(left[i], right[i])
            }
        }
        None => {
            let i = knots.partition_point(|&t| t < x);
            if i == 0 || i == knots.len() || left[i] == right[i - 1] {
                return RealSet::empty();
            }
            Interval::point(f.eval(x))
        }
    };
    RealSet::from_interval(range.intersect(&unit))
}

fn check_open_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

/// `Φ_F(λ) = (F_{λ_n}(x_n))_n` over the jump points `x_1 < x_2 < …`.
pub fn phi(f: &Cdf, lambdas: &[f64]) -> Result<Vec<f64>> {
    let jumps = f.jump_points();
    if lambdas.len() != jumps.len() {
        return Err(Error::LengthMismatch {
            expected: jumps.len(),
            got: lambdas.len(),
        });
    }
    jumps
        .iter()
        .zip(lambdas)
        .map(|(&x, &lambda)| {
            check_open_lambda(lambda)?;
            Ok(blend(f.eval_left(x), f.eval(x), lambda))
        })
        .collect()
}

/// Inverse of [`phi`]: `λ_n = (α_n - F(ξ_n-)) / ΔF(ξ_n)` with `ξ_n = F^∧(α_n)`.
pub fn phi_inverse(f: &Cdf, alphas: &[f64]) -> Result<Vec<f64>> {
    let jumps = f.jump_points();
    if alphas.len() != jumps.len() {
        return Err(Error::LengthMismatch {
            expected: jumps.len(),
            got: alphas.len(),
        });
    }
    jumps
        .iter()
        .zip(alphas)
        .enumerate()
        .map(|(n, (&x, &alpha))| {
            if !(alpha > f.eval_left(x) && alpha < f.eval(x)) {
                return Err(Error::AlphaNotInJumpInterval(n));
            }
            let xi = f.left_quantile(alpha)?;
            Ok((alpha - f.eval_left(xi)) / f.jump(xi))
        })
        .collect()
}

/// The exceptional set `N_λ` outside of which `F^∧(F_λ(x)) = x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullSetReport {
    pub lambda: f64,
    /// `{x : F_λ(x) = 0}`
    pub zero_set: RealSet,
    /// `{x : F_λ(x) = 1}`
    pub one_set: RealSet,
    /// Union of the open-or-half-open plateau pieces above each flat level.
    pub plateau_union: RealSet,
    /// `μ_F(zero_set ∪ one_set)`; zero exactly when `0 < F_λ < 1` holds `μ_F`-a.e.
    pub boundary_measure: f64,
    /// `μ_F(plateau_union)`; always zero.
    pub plateau_measure: f64,
    /// `μ_F(N_λ)`
    pub total_measure: f64,
}

impl NullSetReport {
    pub fn union(&self) -> RealSet {
        self.zero_set
            .union(&self.one_set)
            .union(&self.plateau_union)
    }

    pub fn hypothesis_holds(&self) -> bool {
        self.boundary_measure == 0.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.zero_set.contains(x) || self.one_set.contains(x) || self.plateau_union.contains(x)
    }
}

/// Builds `N_λ` for `0 < λ ≤ 1` and measures every piece exactly.
pub fn null_set(f: &Cdf, lambda: f64) -> Result<NullSetReport> {
    check_lambda_half_open(lambda)?;
    let body = f.body();
    let knots = body.knots();
    let (left, right) = (body.left_limits(), body.knot_values());

    // With λ > 0, F_λ(x) = 0 iff F(x) = 0.
    let k = right.partition_point(|&r| r == 0.0);
    let zero_set: RealSet = if left[k] == 0.0 {
        Interval::below(knots[k]).into()
    } else {
        Interval::at_most(knots[k - 1]).into()
    };

    // F_λ(x) = 1 iff F(x) = 1 when λ = 1, and iff F(x-) = 1 when λ < 1.
    let m = right.partition_point(|&r| r < 1.0);
    let one_set: RealSet = if lambda == 1.0 || left[m] == 1.0 {
        Interval::at_least(knots[m]).into()
    } else {
        Interval::above(knots[m]).into()
    };

    let mut plateau_union = RealSet::empty();
    for &alpha in f.plateau_levels() {
        plateau_union = plateau_union.union(&f.a_decomposition(lambda, alpha)?.plus);
    }

    let boundary_measure = measure_set(f, &zero_set.union(&one_set))?.value();
    let plateau_measure = measure_set(f, &plateau_union)?.value();
    let all = zero_set.union(&one_set).union(&plateau_union);
    let total_measure = measure_set(f, &all)?.value();
    Ok(NullSetReport {
        lambda,
        zero_set,
        one_set,
        plateau_union,
        boundary_measure,
        plateau_measure,
        total_measure,
    })
}

/// `F^∧(F_λ(x))`, which never exceeds `x` and equals it off `N_λ`.
pub fn invert_transform(f: &Cdf, x: f64, lambda: f64) -> Result<f64> {
    check_lambda_half_open(lambda)?;
    let u = transform(f, x, TransformParam { lambda });
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::TransformOutOfRange(u));
    }
    f.left_quantile(u)
}
