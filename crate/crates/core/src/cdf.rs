//! Validated distribution functions and their generalized inverses.
//!
//! For `alpha` in (0,1) the left quantile is `ξ = F^∧(α) = min {x : F(x) ≥ α}`
//! and the right quantile is `η = F^∨(α) = sup {x : F(x) ≤ α}`. Both are found
//! by a structural scan over the knots; inside a rising segment the answer is
//! one linear solve. Which case applies (knot or segment interior, plateau or
//! not, `F(η) = α` or `F(η) > α`) is read off the representation, never
//! decided by comparing floats against a tolerance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monotone::{Located, MonotoneStepLinear};
use crate::realset::{Interval, RealSet};

/// Accepted deviation of the total mass from 1 before renormalizing.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A distribution function: a [`MonotoneStepLinear`] with limits 0 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    body: MonotoneStepLinear,
    jump_points: Vec<f64>,
    plateau_levels: Vec<f64>,
}

/// Left and right `alpha`-quantiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantilePair {
    pub xi: f64,
    pub eta: f64,
}

/// The shape of `{x : F(x) = α}`; there are exactly four possibilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LevelSet {
    Empty,
    Singleton(f64),
    /// `[ξ, η)`, when `F(η) > α`.
    HalfOpen(f64, f64),
    /// `[ξ, η]`, when `F(η) = α`.
    Closed(f64, f64),
}

impl LevelSet {
    pub fn to_set(&self) -> RealSet {
        match *self {
            LevelSet::Empty => RealSet::empty(),
            LevelSet::Singleton(x) => Interval::point(x).into(),
            LevelSet::HalfOpen(a, b) => Interval::closed_open(a, b).into(),
            LevelSet::Closed(a, b) => Interval::closed(a, b).into(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            LevelSet::Empty => "empty",
            LevelSet::Singleton(_) => "singleton",
            LevelSet::HalfOpen(..) => "half-open",
            LevelSet::Closed(..) => "closed",
        }
    }
}

/// `{x : F_λ(x) ≤ α}` split at `ξ` into the parts above, at and below it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ADecomposition {
    pub plus: RealSet,
    pub tilde: RealSet,
    pub minus: RealSet,
}

impl ADecomposition {
    pub fn union(&self) -> RealSet {
        self.plus.union(&self.tilde).union(&self.minus)
    }
}

/// Everything known about the level `alpha` from one scan.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LevelInfo {
    pub xi: f64,
    pub eta: f64,
    /// `F(ξ)`
    pub f_xi: f64,
    /// `q = F(ξ-)`
    pub f_xi_left: f64,
    /// `F(η)`
    pub f_eta: f64,
}

impl LevelInfo {
    /// `β = ΔF(ξ)`
    pub fn beta(&self) -> f64 {
        self.f_xi - self.f_xi_left
    }

    pub fn is_plateau(&self) -> bool {
        self.xi < self.eta
    }
}

/// `(1 - λ)·lo + λ·hi`, kept inside `[lo, hi]` and exact at `λ ∈ {0, 1}`.
pub(crate) fn blend(lo: f64, hi: f64, lambda: f64) -> f64 {
    if lambda == 1.0 {
        return hi;
    }
    (lo + lambda * (hi - lo)).clamp(lo, hi)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

pub(crate) fn check_lambda_half_open(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

impl Cdf {
    /// Validates that `g` is a distribution function up to [`MASS_TOLERANCE`]
    /// and renormalizes it exactly onto limits 0 and 1.
    pub fn new(g: &MonotoneStepLinear) -> Result<Self> {
        if g.is_constant() {
            return Err(Error::DegenerateRange(g.base()));
        }
        if g.base().abs() > MASS_TOLERANCE {
            return Err(Error::InvalidField {
                field: "base".into(),
                reason: format!("a distribution function starts at 0, got {}", g.base()),
            });
        }
        let total = g.top() - g.base();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::MassMismatch {
                total,
                tolerance: MASS_TOLERANCE,
            });
        }
        g.normalize()
    }

    /// `body` must already have base exactly 0 and top exactly 1.
    pub(crate) fn from_normalized(body: MonotoneStepLinear) -> Self {
        debug_assert!(body.base() == 0.0 && body.top() == 1.0);
        let knots = body.knots();
        let (left, right) = (body.left_limits(), body.knot_values());
        let jump_points = knots
            .iter()
            .enumerate()
            .filter(|&(i, _)| right[i] > left[i])
            .map(|(_, &x)| x)
            .collect();
        let mut plateau_levels: Vec<f64> = (0..knots.len().saturating_sub(1))
            .filter(|&i| left[i + 1] == right[i] && right[i] > 0.0 && right[i] < 1.0)
            .map(|i| right[i])
            .collect();
        plateau_levels.dedup();
        Self {
            body,
            jump_points,
            plateau_levels,
        }
    }

    pub fn body(&self) -> &MonotoneStepLinear {
        &self.body
    }

    pub fn knots(&self) -> &[f64] {
        self.body.knots()
    }

    /// `J_F`, ascending.
    pub fn jump_points(&self) -> &[f64] {
        &self.jump_points
    }

    /// Levels of the maximal flat pieces inside (0,1), ascending. These are
    /// exactly the jump locations of `F^∧`.
    pub fn plateau_levels(&self) -> &[f64] {
        &self.plateau_levels
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.body.eval(x)
    }

    pub fn eval_left(&self, x: f64) -> f64 {
        self.body.eval_left(x)
    }

    pub fn jump(&self, x: f64) -> f64 {
        self.body.jump(x)
    }

    pub(crate) fn level_info(&self, alpha: f64) -> Result<LevelInfo> {
        check_alpha(alpha)?;
        let left = self.body.left_limits();
        let right = self.body.knot_values();
        let (xi, f_xi, f_xi_left) = match self.body.locate_lower(alpha) {
            Located::Knot(i) => (self.knots()[i], right[i], left[i]),
            Located::Segment(_, x) => (x, alpha, alpha),
            Located::Below | Located::Above => unreachable!("alpha is inside (0,1) = (base, top)"),
        };
        let j = left.partition_point(|&l| l <= alpha) - 1;
        let (eta, f_eta) = if right[j] >= alpha {
            (self.knots()[j], right[j])
        } else {
            // strictly increasing here, so both quantiles coincide
            (xi, alpha)
        };
        Ok(LevelInfo {
            xi,
            eta,
            f_xi,
            f_xi_left,
            f_eta,
        })
    }

    /// `F^∧(α) = min {x : F(x) ≥ α}`.
    pub fn left_quantile(&self, alpha: f64) -> Result<f64> {
        Ok(self.level_info(alpha)?.xi)
    }

    /// `F^∨(α) = sup {x : F(x) ≤ α} = inf {x : F(x) > α}`.
    pub fn right_quantile(&self, alpha: f64) -> Result<f64> {
        Ok(self.level_info(alpha)?.eta)
    }

    pub fn quantile_pair(&self, alpha: f64) -> Result<QuantilePair> {
        let info = self.level_info(alpha)?;
        Ok(QuantilePair {
            xi: info.xi,
            eta: info.eta,
        })
    }

    pub fn level_set_shape(&self, alpha: f64) -> Result<LevelSet> {
        let info = self.level_info(alpha)?;
        let attained = info.f_eta == alpha;
        Ok(match (info.is_plateau(), attained) {
            (true, false) => LevelSet::HalfOpen(info.xi, info.eta),
            (true, true) => LevelSet::Closed(info.xi, info.eta),
            (false, false) => LevelSet::Empty,
            (false, true) => LevelSet::Singleton(info.xi),
        })
    }

    /// `{x : F(x) = α}`.
    pub fn level_set(&self, alpha: f64) -> Result<RealSet> {
        Ok(self.level_set_shape(alpha)?.to_set())
    }

    /// `{x : F(x) ≥ α} = [ξ, ∞)`.
    pub fn level_at_least(&self, alpha: f64) -> Result<RealSet> {
        Ok(Interval::at_least(self.left_quantile(alpha)?).into())
    }

    /// `{x : F(x) < α} = (-∞, ξ)`.
    pub fn level_below(&self, alpha: f64) -> Result<RealSet> {
        Ok(Interval::below(self.left_quantile(alpha)?).into())
    }

    /// `{x : F(x) ≤ α}`: `(-∞, η]` if `F(η) = α`, else `(-∞, η)`.
    pub fn level_at_most(&self, alpha: f64) -> Result<RealSet> {
        let info = self.level_info(alpha)?;
        Ok(if info.f_eta == alpha {
            Interval::at_most(info.eta)
        } else {
            Interval::below(info.eta)
        }
        .into())
    }

    /// Splits `A_{λ,α} = {x : F_λ(x) ≤ α}` into `A⁺` (above `ξ`), `A~` (at `ξ`)
    /// and `A⁻ = (-∞, ξ)`, for `0 < λ ≤ 1`.
    pub fn a_decomposition(&self, lambda: f64, alpha: f64) -> Result<ADecomposition> {
        check_lambda_half_open(lambda)?;
        let info = self.level_info(alpha)?;
        let plus = if !info.is_plateau() {
            RealSet::empty()
        } else if info.f_eta > alpha {
            Interval::open(info.xi, info.eta).into()
        } else {
            Interval::open_closed(info.xi, info.eta).into()
        };
        // βλ ≤ α - q, evaluated the same way as the transform itself
        let tilde = if blend(info.f_xi_left, info.f_xi, lambda) <= alpha {
            Interval::point(info.xi).into()
        } else {
            RealSet::empty()
        };
        Ok(ADecomposition {
            plus,
            tilde,
            minus: Interval::below(info.xi).into(),
        })
    }

    /// `J_F` with jump sizes. Each jump point `x` is also checked to be the
    /// common value of both quantiles at a level strictly inside its jump.
    pub fn jump_set(&self) -> Vec<(f64, f64)> {
        self.jump_points
            .iter()
            .map(|&x| {
                let (lo, hi) = (self.eval_left(x), self.eval(x));
                let u = 0.5 * (lo + hi);
                if u > 0.0 && u < 1.0 {
                    let pair = self.quantile_pair(u).expect("u is inside (0,1)");
                    debug_assert!(
                        pair.xi == x && pair.eta == x,
                        "jump at {x} not isolated by its quantiles"
                    );
                }
                (x, hi - lo)
            })
            .collect()
    }

    /// Whether `value` lies in `F(R) ∪ F⁻(R)`, the set of values taken by `F`
    /// or by its left limits.
    pub fn attains(&self, value: f64) -> bool {
        if value == 0.0 || value == 1.0 {
            return true;
        }
        let left = self.body.left_limits();
        let right = self.body.knot_values();
        if left.contains(&value) || right.contains(&value) {
            return true;
        }
        (0..right.len().saturating_sub(1)).any(|i| right[i] < value && value < left[i + 1])
    }
}
