//! Exact distribution functions with atoms and plateaus.
//!
//! A distribution function is stored as knots with atoms and linear rises
//! between them ([`MonotoneStepLinear`], validated into a [`Cdf`]). On top of
//! that the crate provides left and right quantiles, level sets, the
//! randomized transform `F(x-) + λ ΔF(x)` and its almost-everywhere inverse,
//! Lebesgue–Stieltjes measures of interval unions, seeded sampling with
//! uniformity checks, and empirical copulas built from transformed samples.

pub mod cdf;
pub mod cli;
pub mod copula;
pub mod dist_file;
pub mod error;
pub mod measure;
pub mod monotone;
pub mod presets;
pub mod realset;
pub mod stochastic;
pub mod transform;
pub mod verify;

pub use cdf::{ADecomposition, Cdf, LevelSet, QuantilePair};
pub use copula::{CopulaSpec, Dependence, JointSample};
pub use dist_file::DistFile;
pub use error::{Error, Result};
pub use monotone::{DfConditionReport, MonotoneStepLinear};
pub use realset::{Bound, Interval, RealSet};
pub use stochastic::{SeededStream, TransformCdfBreakdown};
pub use transform::{NullSetReport, TransformParam};
