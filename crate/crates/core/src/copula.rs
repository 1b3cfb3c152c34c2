//! Copulas in both directions: composing a copula with marginals into a
//! joint distribution function, and extracting the copula of a joint sample
//! from the distributional transforms of its coordinates.

use serde::Serialize;

use crate::cdf::{blend, Cdf};
use crate::error::{Error, Result};
use crate::stochastic::{sample_inverse, SeededStream};

/// An empirical copula: `Ĉ(γ) = #{rows with u_j ≤ γ_j for all j} / N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalCopula {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl EmpiricalCopula {
    /// Each row must have length `dim`.
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: r.len(),
            });
        }
        Ok(Self { dim, rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Column `j` of the transformed sample.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CopulaSpec {
    /// `∏ γ_j` in the given dimension.
    Independence(usize),
    /// `min_j γ_j` in the given dimension.
    Comonotone(usize),
    /// `max(γ_1 + γ_2 - 1, 0)`; only dimension 2 is a copula.
    Countermonotone(usize),
    Empirical(EmpiricalCopula),
}

impl CopulaSpec {
    pub fn dim(&self) -> usize {
        match self {
            CopulaSpec::Independence(n)
            | CopulaSpec::Comonotone(n)
            | CopulaSpec::Countermonotone(n) => *n,
            CopulaSpec::Empirical(e) => e.dim,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CopulaSpec::Independence(_) => "independence",
            CopulaSpec::Comonotone(_) => "comonotone",
            CopulaSpec::Countermonotone(_) => "countermonotone",
            CopulaSpec::Empirical(_) => "empirical",
        }
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// `C(γ)`.
pub fn copula_eval(c: &CopulaSpec, gamma: &[f64]) -> Result<f64> {
    check_dim(c.dim(), gamma.len())?;
    Ok(match c {
        CopulaSpec::Independence(_) => gamma.iter().product(),
        CopulaSpec::Comonotone(_) => gamma.iter().copied().fold(1.0, f64::min),
        CopulaSpec::Countermonotone(n) => {
            if *n != 2 {
                return Err(Error::CountermonotoneDimension(*n));
            }
            (gamma[0] + gamma[1] - 1.0).max(0.0)
        }
        CopulaSpec::Empirical(e) => {
            let hits = e
                .rows
                .iter()
                .filter(|r| r.iter().zip(gamma).all(|(u, g)| u <= g))
                .count();
            hits as f64 / e.rows.len() as f64
        }
    })
}

/// `C`-volume of the box `[lo, hi]`: the alternating sum over its corners.
/// Non-negative for every copula.
pub fn rectangle_volume(c: &CopulaSpec, lo: &[f64], hi: &[f64]) -> Result<f64> {
    check_dim(c.dim(), lo.len())?;
    check_dim(c.dim(), hi.len())?;
    let n = lo.len();
    let mut volume = 0.0;
    let mut corner = vec![0.0; n];
    for mask in 0u32..(1 << n) {
        let mut lows = 0;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                corner[j] = lo[j];
                lows += 1;
            } else {
                corner[j] = hi[j];
            }
        }
        let sign = if lows % 2 == 0 { 1.0 } else { -1.0 };
        volume += sign * copula_eval(c, &corner)?;
    }
    Ok(volume)
}

/// `C(H_1(x_1), …, H_n(x_n))`.
pub fn sklar_compose(c: &CopulaSpec, marginals: &[Cdf], x: &[f64]) -> Result<f64> {
    check_dim(c.dim(), marginals.len())?;
    check_dim(c.dim(), x.len())?;
    let gamma: Vec<f64> = marginals.iter().zip(x).map(|(h, &xj)| h.eval(xj)).collect();
    copula_eval(c, &gamma)
}

/// How the coordinates of a generated joint sample depend on each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dependence {
    /// A separate stream per coordinate.
    Independent,
    /// One uniform pushed through every left quantile.
    Comonotone,
    /// `u` and `1 - u`, two coordinates only.
    Countermonotone,
}

impl Dependence {
    /// The copula of a sample generated this way.
    pub fn copula(&self, dim: usize) -> Result<CopulaSpec> {
        match self {
            Dependence::Independent => Ok(CopulaSpec::Independence(dim)),
            Dependence::Comonotone => Ok(CopulaSpec::Comonotone(dim)),
            Dependence::Countermonotone if dim == 2 => Ok(CopulaSpec::Countermonotone(2)),
            Dependence::Countermonotone => Err(Error::CountermonotoneDimension(dim)),
        }
    }
}

/// `N × n` observations together with their marginals and the streams that
/// produced each coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSample {
    pub rows: Vec<Vec<f64>>,
    pub marginals: Vec<Cdf>,
    pub provenance: Vec<SeededStream>,
}

impl JointSample {
    /// Coordinate `j` uses stream id `j` for independent sampling; the
    /// dependent schemes share stream id 0.
    pub fn generate(
        marginals: &[Cdf],
        dependence: Dependence,
        seed: u64,
        n: usize,
    ) -> Result<Self> {
        let dim = marginals.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if n == 0 {
            return Err(Error::EmptySample);
        }
        dependence.copula(dim)?;
        let (columns, provenance): (Vec<Vec<f64>>, Vec<SeededStream>) = match dependence {
            Dependence::Independent => marginals
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    let s = sample_inverse(f, SeededStream::new(seed, j as u64), n);
                    (s.values, s.stream)
                })
                .unzip(),
            Dependence::Comonotone | Dependence::Countermonotone => {
                let stream = SeededStream::new(seed, 0);
                let us = stream.uniforms(n);
                marginals
                    .iter()
                    .enumerate()
                    .map(|(j, f)| {
                        let flip = dependence == Dependence::Countermonotone && j == 1;
                        let col = us
                            .iter()
                            .map(|&u| {
                                f.left_quantile(if flip { 1.0 - u } else { u })
                                    .expect("inside (0,1)")
                            })
                            .collect();
                        (col, stream)
                    })
                    .unzip()
            }
        };
        let rows = (0..n)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Ok(Self {
            rows,
            marginals: marginals.to_vec(),
            provenance,
        })
    }

    pub fn dim(&self) -> usize {
        self.marginals.len()
    }
}

/// The empirical copula of `U_ij = F_j(X_ij-) + V_ij ΔF_j(X_ij)`, all `V_ij`
/// drawn row by row from `v_stream`.
pub fn dt_copula(sample: &JointSample, v_stream: SeededStream) -> Result<CopulaSpec> {
    if sample
        .provenance
        .iter()
        .any(|s| s.stream_id == v_stream.stream_id)
    {
        return Err(Error::StreamCollision(v_stream.stream_id));
    }
    let dim = sample.dim();
    let vs = v_stream.uniforms(sample.rows.len() * dim);
    let rows = sample
        .rows
        .iter()
        .zip(vs.chunks(dim.max(1)))
        .map(|(row, v)| {
            check_dim(dim, row.len())?;
            Ok(row
                .iter()
                .zip(&sample.marginals)
                .zip(v)
                .map(|((&x, f), &v)| blend(f.eval_left(x), f.eval(x), v))
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(CopulaSpec::Empirical(EmpiricalCopula::new(dim, rows)?))
}

/// Fraction of rows with `X_ij ≤ x_j` for every `j`.
pub fn empirical_joint_cdf(sample: &JointSample, x: &[f64]) -> Result<f64> {
    check_dim(sample.dim(), x.len())?;
    if sample.rows.is_empty() {
        return Err(Error::EmptySample);
    }
    let hits = sample
        .rows
        .iter()
        .filter(|r| r.iter().zip(x).all(|(a, b)| a <= b))
        .count();
    Ok(hits as f64 / sample.rows.len() as f64)
}

/// `max |H(x) - Ĉ(F_1(x_1), …, F_n(x_n))|` over the grid, where `H` is the
/// empirical joint distribution function of the sample.
pub fn sklar_identity_check(
    sample: &JointSample,
    c_hat: &CopulaSpec,
    grid: &[Vec<f64>],
) -> Result<f64> {
    check_dim(sample.dim(), c_hat.dim())?;
    let mut worst: f64 = 0.0;
    for x in grid {
        let lhs = empirical_joint_cdf(sample, x)?;
        let rhs = sklar_compose(c_hat, &sample.marginals, x)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// At levels where every marginal is flat (`F_i^∧(α_i) < F_i^∨(α_i)`), the
/// copula equals the joint distribution function at the left quantiles.
/// Returns `(Ĉ(α), H(F_1^∧(α_1), …))`.
pub fn copula_at_flat_alpha(
    sample: &JointSample,
    c_hat: &CopulaSpec,
    alphas: &[f64],
) -> Result<(f64, f64)> {
    check_dim(sample.dim(), alphas.len())?;
    let mut xis = Vec::with_capacity(alphas.len());
    for (i, (f, &a)) in sample.marginals.iter().zip(alphas).enumerate() {
        let pair = f.quantile_pair(a)?;
        if pair.xi == pair.eta {
            return Err(Error::NotAFlatLevel(i));
        }
        xis.push(pair.xi);
    }
    Ok((
        copula_eval(c_hat, alphas)?,
        empirical_joint_cdf(sample, &xis)?,
    ))
}

/// Every vector of plateau levels, one level per marginal.
pub fn flat_level_vectors(marginals: &[Cdf]) -> Vec<Vec<f64>> {
    marginals.iter().fold(vec![Vec::new()], |acc, f| {
        acc.iter()
            .flat_map(|prefix| {
                f.plateau_levels().iter().map(move |&a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect()
    })
}

/// All knots of every marginal shifted by `-0.25`, `0` and `+0.25`, combined
/// coordinate-wise.
pub fn knot_grid(marginals: &[Cdf]) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = marginals
        .iter()
        .map(|f| {
            let mut axis: Vec<f64> = f
                .knots()
                .iter()
                .flat_map(|&x| [x - 0.25, x, x + 0.25])
                .collect();
            axis.sort_by(f64::total_cmp);
            axis.dedup();
            axis
        })
        .collect();
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect()
    })
}
