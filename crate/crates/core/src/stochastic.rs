//! Seeded sampling, the distributional transform `U = F_V(X)`, the exact law
//! of `F_V(X)` for an arbitrary law of `X`, and sampled checks of uniformity
//! and almost-sure inversion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::cdf::{blend, Cdf};
use crate::error::{Error, Result};
use crate::measure::{measure_interval, measure_set};
use crate::realset::Interval;
use crate::transform::null_set;

/// Tolerance on `x` when comparing `F^∧(F_V(x))` with `x` off the atoms.
pub const INVERSION_TOLERANCE: f64 = 1e-9;

/// Asymptotic two-sided Kolmogorov–Smirnov critical value at the 1% level,
/// before division by `√n`.
pub const KS_CRITICAL_1PCT: f64 = 1.6276;

/// A reproducible random stream. Equal `(seed, stream_id)` pairs give equal
/// sequences; different `stream_id`s give independent ChaCha streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A stream with the same seed and a distinct id, for the `V` variates
    /// that go with the `X` sample drawn from `self`.
    pub fn companion(&self) -> Self {
        Self {
            seed: self.seed,
            stream_id: self.stream_id ^ (1 << 63),
        }
    }

    /// `n` draws from the open interval (0, 1).
    pub fn uniforms(&self, n: usize) -> Vec<f64> {
        let mut rng = self.rng();
        (0..n).map(|_| open_uniform(&mut rng)).collect()
    }
}

/// Uniform on (0, 1); the endpoints are rejected and redrawn.
pub fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 && u < 1.0 {
            return u;
        }
    }
}

/// Values together with the stream that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub values: Vec<f64>,
    pub stream: SeededStream,
}

/// `x_i = F^∧(u_i)` for uniforms `u_i` from `stream`.
pub fn sample_inverse(f: &Cdf, stream: SeededStream, n: usize) -> Sample {
    let values = stream
        .uniforms(n)
        .into_iter()
        .map(|u| f.left_quantile(u).expect("open uniforms are inside (0,1)"))
        .collect();
    Sample { values, stream }
}

/// `F(x_i-) + v_i ΔF(x_i)` for given `v_i`.
pub fn randomized_transform(f: &Cdf, xs: &[f64], vs: &[f64]) -> Vec<f64> {
    xs.iter()
        .zip(vs)
        .map(|(&x, &v)| blend(f.eval_left(x), f.eval(x), v))
        .collect()
}

/// `u_i = F(x_i-) + V_i ΔF(x_i)` with `V_i` uniform from `v_stream`, which
/// must not share its id with the stream of `xs`.
pub fn distributional_transform(f: &Cdf, xs: &Sample, v_stream: SeededStream) -> Result<Vec<f64>> {
    if v_stream.stream_id == xs.stream.stream_id {
        return Err(Error::StreamCollision(v_stream.stream_id));
    }
    let vs = v_stream.uniforms(xs.values.len());
    Ok(randomized_transform(f, &xs.values, &vs))
}

/// The decomposition `P(F_V(X) ≤ α) = α + term_flat + term_atom + term_left`
/// for `X` with an arbitrary law and `V` uniform and independent of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformCdfBreakdown {
    pub alpha: f64,
    /// `ξ = F^∧(α)`
    pub xi: f64,
    /// `β = ΔF(ξ)`
    pub beta: f64,
    /// `q = F(ξ-)`
    pub q: f64,
    /// `(α - F(ξ)) / β`, or 0 when `β = 0`
    pub c_beta: f64,
    /// `P(X > ξ, F(X) = α)`
    pub term_flat: f64,
    /// `c_β (P(X = ξ) - β)`
    pub term_atom: f64,
    /// `P(X ≤ ξ) - F(ξ)`
    pub term_left: f64,
    pub total: f64,
}

/// Exact `P(F_V(X) ≤ α)` where `F` drives the transform and `law` is the
/// distribution of `X`.
pub fn transform_cdf_exact(f: &Cdf, law: &Cdf, alpha: f64) -> Result<TransformCdfBreakdown> {
    let info = f.level_info(alpha)?;
    let (xi, beta, q) = (info.xi, info.beta(), info.f_xi_left);
    let c_beta = if beta == 0.0 {
        0.0
    } else {
        (alpha - info.f_xi) / beta
    };
    let beyond = f
        .level_set(alpha)?
        .intersection(&Interval::above(xi).into());
    let term_flat = measure_set(law, &beyond)?.value();
    // adding 0.0 maps a negative zero to zero
    let term_atom = c_beta * (law.jump(xi) - beta) + 0.0;
    let term_left = law.eval(xi) - info.f_xi;
    let total = alpha + term_flat + term_atom + term_left;
    Ok(TransformCdfBreakdown {
        alpha,
        xi,
        beta,
        q,
        c_beta,
        term_flat,
        term_atom,
        term_left,
        total,
    })
}

/// Monte Carlo estimate of `P(F_V(X) ≤ α)` with `X ~ law` drawn from `stream`
/// and `V` from its companion.
pub fn transform_cdf_monte_carlo(
    f: &Cdf,
    law: &Cdf,
    alpha: f64,
    stream: SeededStream,
    n: usize,
) -> Result<f64> {
    crate::cdf::check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let xs = sample_inverse(law, stream, n);
    let us = distributional_transform(f, &xs, stream.companion())?;
    Ok(us.iter().filter(|&&u| u <= alpha).count() as f64 / n as f64)
}

/// Two-sided Kolmogorov–Smirnov distance to the uniform law on (0,1):
/// `max_i max(i/n - u_(i), u_(i) - (i-1)/n)`.
pub fn ks_uniformity(us: &[f64]) -> Result<f64> {
    if us.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = us.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let i = i as f64;
            ((i + 1.0) / n - u).max(u - i / n)
        })
        .fold(0.0, f64::max))
}

/// `KS_CRITICAL_1PCT / √n`
pub fn ks_threshold(n: usize) -> f64 {
    KS_CRITICAL_1PCT / (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    pub stream: SeededStream,
    pub n: usize,
    /// Draws with `F^∧(F_V(X)) ≠ X`.
    pub failures: usize,
    /// Draws with `F^∧(F(X)) ≠ X`, evaluated only when `0 < F(X) < 1` almost
    /// surely.
    pub shortcut_failures: Option<usize>,
}

fn same_point(f: &Cdf, x: f64, y: f64) -> bool {
    if f.jump(x) > 0.0 {
        x == y
    } else {
        (x - y).abs() <= INVERSION_TOLERANCE
    }
}

fn inverts(f: &Cdf, x: f64, u: f64) -> bool {
    u > 0.0 && u < 1.0 && same_point(f, x, f.left_quantile(u).expect("u is inside (0,1)"))
}

/// Draws `X ~ F` from `stream` and `V` from its companion and counts the
/// draws where `F^∧(F_V(X))` misses `X`.
pub fn inversion_check(f: &Cdf, stream: SeededStream, n: usize) -> InversionReport {
    let xs = sample_inverse(f, stream, n);
    let us = distributional_transform(f, &xs, stream.companion()).expect("companion ids differ");
    let failures = xs
        .values
        .iter()
        .zip(&us)
        .filter(|&(&x, &u)| !inverts(f, x, u))
        .count();
    let boundary_free = null_set(f, 1.0)
        .expect("λ = 1 is admissible")
        .hypothesis_holds();
    let shortcut_failures = boundary_free.then(|| {
        xs.values
            .iter()
            .filter(|&&x| !inverts(f, x, f.eval(x)))
            .count()
    });
    InversionReport {
        stream,
        n,
        failures,
        shortcut_failures,
    }
}

/// The atoms of the law of `F(X)` for `X ~ F`: value `F(x)` with mass
/// `ΔF(x)` for every jump point `x`. Non-empty exactly when `F(X)` fails to be
/// uniform.
pub fn image_law_atoms(f: &Cdf) -> Vec<(f64, f64)> {
    f.jump_set()
        .into_iter()
        .map(|(x, m)| (f.eval(x), m))
        .collect()
}

/// Exact `P(F(X) ≤ α)` for `X ~ F`, as `μ_F({F ≤ α})`.
pub fn image_law_cdf(f: &Cdf, alpha: f64) -> Result<f64> {
    Ok(measure_set(f, &f.level_at_most(alpha)?)?.value())
}

/// Exact `P(X ≤ F^∧(α))` for `X ~ F`.
pub fn quantile_cdf(f: &Cdf, alpha: f64) -> Result<f64> {
    Ok(measure_interval(f, &Interval::at_most(f.left_quantile(alpha)?))?.value())
}

/// Sample correlation of `U = F_V(X)` and `Y = F(X-)`. Reported for interest
/// only; whether `U` and `Y` are independent in general is not known.
pub fn transform_pair_correlation(f: &Cdf, stream: SeededStream, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::EmptySample);
    }
    let xs = sample_inverse(f, stream, n);
    let us = distributional_transform(f, &xs, stream.companion())?;
    let ys: Vec<f64> = xs.values.iter().map(|&x| f.eval_left(x)).collect();
    Ok(correlation(&us, &ys))
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return f64::NAN;
    }
    sab / (saa * sbb).sqrt()
}
