//! Sklar's identity in both directions.
//!
//!     cargo run --release --example copulas

use dtransform::copula::{
    copula_at_flat_alpha, copula_eval, dt_copula, knot_grid, sklar_compose, sklar_identity_check,
};
use dtransform::presets::{bernoulli, mixed, uniform};
use dtransform::{CopulaSpec, Dependence, JointSample, SeededStream};

fn main() -> dtransform::Result<()> {
    let pair = [bernoulli(), uniform()];
    let h = sklar_compose(&CopulaSpec::Comonotone(2), &pair, &[0.0, 0.3])?;
    println!("comonotone joint CDF of (Bernoulli, uniform) at (0, 0.3) = {h}");

    let marginals = [mixed(), mixed()];
    let sample = JointSample::generate(&marginals, Dependence::Independent, 42, 100_000)?;
    let c_hat = dt_copula(&sample, SeededStream::new(42, 1000))?;
    println!("C_hat(0.5, 0.5) = {:.4}", copula_eval(&c_hat, &[0.5, 0.5])?);
    println!(
        "Sklar deviation on the knot grid: {:.2e}",
        sklar_identity_check(&sample, &c_hat, &knot_grid(&marginals))?
    );
    let (lhs, rhs) = copula_at_flat_alpha(&sample, &c_hat, &[0.25, 0.25])?;
    println!("at the flat level (0.25, 0.25): C_hat = {lhs:.4}, joint CDF at the left quantiles = {rhs:.4}");
    Ok(())
}
