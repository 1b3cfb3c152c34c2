//! Sampling, the distributional transform and its exact law.
//!
//!     cargo run --release --example distributional_transform

use dtransform::presets::{bernoulli, point_mass};
use dtransform::stochastic::{
    distributional_transform, image_law_atoms, inversion_check, ks_threshold, ks_uniformity,
    sample_inverse, transform_cdf_exact,
};
use dtransform::SeededStream;

fn main() -> dtransform::Result<()> {
    let f = bernoulli();
    let n = 100_000;
    let stream = SeededStream::new(42, 0);
    let xs = sample_inverse(&f, stream, n);

    let raw: Vec<f64> = xs.values.iter().map(|&x| f.eval(x)).collect();
    let randomized = distributional_transform(&f, &xs, stream.companion())?;
    println!("KS of F(X):   {:.5}", ks_uniformity(&raw)?);
    println!(
        "KS of F_V(X): {:.5} (1% threshold {:.5})",
        ks_uniformity(&randomized)?,
        ks_threshold(n)
    );
    println!("atoms of the law of F(X): {:?}", image_law_atoms(&f));

    let b = transform_cdf_exact(&f, &point_mass(0.25), 0.5)?;
    println!(
        "P(F_V(X) <= 0.5) for X = 0.25: {} = 0.5 + {} + {} + {}",
        b.total, b.term_flat, b.term_atom, b.term_left
    );

    let report = inversion_check(&f, SeededStream::new(1, 0), n);
    println!("inversion failures: {} of {}", report.failures, report.n);
    Ok(())
}
