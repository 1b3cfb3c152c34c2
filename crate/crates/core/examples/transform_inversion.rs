//! The transform `F(x-) + λ ΔF(x)`, the jump bijection and inversion off the
//! exceptional set.
//!
//!     cargo run --example transform_inversion

use dtransform::presets::{bernoulli, mixed};
use dtransform::transform::{
    invert_transform, null_set, phi, phi_inverse, quantile_range_of_point, transform,
};
use dtransform::TransformParam;

fn main() -> dtransform::Result<()> {
    let f = mixed();
    println!(
        "F_0.5(0.5) = {}",
        transform(&f, 0.5, TransformParam::new(0.5)?)
    );
    println!(
        "levels with left quantile 0.5: {}",
        quantile_range_of_point(&f, 0.5)
    );

    let b = bernoulli();
    let alphas = phi(&b, &[0.4, 0.6])?;
    println!(
        "phi([0.4, 0.6]) = {alphas:?}, back: {:?}",
        phi_inverse(&b, &alphas)?
    );

    for lambda in [0.5, 1.0] {
        let n = null_set(&b, lambda)?;
        println!(
            "Bernoulli, lambda {lambda}: N = {} with measure {} (boundary part {})",
            n.union(),
            n.total_measure,
            n.boundary_measure
        );
    }

    let n = null_set(&f, 1.0)?;
    for x in [0.1, 0.3, 0.5, 0.75] {
        let y = invert_transform(&f, x, 1.0)?;
        println!("x {x:<5} -> {y:<6} in null set: {}", n.contains(x));
    }
    Ok(())
}
