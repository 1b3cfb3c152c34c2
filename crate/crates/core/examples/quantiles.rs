//! Left and right quantiles, level sets and the split of `{F_λ ≤ α}`.
//!
//!     cargo run --example quantiles

use dtransform::presets::{bernoulli, mixed};

fn main() -> dtransform::Result<()> {
    let f = mixed();
    println!(
        "F(0.3) = {}, F(0.5-) = {}, jump at 0.5 = {}",
        f.eval(0.3),
        f.eval_left(0.5),
        f.jump(0.5)
    );

    for alpha in [0.1, 0.25, 0.3, 0.5, 0.75] {
        let q = f.quantile_pair(alpha)?;
        let shape = f.level_set_shape(alpha)?;
        println!(
            "alpha {alpha:<5} xi {:<6} eta {:<6} {{F = alpha}} = {} ({})",
            q.xi,
            q.eta,
            shape.to_set(),
            shape.tag()
        );
    }

    let b = bernoulli();
    let d = b.a_decomposition(0.5, 0.5)?;
    println!(
        "Bernoulli, lambda 0.5, alpha 0.5: A+ = {}, A~ = {}, A- = {}",
        d.plus, d.tilde, d.minus
    );
    println!("  union = {}", d.union());
    println!(
        "jumps: {:?}, flat levels: {:?}",
        b.jump_set(),
        b.plateau_levels()
    );
    Ok(())
}
