//! Lebesgue–Stieltjes measures of intervals, unions and level sets.
//!
//!     cargo run --example measures

use dtransform::measure::{measure_interval, measure_level_set, measure_set};
use dtransform::presets::{bernoulli, mixed};
use dtransform::{Interval, RealSet};

fn main() -> dtransform::Result<()> {
    let f = mixed();
    for i in [
        Interval::open_closed(0.25, 0.5),
        Interval::point(0.5),
        Interval::open(0.5, 1.0),
        Interval::everything(),
    ] {
        println!("mu({i}) = {}", measure_interval(&f, &i)?.value());
    }

    let tails: RealSet = "(-inf, 0) u [1, +inf)".parse()?;
    println!(
        "Bernoulli: mu({tails}) = {}",
        measure_set(&bernoulli(), &tails)?.value()
    );

    for alpha in [0.25, 0.5] {
        println!(
            "mu(F = {alpha}) = {}",
            measure_level_set(&f, alpha)?.value()
        );
    }
    Ok(())
}
