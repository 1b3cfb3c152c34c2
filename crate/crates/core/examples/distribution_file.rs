//! Loading a distribution file, normalizing a bounded function and checking
//! the distribution-function conditions.
//!
//!     cargo run --example distribution_file

use dtransform::{DistFile, MonotoneStepLinear};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/mixed.json"))?;
    let f = DistFile::from_json(&text)?.to_cdf()?;
    println!(
        "knots {:?}, jumps {:?}, flat levels {:?}",
        f.knots(),
        f.jump_points(),
        f.plateau_levels()
    );

    let g = MonotoneStepLinear::new(vec![0.0, 1.0], vec![0.25, 0.25], vec![0.0], 0.2)?;
    println!("G conditions: {:?}", g.df_condition_report());
    let normalized = g.normalize()?;
    println!(
        "normalized: F(0) = {}, F(1) = {}",
        normalized.eval(0.0),
        normalized.eval(1.0)
    );

    match DistFile::new().atom(0.0, 0.5).atom(1.0, 0.6).to_cdf() {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
