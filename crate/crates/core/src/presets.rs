//! Small reference distributions used throughout the docs, tests and CLI data.

use crate::cdf::Cdf;
use crate::dist_file::DistFile;

/// Bernoulli(1/2): mass 1/2 at 0 and at 1.
pub fn bernoulli() -> Cdf {
    DistFile::new()
        .atom(0.0, 0.5)
        .atom(1.0, 0.5)
        .to_cdf()
        .expect("valid preset")
}

/// Rises with slope 1 on `[0, 0.25]`, stays flat at 0.25 until 0.5, jumps by
/// 0.25 at 0.5 and rises with slope 1 on `[0.5, 1]`.
pub fn mixed() -> Cdf {
    DistFile::new()
        .segment(0.0, 0.25, 0.25)
        .atom(0.5, 0.25)
        .segment(0.5, 1.0, 0.5)
        .to_cdf()
        .expect("valid preset")
}

/// Uniform on `[0, 1]`.
pub fn uniform() -> Cdf {
    DistFile::new()
        .segment(0.0, 1.0, 1.0)
        .to_cdf()
        .expect("valid preset")
}

/// A point mass at `x`.
pub fn point_mass(x: f64) -> Cdf {
    DistFile::new().atom(x, 1.0).to_cdf().expect("valid preset")
}
