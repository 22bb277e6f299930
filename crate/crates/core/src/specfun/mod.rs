//! Building blocks of the coverage analysis: the association-distance law,
//! the interference and desired-signal Laplace transforms, and the Gauss
//! hypergeometric function behind the former.

mod distance;
pub mod hyp2f1;
mod laplace;

use num_complex::Complex64;

pub use distance::{
    association_distance_cdf, association_distance_pdf, sample_association_distance,
};
pub use hyp2f1::{hyp2f1, Hyp2F1Params};
pub use laplace::{
    interference_shape, laplace_desired, laplace_interference,
    laplace_interference_quadrature_oracle,
};

/// `ln(1 + w)` without cancellation for small `|w|`.
pub fn ln1p(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        // alternating series, truncation error below |w|^7
        let mut acc = Complex64::new(0.0, 0.0);
        let mut power = w;
        for k in 1..=6 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += power * (sign / k as f64);
            power *= w;
        }
        acc
    } else {
        (1.0 + w).ln()
    }
}

/// `exp(x) - 1` without cancellation for small `|x|`.
pub fn expm1(x: Complex64) -> Complex64 {
    if x.norm() < 1e-3 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..=7 {
            term *= x / k as f64;
            acc += term;
        }
        acc
    } else {
        x.exp() - 1.0
    }
}
