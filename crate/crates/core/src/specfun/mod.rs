//! Special functions and quadrature used by the quantum modules.
//!
//! Everything here is real-valued: Bessel functions are only ever evaluated
//! at non-negative arguments, and the confluent hypergeometric function is
//! only needed on its polynomial branch.

mod bessel;
mod gamma;
mod poly;
pub mod quad;

pub use bessel::bessel_j;
pub use gamma::{gamma, ln_gamma};
pub use poly::{hermite, kummer_u_poly, laguerre};
pub use quad::{integrate_quad, AdaptiveQuad, QuadMethod, QuadratureRule};

pub(crate) use bessel::bessel_j_unchecked;
pub(crate) use gamma::ln_gamma_unchecked;

/// Sign function with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
