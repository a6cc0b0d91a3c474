//! Higher-order hyperbolic functions and the recurrence systems built on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] roots of unity, truncated power series, the rotation
//!   operator and the `Z_m` projection family.
//! * [`hyperbolic`] pointwise evaluation of `h_0 .. h_{m-1}` and their
//!   addition theorems.
//! * [`poly`] exact sparse multivariate polynomials over big integers.
//! * [`demoivre`] circulant de Moivre matrices and the volume-one invariant.
//! * [`chebyshev`] Tchebysheff m-polynomial systems, streams, generating
//!   functions and monomial expansions.
//! * [`lucas`] symmetric and cyclic-symmetric functions of polynomial roots.
//! * [`companion`] companion matrices of linear recurrences.
//! * [`verify`] the randomized identity-verification suites.

pub mod chebyshev;
pub mod companion;
pub mod demoivre;
mod error;
pub mod hyperbolic;
pub mod lucas;
pub mod poly;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use num_rational::BigRational;

/// Absolute difference scaled by `max(1, |reference|)`.
///
/// Every residual reported by the identity checks uses this measure, so a
/// single tolerance works for values near zero and for values that grow
/// exponentially with the index.
pub fn scaled_residual(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm().max(1.0)
}
