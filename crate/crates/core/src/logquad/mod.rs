//! Log-domain scalars and quadrature for integrands of the form
//! `prefactor · exp(exponent)` whose exponent can reach `10⁹`.

mod bessel;
mod logvalue;
mod quad;

pub use bessel::{bessel_i0_prime_scaled, bessel_i0_scaled, bessel_i1_scaled, ScaledBessel, SERIES_LIMIT};
pub use logvalue::LogValue;
pub use quad::{
    gauss_legendre, integrate, integrate_mantissas, integrate_scaled, integrate_scaled_many, FnIntegrand, Grading,
    QuadOptions, QuadResult, ScaledIntegrand, GL_ORDER, MIN_REL_TOL,
};
