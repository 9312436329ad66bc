//! Classical special functions consumed by the q-series expansions.

mod bernoulli;
mod gamma;
mod polylog;
mod zeta;

pub use bernoulli::{bernoulli_number, bernoulli_poly, bernoulli_real, rational_to_real, BERNOULLI_DEGREE_CAP};
pub use gamma::{digamma, gamma, gamma_complex, ln_gamma, polygamma};
pub use polylog::{divisor_sigma, harmonic, polylog, polylog_with_err};
pub use zeta::{
    hurwitz_zeta, hurwitz_zeta_real, hurwitz_zeta_sderiv, lerch_value, riemann_zeta, zeta_int, zeta_nonpositive_int,
};

pub(crate) use bernoulli::{bernoulli_poly_special, special_x, SpecialX};
pub(crate) use zeta::ReflectedZetaSeq;
