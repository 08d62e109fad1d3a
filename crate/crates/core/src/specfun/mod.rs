//! Special functions and quadrature: Γ, ball volumes, Bessel J of real order
//! and its first zero, Gegenbauer polynomials and their largest zero, and
//! adaptive Gauss–Kronrod integration.

mod bessel;
mod gamma;
mod gegenbauer;
mod quad;

pub use bessel::{bessel_first_zero, bessel_j, BesselOrder};
pub use gamma::{ball_volume, gamma_fn, ln_gamma, sphere_area};
pub use gegenbauer::{gegenbauer, gegenbauer_max_root};
pub use quad::{
    gauss_legendre_pow2, quad_adaptive, quad_adaptive_with, QuadOptions, QuadRule, DEFAULT_MAX_DEPTH, DEFAULT_TOL,
};

pub(crate) use bessel::{bracketed_root, j_scaled_unchecked, j_unchecked};
pub(crate) use gegenbauer::{gegenbauer_at_one, gegenbauer_unchecked};
