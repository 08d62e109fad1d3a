use std::f64::consts::PI;

use super::{coulomb_ball_integral, EigenMix, PlaneWaveEigen, Source};
use crate::error::{domain, Result};
use crate::specfun::{gauss_legendre_pow2, quad_adaptive_with, QuadOptions};

const PDE_STEP: f64 = 1e-3;

/// Time factor c(t) of the solution u = c(t)·φ of u_tt - Δu = φ with zero
/// initial data: c'' + λc = 1, c(0) = c'(0) = 0, so c(t) = (1 - cos(√λ t))/λ.
pub fn wave_factor(lambda: f64, t: f64) -> f64 {
    (1.0 - (lambda.sqrt() * t).cos()) / lambda
}

/// Σ a_k c_k(t) φ_k(x), the closed-form solution for a source of eigen-levels.
pub fn duhamel_closed_form<S: Source + ?Sized>(src: &S, x: &[f64], t: f64) -> f64 {
    src.levels().iter().map(|(a, phi)| a * wave_factor(phi.lambda(), t) * phi.eval(x)).sum()
}

/// 2π Σ_k λ_k^{-1/2}.
pub fn bound_theorem3(mix: &EigenMix) -> f64 {
    2.0 * PI * mix.lambdas().iter().map(|l| 1.0 / l.sqrt()).sum::<f64>()
}

/// Kirchhoff's retarded potential (1/4π) ∫_{B(x,t)} f(y)/‖y-x‖ dy in R³.
pub fn kirchhoff_3d<S: Source + ?Sized>(src: &S, x: &[f64], t: f64, tol: f64) -> Result<f64> {
    if src.dim() != 3 {
        return domain(format!("Kirchhoff's formula needs dimension 3, got {}", src.dim()));
    }
    Ok(coulomb_ball_integral(src, x, t, 4.0 * PI * tol)? / (4.0 * PI))
}

/// Duhamel integral of the two-dimensional Poisson formula,
/// `(1/2π) ∫_0^t ∫_{B(x,τ)} f(y) / sqrt(τ² - ‖y-x‖²) dy dτ` with τ = t - s.
///
/// With y = x + τρω the inner integral is `τ ∫_0^1 ρ (1-ρ²)^{-1/2} G(ρ) dρ`,
/// G the angular integral; the further substitution ρ = sqrt(1-u²) removes
/// the inverse square root and leaves `τ ∫_0^1 G(sqrt(1-u²)) du`.
pub fn poisson_2d<S: Source + ?Sized>(src: &S, x: &[f64], t: f64, tol: f64) -> Result<f64> {
    if src.dim() != 2 {
        return domain(format!("Poisson's formula needs dimension 2, got {}", src.dim()));
    }
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("time must be positive, got {t}"));
    }
    let kappa = src.max_frequency();
    let inner = |tau: f64| {
        let band = tau * kappa;
        let azimuth = (1.5 * band).ceil() as usize + 32;
        let angular = |rho: f64| {
            let mut sum = 0.0;
            for a in 0..azimuth {
                let w = 2.0 * PI * a as f64 / azimuth as f64;
                let y = [x[0] + tau * rho * w.cos(), x[1] + tau * rho * w.sin()];
                sum += src.eval(&y);
            }
            sum * 2.0 * PI / azimuth as f64
        };
        let mut k = 3u32;
        while ((1usize << k) as f64) < band + 16.0 && k < 10 {
            k += 1;
        }
        let radial = |k: u32| {
            gauss_legendre_pow2(k).mapped(0.0, 1.0).map(|(u, w)| w * angular((1.0 - u * u).sqrt())).sum::<f64>()
        };
        tau * radial(k)
    };
    let opts = QuadOptions::with_tol(2.0 * PI * tol).rel(1e-13);
    Ok(quad_adaptive_with(inner, 0.0, t, opts)? / (2.0 * PI))
}

/// |u_tt - Δu - φ| at (t, x) for u(t, x) = c_λ(t) φ(x), by central differences of step 1e-3.
pub fn wave_pde_residual(lambda: f64, phi: &PlaneWaveEigen, x: &[f64], t: f64) -> f64 {
    let u = |s: f64, y: &[f64]| wave_factor(lambda, s) * phi.eval(y);
    pde_residual(&u, |y| phi.eval(y), x, t)
}

/// The same residual for u = Σ a_k c_k(t) φ_k and source f = Σ a_k φ_k.
pub fn wave_pde_residual_mix(mix: &EigenMix, x: &[f64], t: f64) -> f64 {
    let u = |s: f64, y: &[f64]| duhamel_closed_form(mix, y, s);
    pde_residual(&u, |y| mix.eval(y), x, t)
}

fn pde_residual<U, F>(u: &U, f: F, x: &[f64], t: f64) -> f64
where
    U: Fn(f64, &[f64]) -> f64,
    F: Fn(&[f64]) -> f64,
{
    let h = PDE_STEP;
    let u0 = u(t, x);
    let u_tt = (u(t + h, x) - 2.0 * u0 + u(t - h, x)) / (h * h);
    let mut lap = 0.0;
    let mut y = x.to_vec();
    for i in 0..x.len() {
        y[i] = x[i] + h;
        let up = u(t, &y);
        y[i] = x[i] - h;
        let down = u(t, &y);
        y[i] = x[i];
        lap += (up - 2.0 * u0 + down) / (h * h);
    }
    (u_tt - lap - f(x)).abs()
}
