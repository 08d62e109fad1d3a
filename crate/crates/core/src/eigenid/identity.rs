use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{dot, PlaneWaveEigen, Source};
use crate::error::{domain, Error, Result};
use crate::specfun::{gamma_fn, gauss_legendre_pow2, j_scaled_unchecked, quad_adaptive_with, sphere_area, QuadOptions};

/// One Coulomb-identity check: eigenfunction, center and radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub phi: PlaneWaveEigen,
    pub x: Vec<f64>,
    pub r: f64,
}

/// Residual of the radial ODE and the magnitude it should be compared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual {
    pub residual: f64,
    pub scale: f64,
}

/// Mean of `cos(a + b·cos θ)` over S^{n-1}, θ the angle to a fixed axis.
///
/// The integrand in θ is entire and its even periodic extension is smooth,
/// so Gauss–Legendre on [0, π] converges geometrically once the rule resolves
/// the oscillation frequency b.
fn zonal_cos_mean(n: usize, a: f64, b: f64) -> f64 {
    let mut k = 3u32;
    while ((1usize << k) as f64) < b.abs() + 16.0 && k < 10 {
        k += 1;
    }
    let apply = |k: u32| {
        let rule = gauss_legendre_pow2(k);
        let mut num = 0.0;
        let mut den = 0.0;
        for (th, w) in rule.mapped(0.0, PI) {
            let jac = w * th.sin().powi(n as i32 - 2);
            num += jac * (a + b * th.cos()).cos();
            den += jac;
        }
        num / den
    };
    let mut prev = apply(k);
    while k < 10 {
        k += 1;
        let next = apply(k);
        if (next - prev).abs() <= 1e-15 {
            return next;
        }
        prev = next;
    }
    prev
}

/// Av(s): mean of the source over the sphere ∂B(x, s).
///
/// Each plane wave depends on the sphere point only through its angle to the
/// wavevector, so the (n-1)-dimensional mean reduces exactly to one polar
/// integral per wave.
pub fn radial_average<S: Source + ?Sized>(src: &S, x: &[f64], s: f64) -> f64 {
    let n = src.dim();
    src.levels()
        .iter()
        .map(|(coef, phi)| {
            let rho = phi.lambda().sqrt() * s;
            let sum: f64 = phi.waves().iter().map(|w| w.amp * zonal_cos_mean(n, dot(&w.k, x) + w.phase, rho)).sum();
            coef * sum
        })
        .sum()
}

/// Mean of an arbitrary f over ∂B(x, s) ⊂ R^n by a product rule in
/// hyperspherical coordinates (Gauss–Legendre in each polar angle, trapezoid
/// in the azimuth), doubling the order until two estimates agree within tol/4.
pub fn spherical_mean<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], s: f64, tol: f64) -> Result<f64> {
    let n = x.len();
    if n < 2 {
        return domain("spherical mean needs dimension >= 2");
    }
    let estimate = |k: u32| product_mean(&f, x, s, k);
    let mut k = 3;
    let mut prev = estimate(k);
    let max_k = if n <= 3 { 8 } else { 6 };
    while k < max_k {
        k += 1;
        let next = estimate(k);
        if (next - prev).abs() < tol / 4.0 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy {
        context: format!("product-rule spherical mean in dimension {n}"),
        estimate: prev,
        error: f64::NAN,
    })
}

fn product_mean<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], s: f64, k: u32) -> f64 {
    let n = x.len();
    let polar: Vec<(f64, f64)> = gauss_legendre_pow2(k).mapped(0.0, PI).collect();
    let m = polar.len();
    let azimuth = 2 * m;
    let polar_count = n - 2;
    let mut idx = vec![0usize; polar_count];
    let mut point = vec![0.0; n];
    let mut num = 0.0;
    let mut den = 0.0;
    loop {
        // Polar angles θ_1..θ_{n-2} with measure Π sin^{n-1-j} θ_j.
        let mut weight = 1.0;
        let mut sin_prod = 1.0;
        for (j, &i) in idx.iter().enumerate() {
            let (th, w) = polar[i];
            weight *= w * th.sin().powi((n - 2 - j) as i32);
            point[j] = sin_prod * th.cos();
            sin_prod *= th.sin();
        }
        for a in 0..azimuth {
            let ph = 2.0 * PI * a as f64 / azimuth as f64;
            point[n - 2] = sin_prod * ph.cos();
            point[n - 1] = sin_prod * ph.sin();
            let y: Vec<f64> = x.iter().zip(&point).map(|(xi, pi)| xi + s * pi).collect();
            num += weight * f(&y);
            den += weight;
        }
        // odometer over the polar indices
        let mut j = 0;
        loop {
            if j == polar_count {
                return num / den;
            }
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Q_n(x) = 2^{(n-2)/2} Γ(n/2) n ω_n ∫_0^x s^{(4-n)/2} J_{(n-2)/2}(s) ds.
///
/// The integrand is evaluated as s · (s^{-ν} J_ν(s)), which is smooth at 0.
pub fn qn(n: usize, x: f64) -> Result<f64> {
    if n < 3 {
        return domain(format!("Q_n is defined for n >= 3, got {n}"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("Q_n needs finite x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let nu = (n as f64 - 2.0) / 2.0;
    let constant = 2f64.powf(nu) * gamma_fn(n as f64 / 2.0)? * sphere_area(n)?;
    let opts = QuadOptions::with_tol(1e-13).rel(1e-12);
    let integral = quad_adaptive_with(|s| s * j_scaled_unchecked(nu, s), 0.0, x, opts)?;
    Ok(constant * integral)
}

/// ∫_{‖y-x‖≤r} f(y) / ‖y-x‖^{n-2} dy, computed as ∫_0^r n ω_n s Av(s) ds.
pub fn coulomb_ball_integral<S: Source + ?Sized>(src: &S, x: &[f64], r: f64, tol: f64) -> Result<f64> {
    let n = src.dim();
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("ball radius must be positive, got {r}"));
    }
    if x.len() != n {
        return domain(format!("point has dimension {} but the source has {n}", x.len()));
    }
    let area = sphere_area(n)?;
    let opts = QuadOptions::with_tol(tol).rel(1e-13);
    quad_adaptive_with(|s| area * s * radial_average(src, x, s), 0.0, r, opts)
}

/// |I - Q_n(√λ r)/λ · φ(x)| / (1 + |φ(x)| · |Q_n(√λ r)/λ|).
pub fn verify_identity(phi: &PlaneWaveEigen, x: &[f64], r: f64, tol: f64) -> Result<f64> {
    let n = phi.dim();
    let lambda = phi.lambda();
    let integral = coulomb_ball_integral(phi, x, r, tol)?;
    let profile = qn(n, lambda.sqrt() * r)? / lambda;
    let value = phi.eval(x);
    Ok((integral - profile * value).abs() / (1.0 + value.abs() * profile.abs()))
}

/// r²R'' + (n-3) r R' - (n-3) R + λ r² R for R(r) = n ω_n r Av(r), with
/// central differences of step 1e-4·max(1, r).
pub fn ode_residual_r(n: usize, phi: &PlaneWaveEigen, x: &[f64], r: f64) -> Result<OdeResidual> {
    if n < 4 || phi.dim() != n {
        return domain(format!("the radial ODE check needs n >= 4 matching the eigenfunction, got {n}"));
    }
    if !(r > 0.0) {
        return domain(format!("radius must be positive, got {r}"));
    }
    let area = sphere_area(n)?;
    let big_r = |s: f64| area * s * radial_average(phi, x, s);
    let h = 1e-4 * r.max(1.0);
    let (rm, r0, rp) = (big_r(r - h), big_r(r), big_r(r + h));
    let d1 = (rp - rm) / (2.0 * h);
    let d2 = (rp - 2.0 * r0 + rm) / (h * h);
    let c = n as f64 - 3.0;
    let lambda = phi.lambda();
    let residual = r * r * d2 + c * r * d1 - c * r0 + lambda * r0 * r * r;
    let scale = r * r * d2.abs() + c * r * d1.abs() + c * r0.abs() + lambda * r0.abs() * r * r;
    Ok(OdeResidual { residual, scale })
}
