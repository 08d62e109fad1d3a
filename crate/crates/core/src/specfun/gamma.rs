use std::f64::consts::PI;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Natural log of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return domain(format!("ln_gamma requires finite x > 0, got {x}"));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for x > 0, relative error around 1e-15 over the representable range.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return domain(format!("gamma requires finite x > 0, got {x}"));
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_unchecked(x + 1.0) / x;
    }
    // Exact factorials keep integer arguments free of Lanczos rounding.
    if x == x.floor() && x <= 30.0 {
        return (1..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    if x > 140.0 {
        return ln_gamma_unchecked(x).exp();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// Volume ω_n of the unit ball in R^n.
pub fn ball_volume(n: usize) -> Result<f64> {
    if n < 1 {
        return domain("ball_volume requires n >= 1");
    }
    let half = n as f64 / 2.0;
    Ok(PI.powf(half) / gamma_unchecked(half + 1.0))
}

/// Surface area n·ω_n of the unit sphere S^{n-1} ⊂ R^n.
pub fn sphere_area(n: usize) -> Result<f64> {
    Ok(n as f64 * ball_volume(n)?)
}
