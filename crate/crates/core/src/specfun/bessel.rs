//! Bessel functions of the first kind for real order ν ≥ 0 and real x ≥ 0.
//!
//! Small arguments (x ≤ 6) use the ascending power series. Larger arguments
//! use Miller's backward recurrence normalised with the Neumann-type identity
//!
//! ```text
//! (x/2)^μ = Σ_{m≥0} (μ + 2m) Γ(μ + m) / m! · J_{μ+2m}(x),   0 ≤ μ < 1,
//! ```
//!
//! which reduces to `1 = J_0 + 2 Σ J_{2m}` at μ = 0.

use super::gamma::{gamma_unchecked, ln_gamma_unchecked};
use crate::error::{domain, Error, Result};

const SERIES_LIMIT: f64 = 6.0;
const ZERO_GRID_STEP: f64 = 0.25;

/// A validated Bessel order ν (finite, ν ≥ 0).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return domain(format!("Bessel order must be finite and >= 0, got {nu}"));
        }
        Ok(Self(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// J_ν(x).
    pub fn j(self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return domain(format!("Bessel J requires finite x >= 0, got {x}"));
        }
        Ok(j_unchecked(self.0, x))
    }

    /// x^{-ν} J_ν(x), extended continuously to x = 0 by 2^{-ν}/Γ(ν+1).
    pub fn j_scaled(self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return domain(format!("Bessel J requires finite x >= 0, got {x}"));
        }
        Ok(j_scaled_unchecked(self.0, x))
    }

    /// Smallest strictly positive zero j_{ν,1}.
    pub fn first_zero(self) -> f64 {
        first_zero_unchecked(self.0)
    }
}

impl TryFrom<f64> for BesselOrder {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        Self::new(nu)
    }
}

/// J_ν(x) for ν ≥ 0, x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    BesselOrder::new(nu)?.j(x)
}

/// First positive zero j_{ν,1} of J_ν.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    Ok(BesselOrder::new(nu)?.first_zero())
}

pub(crate) fn j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        let prefactor = if nu < 30.0 {
            (0.5 * x).powf(nu) / gamma_unchecked(nu + 1.0)
        } else {
            (nu * (0.5 * x).ln() - ln_gamma_unchecked(nu + 1.0)).exp()
        };
        prefactor * series_tail(nu, x)
    } else {
        miller(nu, x)
    }
}

pub(crate) fn j_scaled_unchecked(nu: f64, x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        let prefactor = (-nu * std::f64::consts::LN_2 - ln_gamma_unchecked(nu + 1.0)).exp();
        prefactor * series_tail(nu, x)
    } else {
        miller(nu, x) / x.powf(nu)
    }
}

/// Σ_k (-x²/4)^k / (k! (ν+1)_k).
fn series_tail(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut comp = 0.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        // Kahan summation; the alternating series peaks near k ≈ x/2.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && kf > 0.5 * x {
            break;
        }
    }
    sum
}

fn miller(nu: f64, x: f64) -> f64 {
    let n0 = nu.floor() as usize;
    let mu = nu - n0 as f64;
    let top = x.max(n0 as f64);
    let mut big_n = (1.1 * top + 40.0).ceil() as usize;
    if big_n % 2 == 1 {
        big_n += 1;
    }
    let mut vals = vec![0.0_f64; big_n + 2];
    vals[big_n] = 1e-30;
    for k in (1..=big_n).rev() {
        let next = 2.0 * (mu + k as f64) / x * vals[k] - vals[k + 1];
        vals[k - 1] = next;
        if next.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    // Normalisation sum Σ c_m J_{μ+2m}.
    let mut g = gamma_unchecked(mu + 1.0);
    let mut norm = g * vals[0];
    let mut m = 1usize;
    while 2 * m <= big_n {
        let mf = m as f64;
        if m > 1 {
            g *= (mu + mf - 1.0) / mf;
        }
        norm += (mu + 2.0 * mf) * g * vals[2 * m];
        m += 1;
    }
    vals[n0] * (0.5 * x).powf(mu) / norm
}

fn first_zero_unchecked(nu: f64) -> f64 {
    // J_ν is positive on (0, j_{ν,1}) and j_{ν,1} > ν, so the scan cannot skip a zero.
    let mut lo = nu.max(0.1);
    let mut f_lo = j_unchecked(nu, lo);
    let mut hi = lo + ZERO_GRID_STEP;
    let mut f_hi = j_unchecked(nu, hi);
    while f_lo * f_hi > 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi += ZERO_GRID_STEP;
        f_hi = j_unchecked(nu, hi);
    }
    if f_hi == 0.0 {
        return hi;
    }
    bracketed_root(|t| j_unchecked(nu, t), lo, hi, f_lo, 1e-15)
}

/// Bisection with secant acceleration on a sign-changing bracket.
pub(crate) fn bracketed_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, mut f_lo: f64, xtol: f64) -> f64 {
    for iter in 0..200 {
        if hi - lo <= xtol * hi.abs().max(1.0) {
            break;
        }
        let f_hi = f(hi);
        // Alternate secant and bisection steps so the bracket always shrinks.
        let mut mid =
            if iter % 2 == 0 && f_hi != f_lo { hi - f_hi * (hi - lo) / (f_hi - f_lo) } else { 0.5 * (lo + hi) };
        if !(mid > lo && mid < hi) {
            mid = 0.5 * (lo + hi);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Reference values from a 30-digit evaluation of the ascending series.
    #[allow(clippy::excessive_precision)]
    const REFERENCE: &[(f64, f64, f64)] = &[
        (1.0, 3.0, 0.339_058_958_525_936_46),
        (0.0, 12.5, 0.146_884_054_700_421_1),
        (0.5, 30.0, -0.143_929_653_370_399_9),
        (2.5, 100.0, 0.038_325_919_332_375_406),
        (31.0, 40.0, -0.157_092_897_541_295_85),
        (1.5, 7.3, -0.120_953_010_973_630_61),
        (0.25, 150.0, -0.025_631_556_184_634_81),
        (10.0, 199.5, 0.028_403_581_563_660_71),
        (3.7, 0.01, 1.985_093_881_021_556_4e-10),
        (0.0, 200.0, -0.015_437_439_930_565_092),
        (1.0, 50.0, -0.097_511_828_125_175_14),
    ];

    #[test]
    fn matches_reference_values() {
        for &(nu, x, want) in REFERENCE {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - want).abs() < 1e-12, "J_{nu}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(2.0, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn half_integer_closed_forms() {
        for i in 0..=500 {
            let x = 0.1 + i as f64 * (49.9 / 500.0);
            let c = (2.0 / (PI * x)).sqrt();
            let j_half = c * x.sin();
            let j_three_halves = c * (x.sin() / x - x.cos());
            let j_m = bessel_j(0.5, x).unwrap();
            let j_p = bessel_j(1.5, x).unwrap();
            assert!((j_m - j_half).abs() < 1e-12, "x = {x}");
            assert!((j_p - j_three_halves).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn branch_boundary_is_continuous() {
        for nu in [0.0, 0.5, 1.0, 2.5, 7.3] {
            let a = j_unchecked(nu, SERIES_LIMIT);
            let b = miller(nu, SERIES_LIMIT);
            assert!((a - b).abs() < 2e-14, "nu = {nu}: {a} vs {b}");
        }
    }

    #[test]
    fn scaled_form_matches() {
        for nu in [0.0, 0.5, 1.0, 2.0] {
            for x in [1e-6, 0.3, 5.0, 5.9, 6.1, 11.9, 40.0] {
                let want = j_unchecked(nu, x) / x.powf(nu);
                let got = j_scaled_unchecked(nu, x);
                assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
            }
        }
        let at_zero = BesselOrder::new(1.0).unwrap().j_scaled(0.0).unwrap();
        assert!((at_zero - 0.5).abs() < 1e-15);
    }

    #[test]
    fn first_zeros() {
        let j01 = bessel_first_zero(0.0).unwrap();
        assert!((j01 - 2.404_825_557_695_773).abs() < 1e-10);
        assert!((bessel_first_zero(0.5).unwrap() - PI).abs() < 1e-10);
        assert!((bessel_first_zero(1.0).unwrap() - 3.831_705_970_207_512).abs() < 1e-10);
        // tan x = x root
        assert!((bessel_first_zero(1.5).unwrap() - 4.493_409_457_909_064).abs() < 1e-10);
    }

    #[test]
    fn rejects_negative_inputs() {
        assert!(bessel_j(0.0, -1.0).is_err());
        assert!(bessel_j(-0.5, 1.0).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
    }
}
