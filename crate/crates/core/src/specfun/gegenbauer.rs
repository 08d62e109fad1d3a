use crate::error::{domain, Error, Result};

/// C_m^{(λ)}(t) by the three-term recurrence
/// `m C_m = 2(m+λ-1) t C_{m-1} - (m+2λ-2) C_{m-2}`.
pub fn gegenbauer(m: usize, lam: f64, t: f64) -> Result<f64> {
    if !(lam > -0.5) || !lam.is_finite() {
        return domain(format!("Gegenbauer parameter must exceed -1/2, got {lam}"));
    }
    if !(t.abs() <= 1.0) {
        return domain(format!("Gegenbauer argument must lie in [-1, 1], got {t}"));
    }
    Ok(gegenbauer_unchecked(m, lam, t))
}

pub(crate) fn gegenbauer_unchecked(m: usize, lam: f64, t: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lam * t;
    for k in 2..=m {
        let kf = k as f64;
        let next = (2.0 * (kf + lam - 1.0) * t * cur - (kf + 2.0 * lam - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// d/dt C_m^{(λ)}(t) = 2λ C_{m-1}^{(λ+1)}(t).
pub(crate) fn gegenbauer_derivative(m: usize, lam: f64, t: f64) -> f64 {
    if m == 0 {
        0.0
    } else {
        2.0 * lam * gegenbauer_unchecked(m - 1, lam + 1.0, t)
    }
}

/// C_m^{(λ)}(1) = (2λ)_m / m!.
pub(crate) fn gegenbauer_at_one(m: usize, lam: f64) -> f64 {
    (0..m).fold(1.0, |acc, k| acc * (2.0 * lam + k as f64) / (k as f64 + 1.0))
}

/// Largest zero of C_m^{(λ)}, m ≥ 1, λ > 0.
///
/// All zeros are real and simple, so Newton's method started at t = 1 (right
/// of every zero, where the polynomial is positive and convex) decreases
/// monotonically onto the largest one. The result is polished by bisection.
pub fn gegenbauer_max_root(m: usize, lam: f64) -> Result<f64> {
    if m < 1 {
        return domain("gegenbauer_max_root requires m >= 1");
    }
    if !(lam > 0.0) || !lam.is_finite() {
        return domain(format!("gegenbauer_max_root requires lambda > 0, got {lam}"));
    }
    if m == 1 {
        return Ok(0.0);
    }
    let mut t = 1.0;
    let mut converged = false;
    for _ in 0..10_000 {
        let f = gegenbauer_unchecked(m, lam, t);
        let df = gegenbauer_derivative(m, lam, t);
        let step = f / df;
        t -= step;
        if step.abs() < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Accuracy {
            context: format!("Newton iteration for the largest root of C_{m}^{lam}"),
            estimate: t,
            error: f64::NAN,
        });
    }
    // Newton lands on the root from the right; bracket and polish.
    let f = |x: f64| gegenbauer_unchecked(m, lam, x);
    let mut width = 1e-13_f64.max(1e-12 * t.abs());
    loop {
        let (lo, hi) = (t - width, (t + width).min(1.0));
        let (f_lo, f_hi) = (f(lo), f(hi));
        if f_lo * f_hi <= 0.0 {
            return Ok(super::bessel::bracketed_root(f, lo, hi, f_lo, 1e-16));
        }
        width *= 4.0;
        if width > 1e-3 {
            return Ok(t);
        }
    }
}
