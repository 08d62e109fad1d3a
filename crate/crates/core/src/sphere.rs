//! Zonal expansions on the sphere S^{d-1} ⊂ R^d and zonal kernels.
//!
//! A [`SphereFn`] is a finite sum of zonal harmonics
//! `w · C_k^{(d-2)/2}(⟨x, pole⟩)`. A [`ZonalKernel`] is a function of the
//! inner product; convolution with it multiplies every degree-k component by
//! the Funk–Hecke eigenvalue λ_k(g).

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::specfun::{
    bessel_first_zero, bracketed_root, gauss_legendre_pow2, gegenbauer_at_one, gegenbauer_max_root,
    gegenbauer_unchecked, quad_adaptive_with, sphere_area, QuadOptions,
};

const UNIT_TOL: f64 = 1e-12;
const EVAL_UNIT_TOL: f64 = 1e-10;
const DROP_TOL: f64 = 1e-13;
/// Default half-width of the annihilator bump before any shrinking.
const BUMP_HALF_WIDTH: f64 = 0.05;

/// One zonal harmonic `weight · C_degree^{(d-2)/2}(⟨x, pole⟩)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalTerm {
    #[serde(rename = "k")]
    pub degree: usize,
    pub pole: Vec<f64>,
    #[serde(rename = "w")]
    pub weight: f64,
}

/// A finite sum of zonal harmonics on S^{d-1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SphereFnJson", into = "SphereFnJson")]
pub struct SphereFn {
    dim: usize,
    terms: Vec<ZonalTerm>,
}

#[derive(Serialize, Deserialize)]
struct SphereFnJson {
    dim: usize,
    terms: Vec<ZonalTerm>,
}

impl TryFrom<SphereFnJson> for SphereFn {
    type Error = Error;

    fn try_from(json: SphereFnJson) -> Result<Self> {
        SphereFn::new(json.dim, json.terms)
    }
}

impl From<SphereFn> for SphereFnJson {
    fn from(f: SphereFn) -> Self {
        SphereFnJson { dim: f.dim, terms: f.terms }
    }
}

impl SphereFn {
    pub fn new(dim: usize, terms: Vec<ZonalTerm>) -> Result<Self> {
        if dim < 3 {
            return invalid(format!("sphere functions need d >= 3, got {dim}"));
        }
        if terms.is_empty() {
            return invalid("sphere function needs at least one term");
        }
        for (i, term) in terms.iter().enumerate() {
            if term.degree < 1 {
                return invalid(format!("terms[{i}].k must be >= 1"));
            }
            if term.pole.len() != dim {
                return invalid(format!("terms[{i}].pole has length {} but dim is {dim}", term.pole.len()));
            }
            if (norm(&term.pole) - 1.0).abs() > UNIT_TOL {
                return invalid(format!("terms[{i}].pole is not a unit vector"));
            }
            if !term.weight.is_finite() {
                return invalid(format!("terms[{i}].w is not finite"));
            }
        }
        Ok(Self { dim, terms })
    }

    /// Single zonal harmonic of degree k around `pole`.
    pub fn zonal(dim: usize, degree: usize, pole: Vec<f64>, weight: f64) -> Result<Self> {
        Self::new(dim, vec![ZonalTerm { degree, pole, weight }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ZonalTerm] {
        &self.terms
    }

    /// True for the zero function left behind when every term was annihilated.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct degrees S.
    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.iter().map(|t| t.degree).collect()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim || (norm(x) - 1.0).abs() > EVAL_UNIT_TOL {
            return domain("sphere evaluation point must be a unit vector of matching dimension");
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let lam = gegenbauer_lambda(self.dim);
        self.terms
            .iter()
            .map(|t| {
                let c = dot(x, &t.pole).clamp(-1.0, 1.0);
                t.weight * gegenbauer_unchecked(t.degree, lam, c)
            })
            .sum()
    }

    /// π² d Σ_{k∈S} 1/k.
    pub fn bound_theorem2(&self) -> f64 {
        PI * PI * self.dim as f64 * self.degrees().iter().map(|&k| 1.0 / k as f64).sum::<f64>()
    }

    /// Term-wise Funk–Hecke convolution with `g`.
    pub fn convolve(&self, g: &ZonalKernel) -> Result<SphereFn> {
        let max_weight = self.terms.iter().map(|t| t.weight.abs()).fold(0.0, f64::max);
        let mut eigen = std::collections::BTreeMap::new();
        for k in self.degrees() {
            eigen.insert(k, funk_hecke_eigenvalue(g, k, self.dim)?);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let w = t.weight * eigen[&t.degree];
                (w.abs() > DROP_TOL * max_weight).then(|| ZonalTerm { weight: w, ..t.clone() })
            })
            .collect();
        Ok(SphereFn { dim: self.dim, terms })
    }
}

/// A kernel on [-1, 1], applied to inner products ⟨x, y⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalKernel {
    profile: Profile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Profile {
    /// `scale · b((t - center)/half_width)` with the C² piecewise quintic
    /// `b(u) = 1 - S(|u|)`, `S(u) = 6u⁵ - 15u⁴ + 10u³`.
    Bump {
        center: f64,
        half_width: f64,
        scale: f64,
    },
    Constant(f64),
}

impl ZonalKernel {
    /// Quintic bump supported on [center - half_width, center + half_width] ⊆ [-1, 1].
    pub fn bump(center: f64, half_width: f64, scale: f64) -> Result<Self> {
        if !(half_width > 0.0) || !(scale > 0.0) || !center.is_finite() || !scale.is_finite() {
            return invalid("bump needs a positive half-width and a positive finite scale");
        }
        if center - half_width < -1.0 || center + half_width > 1.0 {
            return invalid("bump support must lie inside [-1, 1]");
        }
        Ok(Self { profile: Profile::Bump { center, half_width, scale } })
    }

    /// The constant kernel on all of [-1, 1]. It violates the vanishing
    /// boundary condition of a bump and exists only for orthogonality checks.
    #[doc(hidden)]
    pub fn unchecked_constant(value: f64) -> Self {
        Self { profile: Profile::Constant(value) }
    }

    /// Support interval J.
    pub fn support(&self) -> (f64, f64) {
        match self.profile {
            Profile::Bump { center, half_width, .. } => (center - half_width, center + half_width),
            Profile::Constant(_) => (-1.0, 1.0),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.profile {
            Profile::Bump { center, half_width, scale } => scale * quintic_bump((t - center) / half_width),
            Profile::Constant(v) => {
                if t.abs() <= 1.0 {
                    v
                } else {
                    0.0
                }
            }
        }
    }

    /// Same kernel multiplied by c > 0.
    pub fn scaled(&self, c: f64) -> Self {
        let profile = match self.profile {
            Profile::Bump { center, half_width, scale } => Profile::Bump { center, half_width, scale: scale * c },
            Profile::Constant(v) => Profile::Constant(v * c),
        };
        Self { profile }
    }

    /// ∫ g(t) h(t) (1 - t²)^{(d-3)/2} dt over the support, together with the
    /// same integral of |g h| weight.
    fn weighted_integral<H: Fn(f64) -> f64>(&self, h: H, d: usize, degree_hint: usize) -> Result<(f64, f64)> {
        let half_exp = (d as f64 - 3.0) / 2.0;
        let weight = |t: f64| {
            if d == 3 {
                1.0
            } else {
                (1.0 - t * t).max(0.0).powf(half_exp)
            }
        };
        let integrand = |t: f64| self.value(t) * h(t) * weight(t);
        match self.profile {
            Profile::Bump { center, half_width, .. } => {
                // Each half of the bump is a polynomial; for even d the weight
                // is analytic on the support, so doubled Gauss rules converge fast.
                let mut value = 0.0;
                let mut abs = 0.0;
                for (a, b) in [(center - half_width, center), (center, center + half_width)] {
                    let (v, s) = gauss_doubling(&integrand, a, b, degree_hint + d + 6)?;
                    value += v;
                    abs += s;
                }
                Ok((value, abs))
            }
            Profile::Constant(_) => {
                if d % 2 == 1 {
                    gauss_doubling(&integrand, -1.0, 1.0, degree_hint + d)
                } else {
                    let opts =
                        QuadOptions::with_tol(1e-13).rel(1e-13).left_singularity(half_exp).right_singularity(half_exp);
                    let value = quad_adaptive_with(integrand, -1.0, 1.0, opts)?;
                    let abs = quad_adaptive_with(|t| integrand(t).abs(), -1.0, 1.0, opts)?;
                    Ok((value, abs))
                }
            }
        }
    }
}

/// 1 - (6u⁵ - 15u⁴ + 10u³) on |u| ≤ 1, zero outside.
fn quintic_bump(u: f64) -> f64 {
    let a = u.abs();
    if a >= 1.0 {
        return 0.0;
    }
    1.0 - a * a * a * (10.0 + a * (-15.0 + 6.0 * a))
}

/// Gauss–Legendre with doubling from the smallest power-of-two rule exact for
/// `degree`, until successive values agree to rounding.
fn gauss_doubling<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, degree: usize) -> Result<(f64, f64)> {
    let mut k = 3u32;
    while (1usize << k) * 2 <= degree + 1 && k < 10 {
        k += 1;
    }
    let apply = |k: u32| {
        let rule = gauss_legendre_pow2(k);
        let mut v = 0.0;
        let mut s = 0.0;
        for (t, w) in rule.mapped(a, b) {
            let y = f(t);
            v += w * y;
            s += w * y.abs();
        }
        (v, s)
    };
    let mut prev = apply(k);
    while k < 10 {
        k += 1;
        let next = apply(k);
        if (next.0 - prev.0).abs() <= 1e-14 * next.1.max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy { context: format!("Gauss-Legendre on [{a}, {b}]"), estimate: prev.0, error: f64::NAN })
}

fn gegenbauer_lambda(d: usize) -> f64 {
    (d as f64 - 2.0) / 2.0
}

/// λ_k(g) = |S^{d-2}| / C_k(1) · ∫ g(t) C_k(t) (1-t²)^{(d-3)/2} dt with C_k = C_k^{(d-2)/2}.
///
/// The prefactor |S^{d-2}| makes λ_0(1) the full area of S^{d-1}.
pub fn funk_hecke_eigenvalue(g: &ZonalKernel, k: usize, d: usize) -> Result<f64> {
    if d < 3 {
        return domain(format!("Funk-Hecke eigenvalues need d >= 3, got {d}"));
    }
    let lam = gegenbauer_lambda(d);
    let (moment, _) = g.weighted_integral(|t| gegenbauer_unchecked(k, lam, t), d, k)?;
    Ok(sphere_area(d - 1)? / gegenbauer_at_one(k, lam) * moment)
}

/// A nonnegative bump g with λ_m(g) = 0, supported in (1 - (d+4)²/(4m²), 1).
///
/// The bump slides across the largest zero x₁ of C_m^{(d-2)/2}: centred just
/// left of x₁ the moment is negative, just right of it positive, and the
/// zero crossing is located by bisection. The result is scaled so λ_0(g) = 1.
pub fn annihilator_bump(m: usize, d: usize) -> Result<ZonalKernel> {
    if d < 3 {
        return domain(format!("annihilator needs d >= 3, got {d}"));
    }
    if 2 * m <= d + 4 {
        return domain(format!("annihilator needs m > (d+4)/2, got m = {m}, d = {d}"));
    }
    let lam = gegenbauer_lambda(d);
    let x1 = gegenbauer_max_root(m, lam)?;
    let lower = support_floor(m, d);
    if x1 <= lower {
        return Err(Error::Construction(format!("largest root {x1} of C_{m} lies below the support floor {lower}")));
    }
    let moment = |c: f64, h: f64| -> Result<(f64, f64)> {
        let g = ZonalKernel::bump(c, h, 1.0)?;
        g.weighted_integral(|t| gegenbauer_unchecked(m, lam, t), d, m)
    };
    let mut h = 0.95 * BUMP_HALF_WIDTH.min((x1 - lower) / 2.0).min((1.0 - x1) / 2.0);
    for _ in 0..60 {
        let (lo, hi) = (x1 - h, x1 + h);
        let (m_lo, _) = moment(lo, h)?;
        let (m_hi, _) = moment(hi, h)?;
        if m_lo < 0.0 && m_hi > 0.0 {
            let f = |c: f64| moment(c, h).map(|v| v.0).unwrap_or(f64::NAN);
            let c = bracketed_root(f, lo, hi, m_lo, 1e-16);
            let (value, abs) = moment(c, h)?;
            if value.abs() > 1e-11 * abs {
                return Err(Error::Construction(format!("bump moment {value:e} did not vanish (scale {abs:e})")));
            }
            let unit = ZonalKernel::bump(c, h, 1.0)?;
            let mass = funk_hecke_eigenvalue(&unit, 0, d)?;
            return Ok(unit.scaled(1.0 / mass));
        }
        // The second-largest root intrudes on the support; narrow the bump.
        h *= 0.5;
    }
    Err(Error::Construction(format!("no sign-changing bracket for the bump moment of C_{m} in d = {d}")))
}

/// 1 - (d+4)²/(4m²), the lower end of the admissible support.
pub fn support_floor(m: usize, d: usize) -> f64 {
    let ratio = (d as f64 + 4.0) / (2.0 * m as f64);
    1.0 - ratio * ratio
}

/// Upper bound on the first Dirichlet eigenvalue of a geodesic cap of radius
/// r on S^d (the sphere of intrinsic dimension d).
pub fn cap_lambda1_upper(d: usize, r: f64) -> Result<f64> {
    if d < 2 {
        return domain(format!("cap bound needs sphere dimension >= 2, got {d}"));
    }
    if !(r > 0.0 && r < PI) {
        return domain(format!("cap radius must lie in (0, pi), got {r}"));
    }
    let r2 = r * r;
    Ok(match d {
        2 => bessel_first_zero(0.0)?.powi(2) / r2 + 1.0 / 3.0,
        3 => PI * PI / r2 + 1.0,
        _ => {
            let df = d as f64;
            let j = bessel_first_zero((df - 2.0) / 2.0)?;
            let s = r.sin();
            j * j / r2 - (df - 1.0).powi(2) / 4.0 + (df - 1.0) * (df - 3.0) / 4.0 * (1.0 / (s * s) - 1.0 / r2)
        }
    })
}

/// arccos of the clamped inner product.
pub fn geodesic_distance(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
