//! Real trigonometric polynomials on the torus T^d = R^d / Z^d.
//!
//! A [`TrigPoly`] stores complex amplitudes `a_k` for frequencies `k ∈ Z^d \ {0}`
//! with `a_{-k} = conj(a_k)`, so that `Σ a_k e^{2πi⟨x,k⟩}` is real. Frequency
//! shells group the keys by their Euclidean norm, compared exactly through the
//! integer `‖k‖²`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::specfun::{ball_volume, bessel_first_zero, j_unchecked};

const HERMITIAN_TOL: f64 = 1e-12;

/// An integer frequency vector k ∈ Z^d.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreqVector(pub Vec<i64>);

impl FreqVector {
    pub fn new(components: impl Into<Vec<i64>>) -> Self {
        Self(components.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn norm_sq(&self) -> u64 {
        self.0.iter().map(|&c| (c * c) as u64).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    /// True when the first nonzero component is positive.
    pub fn is_representative(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }
}

impl fmt::Display for FreqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<const N: usize> From<[i64; N]> for FreqVector {
    fn from(v: [i64; N]) -> Self {
        Self(v.to_vec())
    }
}

/// Distinct frequency norms λ_1 < … < λ_n, stored as exact integer squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellSet {
    norms_sq: Vec<u64>,
}

impl ShellSet {
    pub fn norms_sq(&self) -> &[u64] {
        &self.norms_sq
    }

    pub fn norms(&self) -> Vec<f64> {
        self.norms_sq.iter().map(|&n| (n as f64).sqrt()).collect()
    }

    pub fn len(&self) -> usize {
        self.norms_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms_sq.is_empty()
    }

    /// Largest norm λ_n.
    pub fn top(&self) -> Option<f64> {
        self.norms_sq.last().map(|&n| (n as f64).sqrt())
    }
}

/// Real-valued, mean-zero trigonometric polynomial on T^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolyJson", into = "TrigPolyJson")]
pub struct TrigPoly {
    dim: usize,
    coeffs: BTreeMap<FreqVector, Complex64>,
}

impl TrigPoly {
    /// Builds a polynomial from a full coefficient table, which must already
    /// be Hermitian-symmetric.
    pub fn new(dim: usize, coeffs: impl IntoIterator<Item = (FreqVector, Complex64)>) -> Result<Self> {
        if dim == 0 {
            return invalid("torus dimension must be at least 1");
        }
        let mut table = BTreeMap::new();
        for (k, a) in coeffs {
            check_key(dim, &k)?;
            if table.insert(k.clone(), a).is_some() {
                return invalid(format!("duplicate frequency {k}"));
            }
        }
        if table.is_empty() {
            return invalid("trigonometric polynomial needs at least one frequency");
        }
        let scale: f64 = table.values().map(|a| a.norm()).sum();
        for (k, a) in &table {
            let mirror = table.get(&k.neg()).copied().unwrap_or_default();
            if (mirror - a.conj()).norm() > HERMITIAN_TOL * scale.max(1.0) {
                return invalid(format!("coefficients at {k} and its negative are not conjugate"));
            }
        }
        Ok(Self { dim, coeffs: table })
    }

    /// Builds a polynomial from one representative per ±k pair; the
    /// conjugate partner is synthesised.
    pub fn from_representatives(dim: usize, terms: impl IntoIterator<Item = (FreqVector, Complex64)>) -> Result<Self> {
        if dim == 0 {
            return invalid("torus dimension must be at least 1");
        }
        let mut table = BTreeMap::new();
        for (k, a) in terms {
            check_key(dim, &k)?;
            let neg = k.neg();
            if table.contains_key(&k) || table.contains_key(&neg) {
                return invalid(format!("frequency {k} given more than once (up to sign)"));
            }
            table.insert(neg, a.conj());
            table.insert(k, a);
        }
        if table.is_empty() {
            return invalid("trigonometric polynomial needs at least one frequency");
        }
        Ok(Self { dim, coeffs: table })
    }

    /// Σ amp · cos(2π⟨k, x⟩ + phase) over the given terms.
    pub fn from_cosines(dim: usize, terms: &[(Vec<i64>, f64, f64)]) -> Result<Self> {
        Self::from_representatives(
            dim,
            terms.iter().map(|(k, amp, phase)| {
                let mut k = FreqVector(k.clone());
                let mut phase = *phase;
                if !k.is_representative() {
                    k = k.neg();
                    phase = -phase;
                }
                (k, Complex64::from_polar(0.5 * amp, phase))
            }),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, k: &FreqVector) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&FreqVector, &Complex64)> {
        self.coeffs.iter()
    }

    /// Σ |a_k|.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm()).sum()
    }

    /// The full complex sum Σ a_k e^{2πi⟨x,k⟩}; its imaginary part vanishes up to rounding.
    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.dim);
        self.coeffs
            .iter()
            .map(|(k, a)| {
                let phase = 2.0 * PI * dot_int(&k.0, x);
                a * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    /// f(x), the real part of the coefficient sum.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_complex(x).re
    }

    /// Values on the uniform grid {i/res}^d, axis 0 varying slowest.
    pub fn eval_grid(&self, res: usize) -> Vec<f64> {
        let d = self.dim;
        let total = res.pow(d as u32);
        let roots: Vec<Complex64> =
            (0..res).map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / res as f64)).collect();
        let reps: Vec<(Vec<usize>, Complex64)> = self
            .coeffs
            .iter()
            .filter(|(k, _)| k.is_representative())
            .map(|(k, a)| {
                let residues = k.0.iter().map(|&c| c.rem_euclid(res as i64) as usize).collect();
                (residues, *a)
            })
            .collect();
        (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut idx = [0usize; 8];
                let mut rest = flat;
                for axis in (0..d).rev() {
                    idx[axis] = rest % res;
                    rest /= res;
                }
                let mut acc = 0.0;
                for (residues, a) in &reps {
                    let mut exponent = 0usize;
                    for axis in 0..d {
                        exponent = (exponent + residues[axis] * idx[axis]) % res;
                    }
                    acc += (a * roots[exponent]).re;
                }
                2.0 * acc
            })
            .collect()
    }

    /// Distinct frequency norms Λ.
    pub fn shells(&self) -> ShellSet {
        let set: BTreeSet<u64> = self.coeffs.keys().map(FreqVector::norm_sq).collect();
        ShellSet { norms_sq: set.into_iter().collect() }
    }

    /// d^{3/2} Σ_{λ∈Λ} 1/λ.
    pub fn bound_theorem1(&self) -> f64 {
        let d = self.dim as f64;
        d.powf(1.5) * self.shells().norms().iter().map(|l| 1.0 / l).sum::<f64>()
    }

    /// (1/4) Σ_{k∈S} 1/‖k‖, counting k and -k separately.
    pub fn bound_kozma(&self) -> f64 {
        0.25 * self.coeffs.keys().map(|k| 1.0 / k.norm()).sum::<f64>()
    }

    /// j_{d/2,1} / (2π λ_n): the ball radius whose indicator transform
    /// vanishes on the top shell.
    pub fn delta_star(&self) -> f64 {
        let top = self.shells().top().expect("a TrigPoly always has a shell");
        top_shell_zero(self.dim) / (2.0 * PI * top)
    }

    /// Convolution with the periodised indicator of B(0, δ*), which removes
    /// the top frequency shell and scales every other coefficient by the
    /// (positive) indicator transform.
    pub fn smooth_top_shell(&self) -> Result<TrigPoly> {
        let shells = self.shells();
        if shells.len() < 2 {
            return domain("smoothing needs at least two frequency shells; a single shell is an eigenfunction");
        }
        let delta = self.delta_star();
        if delta >= 0.5 {
            return Err(Error::Range(format!(
                "delta* = {delta} is not below 1/2; the top shell norm is too small for dimension {}",
                self.dim
            )));
        }
        let top_sq = *shells.norms_sq().last().unwrap();
        let mut coeffs = BTreeMap::new();
        for (k, a) in &self.coeffs {
            // The multiplier vanishes analytically on the top shell.
            if k.norm_sq() == top_sq {
                continue;
            }
            coeffs.insert(k.clone(), a * ball_multiplier(delta, k, self.dim)?);
        }
        Ok(TrigPoly { dim: self.dim, coeffs })
    }
}

fn check_key(dim: usize, k: &FreqVector) -> Result<()> {
    if k.dim() != dim {
        return invalid(format!("frequency {k} has dimension {} but the torus has {dim}", k.dim()));
    }
    if dim > 8 {
        return invalid("torus dimension above 8 is not supported");
    }
    if k.is_zero() {
        return invalid("the zero frequency is excluded (mean value must be 0)");
    }
    Ok(())
}

fn dot_int(k: &[i64], x: &[f64]) -> f64 {
    k.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()
}

fn top_shell_zero(d: usize) -> f64 {
    bessel_first_zero(d as f64 / 2.0).expect("d/2 is a valid Bessel order")
}

/// Fourier transform of the indicator of B(0, δ) ⊂ R^d at an integer frequency:
/// `δ^{d/2} ‖k‖^{-d/2} J_{d/2}(2π‖k‖δ)`, and `ω_d δ^d` at k = 0.
pub fn ball_multiplier(delta: f64, k: &FreqVector, d: usize) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return domain(format!("ball radius must be positive, got {delta}"));
    }
    if k.dim() != d {
        return invalid(format!("frequency {k} does not live in dimension {d}"));
    }
    if k.is_zero() {
        return Ok(ball_volume(d)? * delta.powi(d as i32));
    }
    let rho = k.norm();
    let half = d as f64 / 2.0;
    Ok((delta / rho).powf(half) * j_unchecked(half, 2.0 * PI * rho * delta))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TrigTermJson {
    k: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TrigPolyJson {
    dim: usize,
    terms: Vec<TrigTermJson>,
}

impl TryFrom<TrigPolyJson> for TrigPoly {
    type Error = Error;

    fn try_from(json: TrigPolyJson) -> Result<Self> {
        TrigPoly::from_representatives(
            json.dim,
            json.terms.into_iter().map(|t| (FreqVector(t.k), Complex64::new(t.re, t.im))),
        )
    }
}

impl From<TrigPoly> for TrigPolyJson {
    fn from(p: TrigPoly) -> Self {
        TrigPolyJson {
            dim: p.dim,
            terms: p
                .coeffs
                .iter()
                .filter(|(k, _)| k.is_representative())
                .map(|(k, a)| TrigTermJson { k: k.0.clone(), re: a.re, im: a.im })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos3() -> TrigPoly {
        TrigPoly::new(
            2,
            [
                (FreqVector::from([3, 0]), Complex64::new(0.5, 0.0)),
                (FreqVector::from([-3, 0]), Complex64::new(0.5, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = cos3();
        assert!((f.eval(&[0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!(f.eval(&[1.0 / 12.0, 0.77]).abs() < 1e-15);
        let g = TrigPoly::from_cosines(2, &[(vec![1, 1], 1.0, 0.0), (vec![3, 0], 1.0, 0.0)]).unwrap();
        let want = (0.6 * PI).cos() + (1.2 * PI).cos();
        assert!((g.eval(&[0.2, 0.1]) - want).abs() < 1e-14);
    }

    #[test]
    fn grid_matches_pointwise() {
        let g = TrigPoly::from_cosines(2, &[(vec![1, -2], 0.7, 0.3), (vec![3, 1], -1.1, 2.0)]).unwrap();
        let res = 16;
        let grid = g.eval_grid(res);
        for i in 0..res {
            for j in 0..res {
                let x = [i as f64 / res as f64, j as f64 / res as f64];
                assert!((grid[i * res + j] - g.eval(&x)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn construction_rejects_bad_tables() {
        let half = Complex64::new(0.5, 0.0);
        assert!(TrigPoly::new(1, [(FreqVector::from([2]), half)]).is_err());
        assert!(TrigPoly::new(1, [(FreqVector::from([0]), half)]).is_err());
        assert!(TrigPoly::new(1, std::iter::empty()).is_err());
        assert!(TrigPoly::new(2, [(FreqVector::from([1]), half), (FreqVector::from([-1]), half)]).is_err());
        let bad_phase =
            [(FreqVector::from([1]), Complex64::new(0.5, 0.2)), (FreqVector::from([-1]), Complex64::new(0.5, 0.2))];
        assert!(TrigPoly::new(1, bad_phase).is_err());
        let dup = [(FreqVector::from([1]), half), (FreqVector::from([-1]), half)];
        assert!(TrigPoly::from_representatives(1, dup).is_err());
    }

    #[test]
    fn shell_examples() {
        let f = TrigPoly::from_cosines(2, &[(vec![3, 4], 1.0, 0.0), (vec![5, 0], 1.0, 0.0)]).unwrap();
        assert_eq!(f.shells().norms_sq(), &[25]);
        let f = TrigPoly::from_cosines(2, &[(vec![1, 0], 1.0, 0.0)]).unwrap();
        assert_eq!(f.shells().norms(), vec![1.0]);
        let f = TrigPoly::from_cosines(2, &[(vec![1, 1], 1.0, 0.0), (vec![2, 0], 1.0, 0.0)]).unwrap();
        assert_eq!(f.shells().norms_sq(), &[2, 4]);
        assert_eq!(f.shells().top(), Some(2.0));
    }

    #[test]
    fn bound_examples() {
        let f = TrigPoly::from_cosines(2, &[(vec![3, 4], 1.0, 0.0), (vec![5, 0], 1.0, 0.0)]).unwrap();
        assert!((f.bound_theorem1() - 2f64.powf(1.5) / 5.0).abs() < 1e-15);
        assert!((f.bound_kozma() - 0.2).abs() < 1e-15);
        let f = TrigPoly::from_cosines(1, &[(vec![1], 1.0, 0.0)]).unwrap();
        assert!((f.bound_theorem1() - 1.0).abs() < 1e-15);
        assert!((f.bound_kozma() - 0.5).abs() < 1e-15);
        let f = TrigPoly::from_cosines(1, &[(vec![3], 1.0, 0.0)]).unwrap();
        assert!((f.bound_kozma() - 1.0 / 6.0).abs() < 1e-15);
        let f = TrigPoly::from_cosines(3, &[(vec![1, 1, 0], 1.0, 0.0), (vec![0, 2, 0], 1.0, 0.0)]).unwrap();
        let want = 3f64.powf(1.5) * (0.5f64.sqrt() + 0.5);
        assert!((f.bound_theorem1() - want).abs() < 1e-14);
    }

    #[test]
    fn ball_multiplier_one_dimension() {
        let v = ball_multiplier(0.2, &FreqVector::from([1]), 1).unwrap();
        assert!((v - (0.4 * PI).sin() / PI).abs() < 1e-14);
        assert!((v - 0.30273).abs() < 1e-5);
        let mass = ball_multiplier(0.3, &FreqVector::from([0, 0]), 2).unwrap();
        assert!((mass - PI * 0.09).abs() < 1e-15);
        assert!(ball_multiplier(0.0, &FreqVector::from([1]), 1).is_err());
    }

    /// Indicator transform by polar quadrature, without Bessel functions:
    /// the ball integral of cos(2π‖k‖ x₁).
    fn indicator_transform(delta: f64, rho: f64, d: usize) -> f64 {
        let rule = crate::specfun::QuadRule::gauss_legendre(64);
        let w = 2.0 * PI * rho;
        rule.integrate(
            |r| match d {
                1 => 2.0 * (w * r).cos(),
                2 => r * rule.integrate(|th| (w * r * th.cos()).cos(), 0.0, 2.0 * PI),
                _ => 2.0 * PI * r * r * rule.integrate(|t| (w * r * t).cos(), -1.0, 1.0),
            },
            0.0,
            delta,
        )
    }

    #[test]
    fn ball_multiplier_matches_quadrature() {
        for d in 1..=3 {
            for (k, delta) in [(vec![1i64, 0, 0], 0.2), (vec![2, 1, 0], 0.13), (vec![3, 4, 0], 0.07)] {
                let k = FreqVector(k[..d].to_vec());
                let got = ball_multiplier(delta, &k, d).unwrap();
                let want = indicator_transform(delta, k.norm(), d);
                assert!((got - want).abs() < 1e-12, "d={d} k={k} delta={delta}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn ball_multiplier_vanishes_at_first_zero() {
        for d in 1..=4 {
            let k = FreqVector(vec![1; d]);
            let delta = top_shell_zero(d) / (2.0 * PI * k.norm());
            assert!(ball_multiplier(delta, &k, d).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn delta_star_examples() {
        let f = TrigPoly::from_cosines(1, &[(vec![3], 1.0, 0.0), (vec![1], 1.0, 0.0)]).unwrap();
        assert!((f.delta_star() - 1.0 / 6.0).abs() < 1e-14);
        let f = TrigPoly::from_cosines(2, &[(vec![3, 4], 1.0, 0.0)]).unwrap();
        let j11 = 3.831_705_970_207_512;
        assert!((f.delta_star() - j11 / (10.0 * PI)).abs() < 1e-12);
        let f = TrigPoly::from_cosines(3, &[(vec![0, 0, 1], 1.0, 0.0)]).unwrap();
        assert!((f.delta_star() - 0.715_148_0).abs() < 1e-6);
    }

    #[test]
    fn smoothing_examples() {
        let f = TrigPoly::from_cosines(2, &[(vec![1, 0], 1.0, 0.0), (vec![0, 2], 0.8, 0.4)]).unwrap();
        let g = f.smooth_top_shell().unwrap();
        assert_eq!(g.shells().norms_sq(), &[1]);
        assert!(g.coefficient(&FreqVector::from([0, 2])) == Complex64::default());
        let delta = 3.831_705_970_207_512 / (4.0 * PI);
        let mult = ball_multiplier(delta, &FreqVector::from([1, 0]), 2).unwrap();
        let c = g.coefficient(&FreqVector::from([1, 0]));
        assert!((c - Complex64::new(0.5 * mult, 0.0)).norm() < 1e-15);
        assert!(mult > 0.0);
    }

    #[test]
    fn smoothing_errors() {
        let single = TrigPoly::from_cosines(2, &[(vec![3, 4], 1.0, 0.0), (vec![5, 0], 1.0, 0.0)]).unwrap();
        assert!(matches!(single.smooth_top_shell(), Err(Error::Domain(_))));
        // In d = 3 the shells {1, √2} give δ* = j_{3/2,1}/(2π√2) > 1/2.
        let small = TrigPoly::from_cosines(3, &[(vec![1, 0, 0], 1.0, 0.0), (vec![1, 1, 0], 1.0, 0.0)]).unwrap();
        assert!(matches!(small.smooth_top_shell(), Err(Error::Range(_))));
    }

    #[test]
    fn json_roundtrip_keeps_one_representative() {
        let f = TrigPoly::from_cosines(2, &[(vec![1, -2], 0.7, 0.3), (vec![-3, 1], -1.1, 2.0)]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["terms"].as_array().unwrap().len(), 2);
        let back: TrigPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let parsed: TrigPoly = serde_json::from_str(r#"{"dim":1,"terms":[{"k":[5],"re":0.5,"im":0.0}]}"#).unwrap();
        assert!((parsed.eval(&[0.0]) - 1.0).abs() < 1e-15);
        assert!(serde_json::from_str::<TrigPoly>(r#"{"dim":1,"terms":[{"k":[0],"re":1,"im":0}]}"#).is_err());
    }
}
