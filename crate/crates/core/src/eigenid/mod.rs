//! Global Laplacian eigenfunctions on R^n built from plane waves, their
//! spherical means and Coulomb-kernel ball integrals, and the inhomogeneous
//! wave equation driven by such sources.

mod identity;
mod wave;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use identity::{
    coulomb_ball_integral, ode_residual_r, qn, radial_average, spherical_mean, verify_identity, IdentityCase,
    OdeResidual,
};
pub use wave::{
    bound_theorem3, duhamel_closed_form, kirchhoff_3d, poisson_2d, wave_factor, wave_pde_residual,
    wave_pde_residual_mix,
};

const WAVE_NORM_TOL: f64 = 1e-10;

/// One plane wave `amplitude · cos(⟨k, x⟩ + phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub k: Vec<f64>,
    pub amp: f64,
    pub phase: f64,
}

/// φ = Σ amp · cos(⟨k, x⟩ + phase) with every ‖k‖² = λ, so -Δφ = λφ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlaneWaveJson", into = "PlaneWaveJson")]
pub struct PlaneWaveEigen {
    dim: usize,
    lambda: f64,
    waves: Vec<PlaneWave>,
}

#[derive(Serialize, Deserialize)]
struct PlaneWaveJson {
    dim: usize,
    lambda: f64,
    waves: Vec<PlaneWave>,
}

impl TryFrom<PlaneWaveJson> for PlaneWaveEigen {
    type Error = Error;

    fn try_from(j: PlaneWaveJson) -> Result<Self> {
        PlaneWaveEigen::new(j.dim, j.lambda, j.waves)
    }
}

impl From<PlaneWaveEigen> for PlaneWaveJson {
    fn from(p: PlaneWaveEigen) -> Self {
        PlaneWaveJson { dim: p.dim, lambda: p.lambda, waves: p.waves }
    }
}

impl PlaneWaveEigen {
    pub fn new(dim: usize, lambda: f64, waves: Vec<PlaneWave>) -> Result<Self> {
        if dim < 2 {
            return invalid(format!("plane-wave eigenfunctions need dim >= 2, got {dim}"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return invalid(format!("lambda must be positive, got {lambda}"));
        }
        if waves.is_empty() {
            return invalid("waves must be nonempty");
        }
        for (i, w) in waves.iter().enumerate() {
            if w.k.len() != dim {
                return invalid(format!("waves[{i}].k has length {} but dim is {dim}", w.k.len()));
            }
            let n2: f64 = w.k.iter().map(|c| c * c).sum();
            if (n2 - lambda).abs() > WAVE_NORM_TOL * lambda {
                return invalid(format!("waves[{i}].k has squared norm {n2}, expected lambda = {lambda}"));
            }
            if !w.amp.is_finite() || !w.phase.is_finite() {
                return invalid(format!("waves[{i}] has a non-finite amplitude or phase"));
            }
        }
        Ok(Self { dim, lambda, waves })
    }

    /// `amp · cos(√λ x_axis + phase)`.
    pub fn axis_wave(dim: usize, lambda: f64, axis: usize, amp: f64, phase: f64) -> Result<Self> {
        let mut k = vec![0.0; dim];
        if axis >= dim {
            return invalid(format!("axis {axis} out of range for dim {dim}"));
        }
        k[axis] = lambda.sqrt();
        Self::new(dim, lambda, vec![PlaneWave { k, amp, phase }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn waves(&self) -> &[PlaneWave] {
        &self.waves
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.waves.iter().map(|w| w.amp * (dot(&w.k, x) + w.phase).cos()).sum()
    }

    /// Copy with every amplitude multiplied by c.
    pub fn scaled(&self, c: f64) -> Self {
        let waves = self.waves.iter().map(|w| PlaneWave { amp: w.amp * c, ..w.clone() }).collect();
        Self { waves, ..self.clone() }
    }
}

/// One eigen-level of an [`EigenMix`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixPart {
    pub coef: f64,
    pub eigen: PlaneWaveEigen,
}

/// f = Σ a_k φ_k with strictly increasing eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EigenMixJson", into = "EigenMixJson")]
pub struct EigenMix {
    dim: usize,
    parts: Vec<MixPart>,
}

#[derive(Serialize, Deserialize)]
struct EigenMixJson {
    dim: usize,
    parts: Vec<MixPart>,
}

impl TryFrom<EigenMixJson> for EigenMix {
    type Error = Error;

    fn try_from(j: EigenMixJson) -> Result<Self> {
        EigenMix::new(j.dim, j.parts)
    }
}

impl From<EigenMix> for EigenMixJson {
    fn from(m: EigenMix) -> Self {
        EigenMixJson { dim: m.dim, parts: m.parts }
    }
}

impl EigenMix {
    /// Sorts the parts by eigenvalue and merges parts of equal eigenvalue
    /// into one, folding the second coefficient into its amplitudes.
    pub fn new(dim: usize, parts: Vec<MixPart>) -> Result<Self> {
        if parts.is_empty() {
            return invalid("parts must be nonempty");
        }
        for (i, p) in parts.iter().enumerate() {
            if p.eigen.dim != dim {
                return invalid(format!("parts[{i}].eigen.dim is {} but dim is {dim}", p.eigen.dim));
            }
            if p.coef == 0.0 || !p.coef.is_finite() {
                return invalid(format!("parts[{i}].coef must be finite and nonzero"));
            }
        }
        let mut parts = parts;
        parts.sort_by(|a, b| a.eigen.lambda.total_cmp(&b.eigen.lambda));
        let mut merged: Vec<MixPart> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if (last.eigen.lambda - p.eigen.lambda).abs() <= WAVE_NORM_TOL * p.eigen.lambda => {
                    let extra = p.eigen.scaled(p.coef / last.coef);
                    last.eigen.waves.extend(extra.waves);
                }
                _ => merged.push(p),
            }
        }
        Ok(Self { dim, parts: merged })
    }

    pub fn single(coef: f64, eigen: PlaneWaveEigen) -> Result<Self> {
        let dim = eigen.dim;
        Self::new(dim, vec![MixPart { coef, eigen }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[MixPart] {
        &self.parts
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.parts.iter().map(|p| p.eigen.lambda).collect()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.parts.iter().map(|p| p.coef * p.eigen.eval(x)).sum()
    }
}

/// A finite combination of eigen-levels: a single eigenfunction or a mix.
pub trait Source: Sync {
    fn dim(&self) -> usize;

    /// (coefficient, eigenfunction) per level.
    fn levels(&self) -> Vec<(f64, &PlaneWaveEigen)>;

    fn eval(&self, x: &[f64]) -> f64 {
        self.levels().iter().map(|(a, p)| a * p.eval(x)).sum()
    }

    fn max_frequency(&self) -> f64 {
        self.levels().iter().map(|(_, p)| p.lambda.sqrt()).fold(0.0, f64::max)
    }
}

impl Source for PlaneWaveEigen {
    fn dim(&self) -> usize {
        self.dim
    }

    fn levels(&self) -> Vec<(f64, &PlaneWaveEigen)> {
        vec![(1.0, self)]
    }
}

impl Source for EigenMix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn levels(&self) -> Vec<(f64, &PlaneWaveEigen)> {
        self.parts.iter().map(|p| (p.coef, &p.eigen)).collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
