//! Seeded instance generators for the stress suites.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::eigenid::{EigenMix, MixPart, PlaneWave, PlaneWaveEigen};
use crate::error::{invalid, Result};
use crate::sphere::{SphereFn, ZonalTerm};
use crate::torus::{FreqVector, TrigPoly};

/// Shape of a random [`TrigPoly`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigSpec {
    pub dim: usize,
    pub min_shells: usize,
    pub max_shells: usize,
    /// Largest admissible shell norm ‖k‖.
    pub max_norm: i64,
    /// At most this many frequencies (up to sign) are drawn per shell.
    pub terms_per_shell: usize,
    /// Reject draws whose top shell cannot be removed by ball smoothing.
    pub smoothable: bool,
}

impl TrigSpec {
    pub fn new(dim: usize) -> Self {
        Self { dim, min_shells: 1, max_shells: 5, max_norm: 12, terms_per_shell: 2, smoothable: false }
    }

    pub fn smoothable(self) -> Self {
        Self { min_shells: self.min_shells.max(2), smoothable: true, ..self }
    }
}

/// Representative lattice frequencies grouped by ‖k‖².
fn shell_table(dim: usize, max_norm: i64) -> BTreeMap<u64, Vec<FreqVector>> {
    let mut table: BTreeMap<u64, Vec<FreqVector>> = BTreeMap::new();
    let side = (2 * max_norm + 1) as usize;
    let count = side.pow(dim as u32);
    for idx in 0..count {
        let mut rest = idx;
        let k: Vec<i64> = (0..dim)
            .map(|_| {
                let c = (rest % side) as i64 - max_norm;
                rest /= side;
                c
            })
            .collect();
        let k = FreqVector(k);
        if k.is_zero() || !k.is_representative() || k.norm_sq() > (max_norm * max_norm) as u64 {
            continue;
        }
        table.entry(k.norm_sq()).or_default().push(k);
    }
    table
}

/// A random real trigonometric polynomial with unit-scale Gaussian
/// coefficients on randomly chosen frequency shells.
pub fn trig_poly<R: Rng + ?Sized>(rng: &mut R, spec: &TrigSpec) -> Result<TrigPoly> {
    if spec.dim == 0 || spec.dim > 8 {
        return invalid(format!("torus dimension {} is outside 1..=8", spec.dim));
    }
    if spec.min_shells == 0 || spec.min_shells > spec.max_shells || spec.terms_per_shell == 0 {
        return invalid("shell counts must satisfy 1 <= min_shells <= max_shells and terms_per_shell >= 1");
    }
    let table = shell_table(spec.dim, spec.max_norm);
    let norms: Vec<u64> = table.keys().copied().collect();
    if norms.len() < spec.min_shells {
        return invalid(format!("only {} shells have norm <= {}", norms.len(), spec.max_norm));
    }
    let max_shells = spec.max_shells.min(norms.len());
    loop {
        let n_shells = rng.gen_range(spec.min_shells..=max_shells);
        let chosen: Vec<u64> = norms.choose_multiple(rng, n_shells).copied().collect();
        let mut terms = Vec::new();
        for n2 in &chosen {
            let shell = &table[n2];
            let take = rng.gen_range(1..=spec.terms_per_shell.min(shell.len()));
            for k in shell.choose_multiple(rng, take) {
                let a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                terms.push((k.clone(), a));
            }
        }
        let f = TrigPoly::from_representatives(spec.dim, terms)?;
        if !spec.smoothable || f.delta_star() < 0.5 {
            return Ok(f);
        }
    }
}

fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// 1 to `max_terms` zonal harmonics on S^{dim-1} with degrees in
/// 1..=max_degree, random poles and Gaussian weights.
pub fn sphere_fn<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_degree: usize, max_terms: usize) -> Result<SphereFn> {
    if max_degree == 0 || max_terms == 0 {
        return invalid("max_degree and max_terms must be positive");
    }
    let n = rng.gen_range(1..=max_terms);
    let terms = (0..n)
        .map(|_| ZonalTerm {
            degree: rng.gen_range(1..=max_degree),
            pole: unit_vector(rng, dim),
            weight: rng.sample(StandardNormal),
        })
        .collect();
    SphereFn::new(dim, terms)
}

/// A sum of `waves` plane waves with wave vectors of norm √λ.
pub fn plane_wave<R: Rng + ?Sized>(rng: &mut R, dim: usize, lambda: f64, waves: usize) -> Result<PlaneWaveEigen> {
    let root = lambda.sqrt();
    let waves = (0..waves)
        .map(|_| PlaneWave {
            k: unit_vector(rng, dim).into_iter().map(|c| c * root).collect(),
            amp: rng.sample(StandardNormal),
            phase: rng.gen_range(0.0..2.0 * PI),
        })
        .collect();
    PlaneWaveEigen::new(dim, lambda, waves)
}

/// 1 to `max_levels` eigen-levels with λ drawn uniformly from `lambda_range`.
pub fn eigen_mix<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    max_levels: usize,
    lambda_range: (f64, f64),
) -> Result<EigenMix> {
    if max_levels == 0 {
        return invalid("max_levels must be positive");
    }
    let (lo, hi) = lambda_range;
    if !(lo > 0.0 && hi >= lo) {
        return invalid(format!("lambda range ({lo}, {hi}) is not a positive interval"));
    }
    let levels = rng.gen_range(1..=max_levels);
    let parts = (0..levels)
        .map(|_| {
            let lambda = if hi > lo { rng.gen_range(lo..hi) } else { lo };
            let waves = rng.gen_range(1..=3);
            Ok(MixPart { coef: 1.0 + rng.gen::<f64>(), eigen: plane_wave(rng, dim, lambda, waves)? })
        })
        .collect::<Result<Vec<_>>>()?;
    EigenMix::new(dim, parts)
}
