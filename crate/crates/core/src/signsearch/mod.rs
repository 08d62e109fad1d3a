//! Empirical measurement of the largest ball on which a function keeps one
//! sign, on the torus, the 2-sphere and Euclidean boxes, plus the
//! one-dimensional sharpness probe.
//!
//! Samples whose magnitude is at most `1e-12 · max |f|` count as zeros. Each
//! sample's distance to the nearest sample of the other sign (or a zero) is
//! obtained from an exact Euclidean distance transform (torus, box) or by
//! nearest-seed propagation on a k-nearest-neighbour graph (sphere). The
//! maximising sample is the reported center; the zero on the segment to its
//! nearest opposite sample is located by bisection and gives `r_lower`.

mod grid;
mod sharpness;
mod sphere_grid;

use serde::{Deserialize, Serialize};

use crate::eigenid::{EigenMix, PlaneWaveEigen, Source};
use crate::error::{invalid, Result};
use crate::sphere::SphereFn;
use crate::torus::TrigPoly;

pub use sharpness::{sharpness_ceiling, sharpness_probe, sharpness_probe_seeded, structured_extremal, SharpnessResult};

/// Magnitudes below this fraction of the largest sample count as zeros.
pub const NEAR_ZERO: f64 = 1e-12;
/// Bisection steps used to locate the zero along the refinement segment.
pub const REFINE_STEPS: usize = 40;

/// Where the search happens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainKind {
    Torus { dim: usize },
    Sphere { dim: usize },
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDomain {
    pub kind: DomainKind,
    /// Samples per axis; the sphere uses 2·resolution² spiral points.
    pub resolution: usize,
}

impl SearchDomain {
    pub fn torus(dim: usize, resolution: usize) -> Result<Self> {
        Self::new(DomainKind::Torus { dim }, resolution)
    }

    pub fn sphere(dim: usize, resolution: usize) -> Result<Self> {
        Self::new(DomainKind::Sphere { dim }, resolution)
    }

    pub fn cube(lo: Vec<f64>, hi: Vec<f64>, resolution: usize) -> Result<Self> {
        Self::new(DomainKind::Box { lo, hi }, resolution)
    }

    pub fn new(kind: DomainKind, resolution: usize) -> Result<Self> {
        if resolution < 16 {
            return invalid(format!("resolution must be at least 16, got {resolution}"));
        }
        match &kind {
            DomainKind::Torus { dim } if *dim == 0 || *dim > 8 => {
                return invalid(format!("torus dimension {dim} is outside 1..=8"));
            }
            DomainKind::Sphere { dim } if *dim != 3 => {
                return invalid(format!("sign search on spheres supports d = 3 only, got {dim}"));
            }
            DomainKind::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return invalid("box corners must be nonempty and of equal length");
                }
                if lo.iter().zip(hi).any(|(a, b)| !(b > a)) {
                    return invalid("box must have positive side lengths");
                }
            }
            _ => {}
        }
        Ok(Self { kind, resolution })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            DomainKind::Torus { dim } | DomainKind::Sphere { dim } => *dim,
            DomainKind::Box { lo, .. } => lo.len(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DomainKind::Torus { .. } => "torus",
            DomainKind::Sphere { .. } => "sphere",
            DomainKind::Box { .. } => "box",
        }
    }

    /// Largest distance between two points of the domain.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            DomainKind::Torus { dim } => (*dim as f64).sqrt() / 2.0,
            DomainKind::Sphere { .. } => std::f64::consts::PI,
            DomainKind::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| (b - a).powi(2)).sum::<f64>().sqrt(),
        }
    }
}

/// Result of one sign-free ball measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignBallReport {
    pub center: Vec<f64>,
    /// Distance from the center to the zero located on the segment towards
    /// the nearest opposite-sign sample.
    pub r_lower: f64,
    /// `r_lower` plus one grid diagonal.
    pub r_upper: f64,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub samples_used: usize,
    pub resolution: usize,
    /// The samples never changed sign; radii are then the domain diameter.
    pub constant_sign: bool,
}

/// A real function that can be sampled on a search domain.
pub trait Evaluable: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Values on the torus grid {i/res}^d, axis 0 slowest.
    fn torus_grid(&self, res: usize) -> Vec<f64> {
        grid::sample_torus(self, res)
    }
}

impl Evaluable for TrigPoly {
    fn dim(&self) -> usize {
        TrigPoly::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }

    fn torus_grid(&self, res: usize) -> Vec<f64> {
        self.eval_grid(res)
    }
}

impl Evaluable for SphereFn {
    fn dim(&self) -> usize {
        SphereFn::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval_unchecked(x)
    }
}

impl Evaluable for PlaneWaveEigen {
    fn dim(&self) -> usize {
        Source::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
}

impl Evaluable for EigenMix {
    fn dim(&self) -> usize {
        Source::dim(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
}

/// Wraps a closure as an [`Evaluable`] of the given dimension.
pub struct FnEval<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> Evaluable for FnEval<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Largest sign-free ball found on the sampled domain.
pub fn largest_signfree_ball<E: Evaluable + ?Sized>(f: &E, dom: &SearchDomain) -> Result<SignBallReport> {
    if f.dim() != dom.dim() {
        return invalid(format!("function has dimension {} but the domain has {}", f.dim(), dom.dim()));
    }
    match &dom.kind {
        DomainKind::Torus { .. } => grid::search_torus(f, dom),
        DomainKind::Box { lo, hi } => grid::search_box(f, dom, lo, hi),
        DomainKind::Sphere { .. } => sphere_grid::search_sphere(f, dom),
    }
}

/// Measures the sign-free radius and checks `r_lower ≤ bound`.
pub fn verify_bound<E: Evaluable + ?Sized>(f: &E, dom: &SearchDomain, bound: f64) -> Result<(bool, SignBallReport)> {
    if !(bound > 0.0) {
        return invalid(format!("bound must be positive, got {bound}"));
    }
    let mut report = largest_signfree_ball(f, dom)?;
    report.bound = Some(bound);
    report.ratio = Some(report.r_lower / bound);
    Ok((report.r_lower <= bound, report))
}

/// Sign class of a sample: +1, -1, or 0 for near-zero values.
pub(crate) fn sign_class(v: f64, threshold: f64) -> i8 {
    if v.abs() <= threshold {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Finds a zero of `g` on [0, 1] where g(0) has sign `s0` and g(1) does not.
pub(crate) fn bisect_unit<G: Fn(f64) -> f64>(g: G, s0: i8, threshold: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..REFINE_STEPS {
        let mid = 0.5 * (lo + hi);
        if sign_class(g(mid), threshold) == s0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
