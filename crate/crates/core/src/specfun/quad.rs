//! Fixed Gauss–Legendre rules and globally adaptive Gauss–Kronrod quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Default absolute tolerance for [`quad_adaptive`].
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum number of bisections applied to any one subinterval.
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// An n-point interpolatory rule on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Number of points; Gauss–Legendre rules are exact up to degree 2·order − 1.
    pub order: usize,
}

impl QuadRule {
    /// n-point Gauss–Legendre rule on [-1, 1].
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights, order: n }
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        2 * self.order - 1
    }

    /// Applies the rule to f on [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, dp)
}

/// Shared Gauss–Legendre rules with 2^k points, k = 3..=10.
pub fn gauss_legendre_pow2(k: u32) -> &'static QuadRule {
    static RULES: OnceLock<Vec<QuadRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| (3..=10).map(|k| QuadRule::gauss_legendre(1 << k)).collect());
    &rules[(k.clamp(3, 10) - 3) as usize]
}

/// Options for [`quad_adaptive_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Exponent α > -1 of an integrable `(t - a)^α` factor at the left endpoint.
    pub left_exponent: Option<f64>,
    /// Exponent α > -1 of an integrable `(b - t)^α` factor at the right endpoint.
    pub right_exponent: Option<f64>,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: DEFAULT_TOL,
            rel_tol: 0.0,
            max_depth: DEFAULT_MAX_DEPTH,
            left_exponent: None,
            right_exponent: None,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }

    pub fn rel(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn left_singularity(mut self, alpha: f64) -> Self {
        self.left_exponent = Some(alpha);
        self
    }

    pub fn right_singularity(mut self, alpha: f64) -> Self {
        self.right_exponent = Some(alpha);
        self
    }
}

/// ∫_a^b f with estimated absolute error ≤ tol.
pub fn quad_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    quad_adaptive_with(f, a, b, QuadOptions::with_tol(tol))
}

fn needs_substitution(alpha: Option<f64>) -> Option<f64> {
    match alpha {
        Some(a) if !(a >= 0.0 && a.fract() == 0.0) => Some(a),
        _ => None,
    }
}

/// Adaptive quadrature with optional endpoint-singularity substitution.
///
/// A factor `(b - t)^α` is removed by `b - t = (b - a) w^q`, `q = 2/(1+α)`,
/// which turns it into a smooth `w`-linear factor.
pub fn quad_adaptive_with<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    quad_dyn(&f, a, b, opts)
}

fn quad_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return domain(format!("quadrature needs finite a < b, got [{a}, {b}]"));
    }
    for alpha in [opts.left_exponent, opts.right_exponent].into_iter().flatten() {
        if !(alpha > -1.0) {
            return domain(format!("endpoint exponent must exceed -1, got {alpha}"));
        }
    }
    let left = needs_substitution(opts.left_exponent);
    let right = needs_substitution(opts.right_exponent);
    let len = b - a;
    match (left, right) {
        (None, None) => gauss_kronrod_adaptive(f, a, b, &opts),
        (Some(alpha), None) => {
            let q = 2.0 / (1.0 + alpha);
            let g = |w: f64| {
                if w <= 0.0 {
                    return 0.0;
                }
                let t = a + len * w.powf(q);
                if t <= a {
                    return 0.0;
                }
                f(t) * len * q * w.powf(q - 1.0)
            };
            gauss_kronrod_adaptive(&g, 0.0, 1.0, &opts)
        }
        (None, Some(alpha)) => {
            let q = 2.0 / (1.0 + alpha);
            let g = |w: f64| {
                if w <= 0.0 {
                    return 0.0;
                }
                let t = b - len * w.powf(q);
                if t >= b {
                    return 0.0;
                }
                f(t) * len * q * w.powf(q - 1.0)
            };
            gauss_kronrod_adaptive(&g, 0.0, 1.0, &opts)
        }
        (Some(_), Some(_)) => {
            let mid = 0.5 * (a + b);
            let half_tol = QuadOptions { abs_tol: 0.5 * opts.abs_tol, ..opts };
            let lo = quad_dyn(f, a, mid, QuadOptions { right_exponent: None, ..half_tol })?;
            let hi = quad_dyn(f, mid, b, QuadOptions { left_exponent: None, ..half_tol })?;
            Ok(lo + hi)
        }
    }
}

// Gauss–Kronrod 7/15 abscissae and weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, depth: u32) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error, depth }
}

fn gauss_kronrod_adaptive<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    let mut segments = vec![gk15(f, a, b, 0)];
    let max_segments = 4096;
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::Accuracy {
                context: "adaptive quadrature produced a non-finite value".into(),
                estimate: total,
                error: f64::INFINITY,
            });
        }
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            return Ok(total);
        }
        // Split the segment with the largest error that may still be refined.
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.depth < opts.max_depth)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::Accuracy {
                context: "adaptive quadrature reached its depth limit".into(),
                estimate: total,
                error: err,
            });
        };
        if segments.len() >= max_segments {
            return Err(Error::Accuracy {
                context: "adaptive quadrature exhausted its segment budget".into(),
                estimate: total,
                error: err,
            });
        }
        let s = segments.swap_remove(i);
        let mid = 0.5 * (s.a + s.b);
        let left = gk15(f, s.a, mid, s.depth + 1);
        let right = gk15(f, mid, s.b, s.depth + 1);
        if (left.error + right.error) >= s.error && s.error <= 100.0 * f64::EPSILON * s.value.abs() {
            // Roundoff floor reached; keep the coarser estimate and stop refining it.
            segments.push(Segment { depth: opts.max_depth, ..s });
        } else {
            segments.push(left);
            segments.push(right);
        }
    }
}
