use rayon::prelude::*;

use super::{bisect_unit, sign_class, Evaluable, SearchDomain, SignBallReport, NEAR_ZERO};
use crate::error::Result;

/// A rectangular sample grid, axis 0 slowest.
struct Grid {
    shape: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
    periodic: bool,
}

impl Grid {
    fn len(&self) -> usize {
        self.shape.iter().product()
    }

    fn index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        let mut rest = flat;
        for axis in (0..self.shape.len()).rev() {
            idx[axis] = rest % self.shape[axis];
            rest /= self.shape[axis];
        }
        idx
    }

    fn point(&self, flat: usize) -> Vec<f64> {
        self.index(flat).iter().enumerate().map(|(a, &i)| self.origin[a] + i as f64 * self.spacing[a]).collect()
    }

    fn diagonal(&self) -> f64 {
        self.spacing.iter().map(|h| h * h).sum::<f64>().sqrt()
    }

    /// Physical displacement from sample `from` to sample `to`, using the
    /// nearest periodic image on the torus.
    fn displacement(&self, from: &[usize], to: &[usize]) -> Vec<f64> {
        from.iter()
            .zip(to)
            .enumerate()
            .map(|(a, (&i, &j))| {
                let n = self.shape[a] as i64;
                let mut di = j as i64 - i as i64;
                if self.periodic {
                    di = di.rem_euclid(n);
                    if 2 * di > n {
                        di -= n;
                    }
                }
                di as f64 * self.spacing[a]
            })
            .collect()
    }
}

pub(super) fn sample_torus<E: Evaluable + ?Sized>(f: &E, res: usize) -> Vec<f64> {
    let grid = Grid {
        shape: vec![res; f.dim()],
        spacing: vec![1.0 / res as f64; f.dim()],
        origin: vec![0.0; f.dim()],
        periodic: true,
    };
    sample(f, &grid)
}

fn sample<E: Evaluable + ?Sized>(f: &E, grid: &Grid) -> Vec<f64> {
    (0..grid.len()).into_par_iter().map(|i| f.value(&grid.point(i))).collect()
}

pub(super) fn search_torus<E: Evaluable + ?Sized>(f: &E, dom: &SearchDomain) -> Result<SignBallReport> {
    let d = dom.dim();
    let res = dom.resolution;
    let grid = Grid { shape: vec![res; d], spacing: vec![1.0 / res as f64; d], origin: vec![0.0; d], periodic: true };
    let values = f.torus_grid(res);
    Ok(search(f, &grid, &values, dom, |_| Some(f64::INFINITY)))
}

/// Samples the box enlarged by half its side on every face so that balls
/// centred inside the box see zeros beyond its faces.
pub(super) fn search_box<E: Evaluable + ?Sized>(
    f: &E,
    dom: &SearchDomain,
    lo: &[f64],
    hi: &[f64],
) -> Result<SignBallReport> {
    let res = dom.resolution;
    let origin: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| a - (b - a) / 2.0).collect();
    let far: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| b + (b - a) / 2.0).collect();
    let grid = Grid {
        shape: vec![res; lo.len()],
        spacing: origin.iter().zip(&far).map(|(a, b)| (b - a) / (res - 1) as f64).collect(),
        origin: origin.clone(),
        periodic: false,
    };
    let values = sample(f, &grid);
    let slack = 1e-12 * dom.diameter();
    let eligible = |p: &[f64]| {
        let inside = p.iter().enumerate().all(|(a, &x)| x >= lo[a] - slack && x <= hi[a] + slack);
        inside
            .then(|| p.iter().enumerate().map(|(a, &x)| (x - origin[a]).min(far[a] - x)).fold(f64::INFINITY, f64::min))
    };
    Ok(search(f, &grid, &values, dom, eligible))
}

/// Shared torus/box search. `eligible` returns, for admissible centers, the
/// distance to the edge of the sampled region.
fn search<E, B>(f: &E, grid: &Grid, values: &[f64], dom: &SearchDomain, eligible: B) -> SignBallReport
where
    E: Evaluable + ?Sized,
    B: Fn(&[f64]) -> Option<f64>,
{
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = NEAR_ZERO * max_abs;
    let class: Vec<i8> = values.iter().map(|&v| sign_class(v, threshold)).collect();
    let has_nonpos = class.iter().any(|&c| c <= 0);
    let has_nonneg = class.iter().any(|&c| c >= 0);
    if !has_nonpos || !has_nonneg {
        let diameter = dom.diameter();
        return SignBallReport {
            center: grid.point(0),
            r_lower: diameter,
            r_upper: diameter,
            bound: None,
            ratio: None,
            samples_used: values.len(),
            resolution: dom.resolution,
            constant_sign: true,
        };
    }
    let to_nonpos = edt(&class.iter().map(|&c| c <= 0).collect::<Vec<_>>(), grid);
    let to_nonneg = edt(&class.iter().map(|&c| c >= 0).collect::<Vec<_>>(), grid);

    let mut best = (usize::MAX, -1.0, 0.0);
    for i in 0..values.len() {
        let Some(edge) = eligible(&grid.point(i)) else {
            continue;
        };
        let dist = match class[i] {
            1 => to_nonpos[i].sqrt(),
            -1 => to_nonneg[i].sqrt(),
            _ => 0.0,
        };
        let score = dist.min(edge);
        if score > best.1 {
            best = (i, score, edge);
        }
    }
    let (center, _, edge) = best;
    let s0 = class[center];
    let c_idx = grid.index(center);
    let p = grid.point(center);

    let r_lower = if s0 == 0 {
        0.0
    } else {
        // Nearest opposite or zero sample, lowest index on ties.
        let mut nearest = (usize::MAX, f64::INFINITY);
        for (j, &cj) in class.iter().enumerate() {
            if cj == s0 {
                continue;
            }
            let disp = grid.displacement(&c_idx, &grid.index(j));
            let d2: f64 = disp.iter().map(|x| x * x).sum();
            if d2 < nearest.1 {
                nearest = (j, d2);
            }
        }
        let disp = grid.displacement(&c_idx, &grid.index(nearest.0));
        let seg = |s: f64| {
            let y: Vec<f64> = p.iter().zip(&disp).map(|(a, b)| a + s * b).collect();
            f.value(&y)
        };
        let t = bisect_unit(seg, s0, threshold);
        (t * nearest.1.sqrt()).min(edge)
    };
    SignBallReport {
        center: p,
        r_lower,
        r_upper: r_lower + grid.diagonal(),
        bound: None,
        ratio: None,
        samples_used: values.len(),
        resolution: dom.resolution,
        constant_sign: false,
    }
}

/// Squared Euclidean distance from every sample to the nearest seed, by
/// separable lower-envelope transforms along each axis. Periodic lines are
/// processed as three concatenated copies.
fn edt(seed: &[bool], grid: &Grid) -> Vec<f64> {
    let mut g: Vec<f64> = seed.iter().map(|&s| if s { 0.0 } else { f64::INFINITY }).collect();
    let total = g.len();
    for axis in 0..grid.shape.len() {
        let n = grid.shape[axis];
        let stride: usize = grid.shape[axis + 1..].iter().product();
        let h = grid.spacing[axis];
        let lines = total / n;
        let base = |l: usize| (l / stride) * n * stride + l % stride;
        let out: Vec<Vec<f64>> = (0..lines)
            .into_par_iter()
            .map(|l| {
                let b = base(l);
                let line: Vec<f64> = (0..n).map(|i| g[b + i * stride]).collect();
                if grid.periodic {
                    let tripled: Vec<f64> = line.iter().chain(&line).chain(&line).copied().collect();
                    lower_envelope(&tripled, h)[n..2 * n].to_vec()
                } else {
                    lower_envelope(&line, h)
                }
            })
            .collect();
        for (l, line) in out.into_iter().enumerate() {
            let b = base(l);
            for (i, v) in line.into_iter().enumerate() {
                g[b + i * stride] = v;
            }
        }
    }
    g
}

/// d[i] = min_j f[j] + (h (i - j))², skipping infinite f[j].
fn lower_envelope(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut v: Vec<usize> = Vec::with_capacity(n);
    let mut z: Vec<f64> = Vec::with_capacity(n);
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        let xq = q as f64 * h;
        loop {
            let Some(&p) = v.last() else {
                v.push(q);
                z.push(f64::NEG_INFINITY);
                break;
            };
            let xp = p as f64 * h;
            let s = ((f[q] + xq * xq) - (f[p] + xp * xp)) / (2.0 * (xq - xp));
            if s <= *z.last().unwrap() {
                v.pop();
                z.pop();
            } else {
                v.push(q);
                z.push(s);
                break;
            }
        }
    }
    if v.is_empty() {
        return vec![f64::INFINITY; n];
    }
    let mut k = 0;
    (0..n)
        .map(|i| {
            let x = i as f64 * h;
            while k + 1 < v.len() && z[k + 1] < x {
                k += 1;
            }
            let dx = x - v[k] as f64 * h;
            dx * dx + f[v[k]]
        })
        .collect()
}
