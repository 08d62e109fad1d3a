use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{bisect_unit, sign_class, Evaluable, SearchDomain, SignBallReport, NEAR_ZERO};
use crate::error::Result;

const NEIGHBOURS: usize = 8;

/// `n` points of the golden-angle spiral on S², sorted by decreasing z.
pub(crate) fn spiral_points(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn chord2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

fn geodesic(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos()
}

/// k nearest neighbours of every point. Points are sorted by z, so the scan
/// in each direction stops once the z-gap alone exceeds the current k-th
/// best chord.
fn knn(points: &[[f64; 3]], k: usize) -> Vec<Vec<usize>> {
    (0..points.len())
        .into_par_iter()
        .map(|i| {
            let p = &points[i];
            let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
            let worst = |best: &Vec<(f64, usize)>| {
                if best.len() < k {
                    f64::INFINITY
                } else {
                    best[k - 1].0
                }
            };
            let consider = |j: usize, best: &mut Vec<(f64, usize)>| {
                let d = chord2(p, &points[j]);
                if d < worst(best) {
                    let pos = best.partition_point(|&(bd, bj)| (bd, bj) < (d, j));
                    best.insert(pos, (d, j));
                    best.truncate(k);
                }
            };
            for j in (0..i).rev() {
                if (p[2] - points[j][2]).powi(2) > worst(&best) {
                    break;
                }
                consider(j, &mut best);
            }
            for (j, q) in points.iter().enumerate().skip(i + 1) {
                if (p[2] - q[2]).powi(2) > worst(&best) {
                    break;
                }
                consider(j, &mut best);
            }
            best.into_iter().map(|(_, j)| j).collect()
        })
        .collect()
}

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on node index
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Geodesic distance from every node to its propagated nearest seed.
/// Each node inherits a seed from a neighbour and is keyed on the true
/// great-circle distance to that seed rather than on path length.
fn seed_distance(points: &[[f64; 3]], graph: &[Vec<usize>], seed: &[bool]) -> Vec<f64> {
    let n = points.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut owner = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    for i in (0..n).filter(|&i| seed[i]) {
        dist[i] = 0.0;
        owner[i] = i;
        heap.push(Entry { dist: 0.0, node: i });
    }
    while let Some(Entry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        let s = owner[node];
        for &v in &graph[node] {
            let cand = geodesic(&points[v], &points[s]);
            if cand < dist[v] {
                dist[v] = cand;
                owner[v] = s;
                heap.push(Entry { dist: cand, node: v });
            }
        }
    }
    dist
}

pub(super) fn search_sphere<E: Evaluable + ?Sized>(f: &E, dom: &SearchDomain) -> Result<SignBallReport> {
    let n = 2 * dom.resolution * dom.resolution;
    let points = spiral_points(n);
    let values: Vec<f64> = points.par_iter().map(|p| f.value(p)).collect();
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = NEAR_ZERO * max_abs;
    let class: Vec<i8> = values.iter().map(|&v| sign_class(v, threshold)).collect();
    if !class.iter().any(|&c| c <= 0) || !class.iter().any(|&c| c >= 0) {
        let d = dom.diameter();
        return Ok(SignBallReport {
            center: points[0].to_vec(),
            r_lower: d,
            r_upper: d,
            bound: None,
            ratio: None,
            samples_used: n,
            resolution: dom.resolution,
            constant_sign: true,
        });
    }
    let graph = knn(&points, NEIGHBOURS);
    let to_nonpos = seed_distance(&points, &graph, &class.iter().map(|&c| c <= 0).collect::<Vec<_>>());
    let to_nonneg = seed_distance(&points, &graph, &class.iter().map(|&c| c >= 0).collect::<Vec<_>>());
    let mut best = (0usize, -1.0);
    for i in 0..n {
        let d = match class[i] {
            1 => to_nonpos[i],
            -1 => to_nonneg[i],
            _ => 0.0,
        };
        if d > best.1 {
            best = (i, d);
        }
    }
    let c = best.0;
    let s0 = class[c];
    let p = points[c];
    let r_lower = if s0 == 0 {
        0.0
    } else {
        let mut nearest = (usize::MAX, f64::INFINITY);
        for (j, &cj) in class.iter().enumerate() {
            if cj != s0 {
                let d = geodesic(&p, &points[j]);
                if d < nearest.1 {
                    nearest = (j, d);
                }
            }
        }
        let (q, theta) = (points[nearest.0], nearest.1);
        let arc = |s: f64| f.value(&slerp(&p, &q, theta, s));
        bisect_unit(arc, s0, threshold) * theta
    };
    // Typical spacing of n equal-area points, doubled to cover the diagonal.
    let spacing = (4.0 * std::f64::consts::PI / n as f64).sqrt() * std::f64::consts::SQRT_2;
    Ok(SignBallReport {
        center: p.to_vec(),
        r_lower,
        r_upper: r_lower + spacing,
        bound: None,
        ratio: None,
        samples_used: n,
        resolution: dom.resolution,
        constant_sign: false,
    })
}

/// Point at fraction s along the great circle from p to q (angle theta apart).
fn slerp(p: &[f64; 3], q: &[f64; 3], theta: f64, s: f64) -> [f64; 3] {
    if theta < 1e-15 {
        return *p;
    }
    let a = ((1.0 - s) * theta).sin() / theta.sin();
    let b = (s * theta).sin() / theta.sin();
    [a * p[0] + b * q[0], a * p[1] + b * q[1], a * p[2] + b * q[2]]
}
