//! Longest sign-free interval of real trigonometric polynomials on T¹ whose
//! spectrum lies in ±[A, A+B].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const PROBE_RESOLUTION: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub a: u32,
    pub b: u32,
    pub best: f64,
    pub structured_best: f64,
    pub random_best: f64,
    pub ceiling: f64,
    pub trials: usize,
    pub seed: u64,
}

/// (B+1)/(2A+B).
pub fn sharpness_ceiling(a: u32, b: u32) -> f64 {
    (b as f64 + 1.0) / (2.0 * a as f64 + b as f64)
}

/// `cos(π(2A+B)x) · Π_{m<B} sin(π(x - z_m))` with `z_m = (m + 1/2)/(2A+B)`.
///
/// The product places double zeros at B consecutive zeros of the cosine, so
/// the function keeps one sign on an interval of length (B+1)/(2A+B). Its
/// frequencies are the integers A..=A+B (and their negatives).
pub fn structured_extremal(a: u32, b: u32) -> impl Fn(f64) -> f64 + Sync {
    let n = (2 * a + b) as f64;
    let zeros: Vec<f64> = (0..b).map(|m| (m as f64 + 0.5) / n).collect();
    move |x: f64| {
        let mut v = (PI * n * x).cos();
        for z in &zeros {
            v *= (PI * (x - z)).sin();
        }
        v
    }
}

/// Best sign-free interval found with the default seed 0.
pub fn sharpness_probe(a: u32, b: u32, trials: usize) -> Result<f64> {
    Ok(sharpness_probe_seeded(a, b, trials, 0)?.best)
}

/// Searches the structured family under random shifts of the sample grid
/// and random coefficient draws on the admissible spectrum.
pub fn sharpness_probe_seeded(a: u32, b: u32, trials: usize, seed: u64) -> Result<SharpnessResult> {
    if a < 1 {
        return invalid("sharpness probe needs A >= 1");
    }
    if trials < 1 {
        return invalid("sharpness probe needs at least one trial");
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    let structured = structured_extremal(a, b);
    let h = 1.0 / PROBE_RESOLUTION as f64;
    let mut structured_best: f64 = 0.0;
    let mut random_best: f64 = 0.0;
    for _ in 0..trials {
        let shift = rng.gen_range(0.0..h);
        structured_best = structured_best.max(longest_run(&structured, shift, PROBE_RESOLUTION));
        let coeffs: Vec<(f64, f64)> =
            (0..=b).map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let random = |x: f64| {
            coeffs
                .iter()
                .enumerate()
                .map(|(j, (c, s))| {
                    let w = 2.0 * PI * (a + j as u32) as f64 * x;
                    c * w.cos() + s * w.sin()
                })
                .sum::<f64>()
        };
        random_best = random_best.max(longest_run(&random, shift, PROBE_RESOLUTION));
    }
    Ok(SharpnessResult {
        a,
        b,
        best: structured_best.max(random_best),
        structured_best,
        random_best,
        ceiling: sharpness_ceiling(a, b),
        trials,
        seed,
    })
}

/// Longest cyclic run of strictly one sign among samples `shift + i/res`,
/// with both ends refined to the enclosing zeros by bisection.
fn longest_run<F: Fn(f64) -> f64>(f: &F, shift: f64, res: usize) -> f64 {
    let h = 1.0 / res as f64;
    let x = |i: usize| shift + i as f64 * h;
    let sign: Vec<i8> = (0..res)
        .map(|i| {
            let v = f(x(i));
            (v > 0.0) as i8 - (v < 0.0) as i8
        })
        .collect();
    let Some(start) = (0..res).find(|&i| sign[i] != sign[(i + res - 1) % res]) else {
        return 1.0;
    };
    // Walk the circle once, starting at a run boundary.
    let mut best = (0usize, 0usize);
    let mut run_start = start;
    let mut len = 0;
    for step in 0..res {
        let i = (start + step) % res;
        if step > 0 && sign[i] != sign[(i + res - 1) % res] {
            if sign[run_start] != 0 && len > best.1 {
                best = (run_start, len);
            }
            run_start = i;
            len = 0;
        }
        len += 1;
    }
    if sign[run_start] != 0 && len > best.1 {
        best = (run_start, len);
    }
    let (first, count) = best;
    if count == 0 {
        return 0.0;
    }
    let s = sign[first];
    // abscissae continue past 1 when the run crosses the seam
    let left_in = x(first);
    let right_in = left_in + (count - 1) as f64 * h;
    let edge = |inside: f64, outside: f64| {
        let (mut a, mut b) = (inside, outside);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            let v = f(m);
            if (v > 0.0 && s > 0) || (v < 0.0 && s < 0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    edge(right_in, right_in + h) - edge(left_in, left_in - h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structured_family_has_admissible_spectrum() {
        for (a, b) in [(5, 1), (3, 2), (2, 4), (4, 0)] {
            let f = structured_extremal(a, b);
            let n = 64;
            for freq in 0..n / 2 {
                let (mut c, mut s) = (0.0, 0.0);
                for i in 0..n {
                    let x = i as f64 / n as f64;
                    c += f(x) * (2.0 * PI * freq as f64 * x).cos();
                    s += f(x) * (2.0 * PI * freq as f64 * x).sin();
                }
                let mag = (c * c + s * s).sqrt() / n as f64;
                if freq < a as usize || freq > (a + b) as usize {
                    assert!(mag < 1e-13, "A={a} B={b} freq={freq}: {mag}");
                }
            }
        }
    }

    #[test]
    fn run_of_a_cosine() {
        let f = |x: f64| (10.0 * PI * x).cos();
        let len = longest_run(&f, 1.234e-5, 1 << 12);
        assert!((len - 0.1).abs() < 1e-12);
    }

    #[test]
    fn run_across_the_seam() {
        let f = |x: f64| (2.0 * PI * x).cos() + 0.5;
        // positive on (-1/3, 1/3)
        let len = longest_run(&f, 3e-5, 1 << 10);
        assert!((len - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn probe_examples() {
        assert!((sharpness_probe(5, 0, 3).unwrap() - 0.1).abs() < 1e-12);
        let r = sharpness_probe_seeded(5, 1, 4, 11).unwrap();
        assert!(r.best <= 2.0 / 11.0 + 1.0 / 4096.0);
        assert!(r.best >= 0.5 * 2.0 / 11.0);
        assert!((r.structured_best - 2.0 / 11.0).abs() < 1e-9);
        assert!(sharpness_probe(3, 2, 4).unwrap() <= 3.0 / 8.0 + 1.0 / 4096.0);
        assert!(sharpness_probe(0, 2, 4).is_err());
    }
}
