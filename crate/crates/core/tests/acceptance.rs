//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use nodal_radius::eigenid::{
    coulomb_ball_integral, duhamel_closed_form, kirchhoff_3d, ode_residual_r, poisson_2d, qn, verify_identity,
    wave_pde_residual, wave_pde_residual_mix, EigenMix, MixPart, PlaneWaveEigen,
};
use nodal_radius::random::{self, TrigSpec};
use nodal_radius::signsearch::{sharpness_probe_seeded, verify_bound, SearchDomain};
use nodal_radius::specfun::bessel_first_zero;
use nodal_radius::sphere::{annihilator_bump, funk_hecke_eigenvalue, SphereFn, ZonalKernel};
use nodal_radius::torus::TrigPoly;

type Outcome = (bool, String);

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Composite five-point Gauss–Legendre on `pieces` equal subintervals.
fn composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * h;
            GL5.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// J_ν(x) from Schläfli's integral
/// (1/π)∫_0^π cos(νt - x sin t) dt - (sin νπ/π)∫_0^∞ e^{-x sinh t - νt} dt,
/// which has no cancellation beyond O(1) terms.
fn bessel_schlafli(nu: f64, x: f64) -> f64 {
    let first = composite(|t| (nu * t - x * t.sin()).cos(), 0.0, PI, 400) / PI;
    let tail = if nu.fract() == 0.0 {
        0.0
    } else {
        composite(|t| (-x * t.sinh() - nu * t).exp(), 0.0, 8.0, 400) * (nu * PI).sin() / PI
    };
    first - tail
}

/// J_n(x) for integer n from Bessel's integral, trapezoid on a full period.
fn bessel_int(n: i32, x: f64) -> f64 {
    let m = 400;
    (0..m)
        .map(|i| {
            let tau = 2.0 * PI * i as f64 / m as f64;
            (n as f64 * tau - x * tau.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

fn gegenbauer_rec(m: usize, alpha: f64, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * alpha * t);
    if m == 0 {
        return prev;
    }
    for n in 2..=m {
        let next = (2.0 * t * (n as f64 + alpha - 1.0) * cur - (n as f64 + 2.0 * alpha - 2.0) * prev) / n as f64;
        prev = cur;
        cur = next;
    }
    cur
}

fn unit(rng: &mut Pcg64, d: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if n < 1e-3 {
        return unit(rng, d);
    }
    v.into_iter().map(|c| c / n).collect()
}

fn point(rng: &mut Pcg64, d: usize, half: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-half..half)).collect()
}

fn wave(rng: &mut Pcg64, d: usize, lambda: f64) -> PlaneWaveEigen {
    let waves = rng.gen_range(1..=3);
    random::plane_wave(rng, d, lambda, waves).unwrap()
}

fn timed(limit: Duration, start: Instant) -> (bool, String) {
    let e = start.elapsed();
    (e < limit, format!("{:.1} s of {} s", e.as_secs_f64(), limit.as_secs()))
}

fn c1_bessel_zero_sweep() -> Outcome {
    let start = Instant::now();
    let j01 = bessel_first_zero(0.0).unwrap();
    let mut ok = (2.4048..=2.4049).contains(&j01);
    let mut worst: f64 = 0.0;
    for d in 2..=64 {
        let nu = d as f64 / 2.0 - 1.0;
        let j = bessel_first_zero(nu).unwrap();
        // oracle: sign change of Schläfli's integral across j ± 1e-10 and none
        // on a scan below it; J_ν > 0 on (0, ν] is classical, and below 0.9ν
        // the value is too small to resolve in absolute terms
        let eps = 1e-10;
        let bracket = bessel_schlafli(nu, j - eps) > 0.0 && bessel_schlafli(nu, j + eps) < 0.0;
        let mut s = (0.9 * nu).max(0.05);
        let mut clean = true;
        while s < j - 0.05 {
            clean &= bessel_schlafli(nu, s) > 0.0;
            s += 0.05;
        }
        ok &= bracket && clean && j <= j01 / 2.0 * d as f64;
        worst = worst.max(j / (j01 / 2.0 * d as f64));
    }
    let (fast, time) = timed(Duration::from_secs(5), start);
    (ok && fast, format!("j01 = {j01:.10}, max j/(j01 d/2) = {worst:.4}, {time}"))
}

fn c2_identity_n3() -> Outcome {
    let start = Instant::now();
    let mut rng = Pcg64::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let lambda = rng.gen_range(0.5..50.0);
        let phi = wave(&mut rng, 3, lambda);
        let r = rng.gen_range(0.1..4.0 * PI) / lambda.sqrt();
        let x = point(&mut rng, 3, 3.0);
        let integral = coulomb_ball_integral(&phi, &x, r, 1e-10).unwrap();
        let v = phi.eval(&x);
        let closed = 4.0 * PI * (1.0 - (lambda.sqrt() * r).cos()) / lambda * v;
        worst = worst.max((integral - closed).abs() / (1.0 + v.abs()));
    }
    let (fast, time) = timed(Duration::from_secs(60), start);
    (worst <= 1e-6 && fast, format!("50 instances, max normalised residual {worst:.2e}, {time}"))
}

/// Q_4, Q_5, Q_6 in closed form from ∫ s^{-ν+1} J_ν.
fn q_closed(n: usize, x: f64) -> f64 {
    match n {
        3 => 4.0 * PI * (1.0 - x.cos()),
        4 => 4.0 * PI * PI * (1.0 - bessel_int(0, x)),
        5 => 8.0 * PI * PI * (1.0 - x.sin() / x),
        6 => 4.0 * PI.powi(3) * (1.0 - 2.0 * bessel_int(1, x) / x),
        _ => unreachable!(),
    }
}

fn c3_identity_general() -> Outcome {
    let start = Instant::now();
    let mut rng = Pcg64::seed_from_u64(3);
    let (mut worst, mut profile_err): (f64, f64) = (0.0, 0.0);
    for n in 4..=6 {
        for _ in 0..20 {
            let lambda = rng.gen_range(0.5..20.0);
            let phi = wave(&mut rng, n, lambda);
            let r = rng.gen_range(0.1..3.0 * PI) / lambda.sqrt();
            let x = point(&mut rng, n, 2.0);
            worst = worst.max(verify_identity(&phi, &x, r, 1e-10).unwrap());
            let s = lambda.sqrt() * r;
            let q = qn(n, s).unwrap();
            profile_err = profile_err.max((q - q_closed(n, s)).abs() / (1.0 + q.abs()));
        }
    }
    let (fast, time) = timed(Duration::from_secs(300), start);
    (
        worst <= 1e-5 && profile_err <= 1e-9 && fast,
        format!("60 instances, max residual {worst:.2e}, Q_n vs closed form {profile_err:.1e}, {time}"),
    )
}

fn c4_zero_balance() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 30 {
        let n = rng.gen_range(3..=6);
        let lambda = rng.gen_range(0.5..20.0);
        let phi = wave(&mut rng, n, lambda);
        let x0 = point(&mut rng, n, 2.0);
        let dir = unit(&mut rng, n);
        let at = |s: f64| -> Vec<f64> { x0.iter().zip(&dir).map(|(a, b)| a + s * b).collect() };
        let f = |s: f64| phi.eval(&at(s));
        let step = 0.05 / lambda.sqrt();
        let Some(i) = (1..2000).find(|&i| f(i as f64 * step).signum() != f(0.0).signum()) else {
            continue;
        };
        let (mut a, mut b) = ((i - 1) as f64 * step, i as f64 * step);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if f(m).signum() == f(a).signum() {
                a = m;
            } else {
                b = m;
            }
        }
        let x = at(a);
        for r in [0.3, 1.0, 2.5] {
            let v = coulomb_ball_integral(&phi, &x, r / lambda.sqrt(), 1e-11).unwrap();
            worst = worst.max(v.abs());
        }
        count += 1;
    }
    (worst <= 1e-7, format!("30 roots x 3 radii, max |integral| {worst:.2e}"))
}

fn c5_ode() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for n in [4, 6] {
        for _ in 0..10 {
            let lambda = rng.gen_range(0.5..20.0);
            let phi = wave(&mut rng, n, lambda);
            let r = rng.gen_range(0.2..3.0) / lambda.sqrt();
            let x = point(&mut rng, n, 2.0);
            let o = ode_residual_r(n, &phi, &x, r).unwrap();
            worst = worst.max(o.residual.abs() / o.scale);
        }
    }
    (worst <= 1e-4, format!("n = 4, 6, 10 instances each, max residual/scale {worst:.2e}"))
}

/// Sum of a_k e^{2πi⟨k,x⟩}, real part.
fn trig_value(f: &TrigPoly, x: &[f64]) -> f64 {
    f.coeffs()
        .map(|(k, a)| {
            let phase = 2.0 * PI * k.0.iter().zip(x).map(|(&c, &y)| c as f64 * y).sum::<f64>();
            a.re * phase.cos() - a.im * phase.sin()
        })
        .sum()
}

/// Indicator transform of B(0, δ) ⊂ R^d at frequency norm ρ.
fn ball_transform(d: usize, delta: f64, rho: f64) -> f64 {
    let u = 2.0 * PI * rho * delta;
    match d {
        1 => u.sin() / (PI * rho),
        2 => delta * bessel_int(1, u) / rho,
        3 => 4.0 * PI * (u.sin() - u * u.cos()) / (2.0 * PI * rho).powi(3),
        _ => unreachable!(),
    }
}

fn c6_top_shell() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(6);
    let (mut leak, mut multiplier_err): (f64, f64) = (0.0, 0.0);
    let mut drops_ok = true;
    for i in 0..100 {
        let d = 1 + i % 3;
        let f = random::trig_poly(&mut rng, &TrigSpec::new(d).smoothable()).unwrap();
        let g = f.smooth_top_shell().unwrap();
        drops_ok &= g.shells().len() + 1 == f.shells().len();
        let top = *f.shells().norms_sq().last().unwrap();
        let delta = f.delta_star();
        // Fourier coefficients of g from samples on a grid fine enough to be exact
        let res = 2 * f.coeffs().flat_map(|(k, _)| k.0.iter().map(|c| c.unsigned_abs() as usize)).max().unwrap() + 2;
        let total = res.pow(d as u32);
        let samples: Vec<(Vec<f64>, f64)> = (0..total)
            .map(|idx| {
                let mut rest = idx;
                let x: Vec<f64> = (0..d)
                    .map(|_| {
                        let c = rest % res;
                        rest /= res;
                        c as f64 / res as f64
                    })
                    .collect();
                let v = trig_value(&g, &x);
                (x, v)
            })
            .collect();
        let coefficient = |k: &[i64]| -> (f64, f64) {
            let (mut re, mut im) = (0.0, 0.0);
            for (x, v) in &samples {
                let phase = -2.0 * PI * k.iter().zip(x).map(|(&c, &y)| c as f64 * y).sum::<f64>();
                re += v * phase.cos();
                im += v * phase.sin();
            }
            (re / total as f64, im / total as f64)
        };
        for (k, a) in f.coeffs() {
            let (re, im) = coefficient(&k.0);
            if k.norm_sq() == top {
                leak = leak.max(re.hypot(im));
            } else {
                let m = ball_transform(d, delta, k.norm());
                multiplier_err = multiplier_err.max((re - m * a.re).hypot(im - m * a.im) / a.norm());
            }
        }
    }
    (
        leak <= 1e-10 && drops_ok && multiplier_err <= 1e-9,
        format!("100 instances, max top-shell coefficient {leak:.1e}, shell count drop exact: {drops_ok}, other shells vs indicator transform {multiplier_err:.1e}"),
    )
}

fn c7_torus_radius() -> Outcome {
    let start = Instant::now();
    let mut rng = Pcg64::seed_from_u64(7);
    let (mut fail1, mut fail_k) = (0, 0);
    let (mut worst1, mut worst_k): (f64, f64) = (0.0, 0.0);
    for i in 0..200 {
        let d = 1 + i % 3;
        let f = random::trig_poly(&mut rng, &TrigSpec::new(d)).unwrap();
        let res = if d <= 2 { 256 } else { 96 };
        let dom = SearchDomain::torus(d, res).unwrap();
        let shells = f.shells().norms();
        let b1 = (d as f64).powf(1.5) * shells.iter().map(|n| 1.0 / n).sum::<f64>();
        let bk = 0.25 * f.coeffs().map(|(k, _)| 1.0 / k.norm()).sum::<f64>();
        let (_, rep) = verify_bound(&f, &dom, b1).unwrap();
        assert!(!rep.constant_sign);
        if rep.r_lower > b1 {
            fail1 += 1;
        }
        if rep.r_lower > bk {
            fail_k += 1;
        }
        worst1 = worst1.max(rep.r_lower / b1);
        worst_k = worst_k.max(rep.r_lower / bk);
    }
    let (fast, time) = timed(Duration::from_secs(600), start);
    (
        fail1 == 0 && fail_k == 0 && fast,
        format!("200 instances, violations {fail1} / {fail_k} (shell bound / Kozma), max ratios {worst1:.3} / {worst_k:.3}, {time}"),
    )
}

/// ∫_{S²} g(⟨x,y⟩) f(y) dσ(y) in coordinates t = ⟨x,y⟩ and azimuth about x.
fn sphere_convolution(g: &ZonalKernel, f: &SphereFn, x: &[f64]) -> f64 {
    let helper = if x[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot: f64 = helper.iter().zip(x).map(|(a, b)| a * b).sum();
    let mut u: Vec<f64> = helper.iter().zip(x).map(|(a, b)| a - dot * b).collect();
    let un = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    u.iter_mut().for_each(|c| *c /= un);
    let v = [x[1] * u[2] - x[2] * u[1], x[2] * u[0] - x[0] * u[2], x[0] * u[1] - x[1] * u[0]];
    let azimuth = 64;
    let ring = |t: f64| {
        let s = (1.0 - t * t).max(0.0).sqrt();
        (0..azimuth)
            .map(|j| {
                let p = 2.0 * PI * j as f64 / azimuth as f64;
                let y: Vec<f64> = (0..3).map(|i| t * x[i] + s * (p.cos() * u[i] + p.sin() * v[i])).collect();
                let n = y.iter().map(|c| c * c).sum::<f64>().sqrt();
                let y: Vec<f64> = y.iter().map(|c| c / n).collect();
                f.eval(&y).unwrap()
            })
            .sum::<f64>()
            * 2.0
            * PI
            / azimuth as f64
    };
    let (lo, hi) = g.support();
    let mid = 0.5 * (lo + hi);
    composite(|t| g.value(t) * ring(t), lo, mid, 40) + composite(|t| g.value(t) * ring(t), mid, hi, 40)
}

fn c8_funk_hecke() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let f = SphereFn::zonal(3, k, unit(&mut rng, 3), rng.gen_range(0.5..2.0)).unwrap();
        let w = f.terms()[0].weight.abs();
        let h = rng.gen_range(0.05..0.3);
        let c = rng.gen_range(-0.95 + h..0.95 - h);
        let g = ZonalKernel::bump(c, h, rng.gen_range(0.5..2.0)).unwrap();
        let lambda = funk_hecke_eigenvalue(&g, k, 3).unwrap();
        let conv = f.convolve(&g).unwrap();
        for _ in 0..20 {
            let x = unit(&mut rng, 3);
            let direct = sphere_convolution(&g, &f, &x);
            let want = lambda * f.eval(&x).unwrap();
            let termwise = if conv.is_zero() { 0.0 } else { conv.eval(&x).unwrap() };
            // Legendre harmonics are bounded by 1, so |λ_k| w bounds the convolution
            let scale = lambda.abs() * w;
            worst = worst.max((direct - want).abs() / scale).max((termwise - want).abs() / scale);
        }
    }
    (worst <= 1e-6, format!("k = 1..10, 20 points each, max relative error {worst:.2e}"))
}

fn c9_annihilator() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for &(m, d) in &[(20usize, 3usize), (50, 6), (40, 10)] {
        let g = annihilator_bump(m, d).unwrap();
        let (lo, hi) = g.support();
        let floor = 1.0 - ((d + 4) * (d + 4)) as f64 / (4.0 * (m * m) as f64);
        let alpha = (d as f64 - 2.0) / 2.0;
        let integrand = |t: f64| g.value(t) * gegenbauer_rec(m, alpha, t) * (1.0 - t * t).powf((d as f64 - 3.0) / 2.0);
        let mid = 0.5 * (lo + hi);
        let moment = composite(integrand, lo, mid, 400) + composite(integrand, mid, hi, 400);
        let mass = composite(|t| integrand(t).abs(), lo, mid, 400) + composite(|t| integrand(t).abs(), mid, hi, 400);
        let rel = moment.abs() / mass;
        let lambda_m = funk_hecke_eigenvalue(&g, m, d).unwrap();
        let lambda_0 = funk_hecke_eigenvalue(&g, 0, d).unwrap();
        let good = rel <= 1e-11 && lo > floor && hi < 1.0 && (lambda_m / lambda_0).abs() <= 1e-10;
        ok &= good;
        notes.push(format!(
            "({m},{d}): moment {rel:.1e}, support [{lo:.6}, {hi:.6}] above {floor:.6}, λ_m {lambda_m:.1e}"
        ));
    }
    (ok, notes.join("; "))
}

fn c10_sphere_radius() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(10);
    let dom = SearchDomain::sphere(3, 96).unwrap();
    let (mut fails, mut worst) = (0, 0.0f64);
    for _ in 0..50 {
        let f = random::sphere_fn(&mut rng, 3, 12, 3).unwrap();
        let bound = PI * PI * 3.0 * f.degrees().iter().map(|&k| 1.0 / k as f64).sum::<f64>();
        let (pass, rep) = verify_bound(&f, &dom, bound).unwrap();
        if !pass {
            fails += 1;
        }
        worst = worst.max(rep.r_lower / bound);
    }
    (fails == 0, format!("50 instances, violations {fails}, max ratio {worst:.3}"))
}

fn c11_wave() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(11);
    let (mut formula_err, mut star, mut pde, mut literal_pde): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for d in [3usize, 2] {
        for _ in 0..10 {
            let mix = random::eigen_mix(&mut rng, d, 3, (0.5, 10.0)).unwrap();
            let x = point(&mut rng, d, 1.0);
            let t = rng.gen_range(0.3..3.0);
            let closed: f64 = mix
                .parts()
                .iter()
                .map(|p| p.coef * (1.0 - (p.eigen.lambda().sqrt() * t).cos()) / p.eigen.lambda() * p.eigen.eval(&x))
                .sum();
            let u = if d == 3 { kirchhoff_3d(&mix, &x, t, 1e-10) } else { poisson_2d(&mix, &x, t, 1e-10) }.unwrap();
            formula_err = formula_err.max((u - closed).abs());
            // t* for the top level alone, and for the mix: only lower levels remain
            let top = &mix.parts().last().unwrap().eigen;
            let t_star = 2.0 * PI / top.lambda().sqrt();
            let single =
                if d == 3 { kirchhoff_3d(top, &x, t_star, 1e-10) } else { poisson_2d(top, &x, t_star, 1e-10) }.unwrap();
            star = star.max(single.abs());
            let lower = EigenMix::new(d, mix.parts()[..mix.parts().len() - 1].to_vec());
            let rest = lower.map(|m| duhamel_closed_form(&m, &x, t_star)).unwrap_or(0.0);
            star = star.max((duhamel_closed_form(&mix, &x, t_star) - rest).abs());
            pde = pde.max(wave_pde_residual_mix(&mix, &x, t)).max(wave_pde_residual(top.lambda(), top, &x, t));
            // the factor (cos - 1)/λ solves the equation with source -φ
            let flipped = EigenMix::new(
                d,
                mix.parts().iter().map(|p| MixPart { coef: -p.coef, eigen: p.eigen.clone() }).collect(),
            )
            .unwrap();
            literal_pde = literal_pde.max((u + duhamel_closed_form(&flipped, &x, t)).abs());
        }
    }
    let ok = formula_err <= 1e-5 && star <= 1e-5 && pde <= 1e-4;
    (
        ok,
        format!(
            "10 mixes each for d = 3, 2: formula vs Σ a_k (1-cos(√λ_k t))/λ_k φ_k {formula_err:.1e}, |u(t*)| {star:.1e}, PDE residual {pde:.1e}; \
             sign taken from u_tt - Δu = f (the printed (cos-1)/λ form is its negative, consistency {literal_pde:.1e})"
        ),
    )
}

fn c12_eigen_mix_radius() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(12);
    let (mut fails, mut worst) = (0, 0.0f64);
    for i in 0..50 {
        let d = 2 + i % 2;
        let mix = random::eigen_mix(&mut rng, d, 3, (1.0, 100.0)).unwrap();
        let bound = 2.0 * PI * mix.lambdas().iter().map(|l| l.powf(-0.5)).sum::<f64>();
        let res = if d == 2 { 256 } else { 96 };
        let dom = SearchDomain::cube(vec![0.0; d], vec![2.0 * bound; d], res).unwrap();
        let (pass, rep) = verify_bound(&mix, &dom, bound).unwrap();
        if !pass {
            fails += 1;
        }
        worst = worst.max(rep.r_lower / bound);
    }
    (fails == 0, format!("50 instances, violations {fails}, max ratio {worst:.3}"))
}

fn c13_sharpness() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for &(a, b) in &[(5u32, 0u32), (5, 1), (3, 2)] {
        let r = sharpness_probe_seeded(a, b, 20, 13).unwrap();
        let ceiling = (b as f64 + 1.0) / (2.0 * a as f64 + b as f64);
        ok &= r.best <= ceiling + 1.0 / 4096.0 && r.best >= 0.5 * ceiling;
        notes.push(format!("({a},{b}): {:.6} of {:.6}", r.best, ceiling));
    }
    (ok, notes.join(", "))
}

fn c14_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_nodal-radius");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bodies = Vec::new();
    for dir in &dirs {
        let status = std::process::Command::new(exe)
            .args(["--cmd", "suite", "--seed", "14", "--trials", "3", "--resolution", "48", "--out"])
            .arg(dir.path())
            .output()
            .unwrap()
            .status;
        let read = |name: &str| {
            let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
            text.lines().skip(1).collect::<Vec<_>>().join("\n")
        };
        bodies.push((status.code(), read("report.csv"), read("residuals.csv")));
    }
    let same = bodies[0] == bodies[1];
    let rows = bodies[0].1.lines().count() + bodies[0].2.lines().count();
    (same && bodies[0].0 == Some(0), format!("two suite runs, seed 14: {rows} CSV lines, identical bodies: {same}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 14] = [
        ("Bessel zero sweep d = 2..64", c1_bessel_zero_sweep),
        ("Coulomb identity, n = 3", c2_identity_n3),
        ("Coulomb identity, n = 4, 5, 6", c3_identity_general),
        ("zero balance", c4_zero_balance),
        ("radial ODE", c5_ode),
        ("top-shell annihilation", c6_top_shell),
        ("torus sign-change radius", c7_torus_radius),
        ("Funk-Hecke fidelity", c8_funk_hecke),
        ("annihilator bump", c9_annihilator),
        ("sphere sign-change radius", c10_sphere_radius),
        ("wave formulas", c11_wave),
        ("Euclidean sign-change radius", c12_eigen_mix_radius),
        ("sharpness probe", c13_sharpness),
        ("suite determinism", c14_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !ok {
            failed += 1;
        }
        println!("{} {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
