use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::de::DeserializeOwned;

use super::output::{Check, Report, SignRow};
use super::{svg, CliError, Command, RunConfig, Tolerances};
use crate::eigenid::{
    coulomb_ball_integral, duhamel_closed_form, kirchhoff_3d, ode_residual_r, poisson_2d, verify_identity,
    wave_pde_residual, wave_pde_residual_mix, EigenMix, IdentityCase, PlaneWaveEigen, Source,
};
use crate::error::Error;
use crate::random::{self, TrigSpec};
use crate::signsearch::{largest_signfree_ball, sharpness_probe_seeded, Evaluable, SearchDomain, SignBallReport};
use crate::sphere::SphereFn;
use crate::torus::TrigPoly;

/// Runs one command and writes its reports into `config.out`.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let mut report = Report { command: config.command.name().to_string(), seed: config.seed, ..Report::default() };
    let tol = &config.tolerances;
    match config.command {
        Command::AnalyzeTrig => {
            let polys: Vec<TrigPoly> = load(config)?;
            for (i, f) in polys.iter().enumerate() {
                let res = config.resolution.unwrap_or(default_resolution(f.dim()));
                let rows = trig_rows(&format!("trig-{i}"), f, res);
                collect(&mut report, format!("trig-{i}"), rows)?;
                if config.svg {
                    svg::torus(&config.out.join(format!("trig-{i}.svg")), f)?;
                }
            }
        }
        Command::AnalyzeSphere => {
            let fns: Vec<SphereFn> = load(config)?;
            for (i, f) in fns.iter().enumerate() {
                let rows = sphere_rows(&format!("sphere-{i}"), f, config.resolution.unwrap_or(64));
                collect(&mut report, format!("sphere-{i}"), rows)?;
                if config.svg {
                    svg::mollweide(&config.out.join(format!("sphere-{i}.svg")), f)?;
                }
            }
        }
        Command::AnalyzeMix => {
            let mixes: Vec<EigenMix> = load(config)?;
            for (i, m) in mixes.iter().enumerate() {
                let case = format!("mix-{i}");
                let res = config.resolution.unwrap_or(default_resolution(m.dim()));
                let rows = mix_rows(&case, m, res);
                collect(&mut report, case.clone(), rows)?;
                let checks = wave_checks(&case, m, &vec![0.0; m.dim()], 1.0, tol);
                collect_checks(&mut report, case, checks)?;
                if config.svg && m.dim() == 2 {
                    svg::plane(&config.out.join(format!("mix-{i}.svg")), m, 2.0 * crate::eigenid::bound_theorem3(m))?;
                }
            }
        }
        Command::VerifyIdentity => {
            let cases: Vec<IdentityCase> = load(config)?;
            for (i, c) in cases.iter().enumerate() {
                let case = format!("identity-{i}");
                let check = identity_check(&case, c, tol).map(|c| vec![c]);
                collect_checks(&mut report, case, check)?;
            }
        }
        Command::Sharpness => {
            sharpness(&mut report, &[(config.a, config.b)], config.trials, config.seed, tol)?;
        }
        Command::Suite => suite(&mut report, config)?,
    }
    report.write(&config.out)?;
    Ok(report)
}

fn default_resolution(dim: usize) -> usize {
    if dim <= 2 {
        256
    } else {
        96
    }
}

/// Reads one JSON object or an array of them; errors name the field path.
fn load<T: DeserializeOwned>(config: &RunConfig) -> Result<Vec<T>, CliError> {
    let path = config
        .input
        .as_deref()
        .ok_or_else(|| CliError::Parse(format!("--input: required for {}", config.command.name())))?;
    parse_instances(path)
}

pub(super) fn parse_instances<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("--input: {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: malformed JSON: {e}", path.display())))?;
    let one = |v: serde_json::Value, prefix: String| -> Result<T, CliError> {
        serde_path_to_error::deserialize(v).map_err(|e| {
            let field = e.path().to_string();
            let field = match (prefix.is_empty(), field.as_str()) {
                (true, ".") => "(root)".to_string(),
                (true, _) => field,
                (false, ".") => prefix,
                (false, _) => format!("{prefix}.{field}"),
            };
            CliError::Parse(format!("{}: field {field}: {}", path.display(), e.inner()))
        })
    };
    match value {
        serde_json::Value::Array(items) => {
            items.into_iter().enumerate().map(|(i, v)| one(v, format!("[{i}]"))).collect()
        }
        v => Ok(vec![one(v, String::new())?]),
    }
}

/// Accuracy errors are reported and the run continues; any other library
/// error means the instance itself is unusable.
fn collect(report: &mut Report, case: String, rows: crate::Result<Vec<SignRow>>) -> Result<(), CliError> {
    match rows {
        Ok(rows) => {
            report.sign_balls.extend(rows);
            Ok(())
        }
        Err(e) => absorb(report, case, e),
    }
}

fn collect_checks(report: &mut Report, case: String, checks: crate::Result<Vec<Check>>) -> Result<(), CliError> {
    match checks {
        Ok(c) => {
            report.checks.extend(c);
            Ok(())
        }
        Err(e) => absorb(report, case, e),
    }
}

fn absorb(report: &mut Report, case: String, e: Error) -> Result<(), CliError> {
    match e {
        Error::Accuracy { .. } => {
            report.accuracy_errors.push(format!("{case}: {e}"));
            Ok(())
        }
        e => Err(CliError::Parse(format!("{case}: {e}"))),
    }
}

fn row(case: &str, domain: &str, bound_name: &str, measured: &SignBallReport, bound: f64) -> SignRow {
    let mut report = measured.clone();
    report.bound = Some(bound);
    report.ratio = Some(report.r_lower / bound);
    SignRow {
        case: case.to_string(),
        domain: domain.to_string(),
        bound_name: bound_name.to_string(),
        pass: Some(report.r_lower <= bound),
        report,
    }
}

fn trig_rows(case: &str, f: &TrigPoly, res: usize) -> crate::Result<Vec<SignRow>> {
    let m = largest_signfree_ball(f, &SearchDomain::torus(f.dim(), res)?)?;
    Ok(vec![row(case, "torus", "theorem1", &m, f.bound_theorem1()), row(case, "torus", "kozma", &m, f.bound_kozma())])
}

/// Ratio of the sign-free radius of a single-shell eigenfunction to
/// 100·d·λ^{-1/2} with λ = 4π²‖k‖². Whether this ratio stays below one is
/// open, so the row carries no verdict.
fn root_radius_rows(case: &str, f: &TrigPoly, res: usize) -> crate::Result<Vec<SignRow>> {
    let m = largest_signfree_ball(f, &SearchDomain::torus(f.dim(), res)?)?;
    let norm = f.shells().top().expect("a TrigPoly always has a shell");
    let bound = 100.0 * f.dim() as f64 / (2.0 * PI * norm);
    let mut r = row(case, "torus", "root_radius", &m, bound);
    r.pass = None;
    Ok(vec![r])
}

fn sphere_rows(case: &str, f: &SphereFn, res: usize) -> crate::Result<Vec<SignRow>> {
    let m = largest_signfree_ball(f, &SearchDomain::sphere(f.dim(), res)?)?;
    Ok(vec![row(case, "sphere", "theorem2", &m, f.bound_theorem2())])
}

fn mix_rows(case: &str, mix: &EigenMix, res: usize) -> crate::Result<Vec<SignRow>> {
    let bound = crate::eigenid::bound_theorem3(mix);
    let d = mix.dim();
    let dom = SearchDomain::cube(vec![0.0; d], vec![2.0 * bound; d], res)?;
    let m = largest_signfree_ball(mix, &dom)?;
    Ok(vec![row(case, "box", "theorem3", &m, bound)])
}

fn check(case: &str, name: &str, n: usize, lambda: Option<f64>, param: Option<f64>, value: f64, limit: f64) -> Check {
    Check { case: case.to_string(), check: name.to_string(), n: Some(n), lambda, param, value, limit, floor: false }
}

fn identity_check(case: &str, c: &IdentityCase, tol: &Tolerances) -> crate::Result<Check> {
    let n = c.phi.dim();
    let residual = verify_identity(&c.phi, &c.x, c.r, tol.get("quad"))?;
    let limit = if n == 3 { tol.get("identity") } else { tol.get("identity_general") };
    Ok(check(case, "identity", n, Some(c.phi.lambda()), Some(c.r), residual, limit))
}

/// Retarded-potential formula against the closed form at (x, t), the wave
/// equation residual of the closed form, and, for the top level alone, the
/// vanishing at t* = 2π/√λ.
fn wave_checks(case: &str, mix: &EigenMix, x: &[f64], t: f64, tol: &Tolerances) -> crate::Result<Vec<Check>> {
    let d = mix.dim();
    let formula = |src: &dyn Source, t: f64| -> crate::Result<f64> {
        match d {
            3 => kirchhoff_3d(src, x, t, tol.get("quad")),
            2 => poisson_2d(src, x, t, tol.get("quad")),
            _ => Ok(f64::NAN),
        }
    };
    let mut out = Vec::new();
    if d == 2 || d == 3 {
        let name = if d == 3 { "kirchhoff" } else { "poisson" };
        let u = formula(mix, t)?;
        let scale = 1.0 + duhamel_closed_form(mix, x, t).abs();
        out.push(check(
            case,
            name,
            d,
            None,
            Some(t),
            (u - duhamel_closed_form(mix, x, t)).abs() / scale,
            tol.get("wave"),
        ));
        let top = &mix.parts().last().expect("mixes are nonempty").eigen;
        let t_star = 2.0 * PI / top.lambda().sqrt();
        let u_star = formula(top, t_star)?;
        out.push(check(
            case,
            &format!("{name}_t_star"),
            d,
            Some(top.lambda()),
            Some(t_star),
            u_star.abs(),
            tol.get("wave"),
        ));
        out.push(check(
            case,
            "wave_pde_top",
            d,
            Some(top.lambda()),
            Some(t),
            wave_pde_residual(top.lambda(), top, x, t),
            tol.get("pde"),
        ));
    }
    out.push(check(case, "wave_pde", d, None, Some(t), wave_pde_residual_mix(mix, x, t), tol.get("pde")));
    Ok(out)
}

fn sharpness(
    report: &mut Report,
    pairs: &[(u32, u32)],
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<(), CliError> {
    for &(a, b) in pairs {
        let case = format!("sharpness-{a}-{b}");
        let r = sharpness_probe_seeded(a, b, trials, seed).map_err(|e| CliError::Parse(format!("--a/--b: {e}")))?;
        let mut ceiling =
            check(&case, "sharpness_ceiling", 1, None, Some(r.ceiling), r.best, r.ceiling + tol.get("sharpness"));
        ceiling.n = None;
        let mut floor = check(&case, "sharpness_floor", 1, None, Some(r.ceiling), r.best, 0.5 * r.ceiling);
        floor.n = None;
        floor.floor = true;
        report.checks.push(ceiling);
        report.checks.push(floor);
        report.sharpness.push(r);
    }
    Ok(())
}

/// A point on a random line through `x0` where φ vanishes.
fn zero_of<S: Source>(phi: &S, x0: &[f64], dir: &[f64], step: f64) -> Option<Vec<f64>> {
    let at = |s: f64| -> Vec<f64> { x0.iter().zip(dir).map(|(a, b)| a + s * b).collect() };
    let f = |s: f64| phi.eval(&at(s));
    let mut lo = 0.0;
    let f0 = f(lo);
    for i in 1..400 {
        let hi = i as f64 * step;
        if f(hi).signum() != f0.signum() {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m == a || m == b {
                    break;
                }
                if f(m).signum() == f0.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            let s = if f(a).abs() < f(b).abs() { a } else { b };
            return Some(at(s));
        }
        lo = hi;
    }
    None
}

fn random_point(rng: &mut Pcg64, d: usize, half: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-half..half)).collect()
}

/// Fourier coefficient at k of the sampled values on the grid {i/res}^d.
fn grid_coefficient(values: &[f64], res: usize, d: usize, k: &[i64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (idx, v) in values.iter().enumerate() {
        let mut rest = idx;
        let mut phase = 0i64;
        for axis in (0..d).rev() {
            phase += k[axis] * (rest % res) as i64;
            rest /= res;
        }
        let angle = -2.0 * PI * (phase.rem_euclid(res as i64)) as f64 / res as f64;
        sum += v * Complex64::from_polar(1.0, angle);
    }
    sum / values.len() as f64
}

enum Job {
    Trig(TrigPoly),
    Eigen(TrigPoly),
    Smooth(TrigPoly),
    Sphere(SphereFn),
    Mix(EigenMix),
    Identity3(IdentityCase),
    Identity(IdentityCase),
    ZeroBalance(PlaneWaveEigen, Vec<f64>, [f64; 3]),
    Ode(PlaneWaveEigen, Vec<f64>, f64),
    Wave(EigenMix, Vec<f64>, f64),
}

enum Outcome {
    Rows(Vec<SignRow>),
    Checks(Vec<Check>),
}

/// Draws every instance from one seeded generator, evaluates them in
/// parallel and merges the results in draw order.
fn suite(report: &mut Report, config: &RunConfig) -> Result<(), CliError> {
    let t = config.trials;
    let tol = &config.tolerances;
    let mut rng = Pcg64::seed_from_u64(config.seed);
    let rng = &mut rng;
    let gen = |e: Error| CliError::Parse(format!("generator: {e}"));
    let mut jobs: Vec<(String, Job)> = Vec::new();
    for d in 1..=3 {
        for i in 0..t {
            jobs.push((format!("trig-d{d}-{i}"), Job::Trig(random::trig_poly(rng, &TrigSpec::new(d)).map_err(gen)?)));
        }
        for i in 0..t {
            let spec = TrigSpec { max_shells: 1, terms_per_shell: 4, ..TrigSpec::new(d) };
            jobs.push((format!("eigen-d{d}-{i}"), Job::Eigen(random::trig_poly(rng, &spec).map_err(gen)?)));
        }
        for i in 0..t {
            let f = random::trig_poly(rng, &TrigSpec::new(d).smoothable()).map_err(gen)?;
            jobs.push((format!("smooth-d{d}-{i}"), Job::Smooth(f)));
        }
    }
    for i in 0..t {
        jobs.push((format!("sphere-{i}"), Job::Sphere(random::sphere_fn(rng, 3, 12, 3).map_err(gen)?)));
    }
    for d in 2..=3 {
        for i in 0..t {
            jobs.push((format!("mix-d{d}-{i}"), Job::Mix(random::eigen_mix(rng, d, 3, (1.0, 100.0)).map_err(gen)?)));
        }
    }
    for i in 0..t {
        let lambda = rng.gen_range(0.5..50.0);
        let waves = rng.gen_range(1..=3);
        let phi = random::plane_wave(rng, 3, lambda, waves).map_err(gen)?;
        let r = rng.gen_range(0.1..4.0 * PI) / lambda.sqrt();
        let x = random_point(rng, 3, 2.0);
        jobs.push((format!("identity-n3-{i}"), Job::Identity3(IdentityCase { phi, x, r })));
    }
    for n in 4..=6 {
        for i in 0..t {
            let lambda = rng.gen_range(0.5..20.0);
            let waves = rng.gen_range(1..=3);
            let phi = random::plane_wave(rng, n, lambda, waves).map_err(gen)?;
            let r = rng.gen_range(0.1..3.0 * PI) / lambda.sqrt();
            let x = random_point(rng, n, 2.0);
            jobs.push((format!("identity-n{n}-{i}"), Job::Identity(IdentityCase { phi, x, r })));
        }
    }
    for i in 0..t {
        let n = rng.gen_range(3..=5);
        let lambda = rng.gen_range(0.5..20.0);
        let waves = rng.gen_range(1..=3);
        let phi = random::plane_wave(rng, n, lambda, waves).map_err(gen)?;
        let x0 = random_point(rng, n, 2.0);
        let dir = random::plane_wave(rng, n, 1.0, 1).map_err(gen)?.waves()[0].k.clone();
        let radii = [0.3, 1.0, 2.5].map(|s| s / lambda.sqrt());
        if let Some(x) = zero_of(&phi, &x0, &dir, 0.05 / lambda.sqrt()) {
            jobs.push((format!("zero-balance-{i}"), Job::ZeroBalance(phi, x, radii)));
        }
    }
    for n in [4, 6] {
        for i in 0..t {
            let lambda = rng.gen_range(0.5..20.0);
            let waves = rng.gen_range(1..=3);
            let phi = random::plane_wave(rng, n, lambda, waves).map_err(gen)?;
            let r = rng.gen_range(0.2..3.0) / lambda.sqrt();
            let x = random_point(rng, n, 2.0);
            jobs.push((format!("ode-n{n}-{i}"), Job::Ode(phi, x, r)));
        }
    }
    for d in 2..=3 {
        for i in 0..t {
            let mix = random::eigen_mix(rng, d, 3, (0.5, 10.0)).map_err(gen)?;
            let x = random_point(rng, d, 1.0);
            let time = rng.gen_range(0.3..3.0);
            jobs.push((format!("wave-d{d}-{i}"), Job::Wave(mix, x, time)));
        }
    }

    let res = |d: usize| config.resolution.unwrap_or(default_resolution(d));
    let results: Vec<(String, crate::Result<Outcome>)> = jobs
        .into_par_iter()
        .map(|(case, job)| {
            let out = match &job {
                Job::Trig(f) => trig_rows(&case, f, res(f.dim())).map(Outcome::Rows),
                Job::Eigen(f) => root_radius_rows(&case, f, res(f.dim())).map(Outcome::Rows),
                Job::Smooth(f) => smoothing_checks(&case, f).map(Outcome::Checks),
                Job::Sphere(f) => sphere_rows(&case, f, config.resolution.unwrap_or(64)).map(Outcome::Rows),
                Job::Mix(m) => mix_rows(&case, m, res(m.dim())).map(Outcome::Rows),
                Job::Identity3(c) => identity3_check(&case, c, tol).map(|c| Outcome::Checks(vec![c])),
                Job::Identity(c) => identity_check(&case, c, tol).map(|c| Outcome::Checks(vec![c])),
                Job::ZeroBalance(phi, x, radii) => radii
                    .iter()
                    .map(|&r| {
                        let v = coulomb_ball_integral(phi, x, r, tol.get("quad"))?;
                        Ok(check(
                            &case,
                            "zero_balance",
                            phi.dim(),
                            Some(phi.lambda()),
                            Some(r),
                            v.abs(),
                            tol.get("zero_balance"),
                        ))
                    })
                    .collect::<crate::Result<Vec<_>>>()
                    .map(Outcome::Checks),
                Job::Ode(phi, x, r) => ode_residual_r(phi.dim(), phi, x, *r).map(|o| {
                    Outcome::Checks(vec![check(
                        &case,
                        "ode",
                        phi.dim(),
                        Some(phi.lambda()),
                        Some(*r),
                        o.residual.abs(),
                        tol.get("ode") * o.scale,
                    )])
                }),
                Job::Wave(m, x, time) => wave_checks(&case, m, x, *time, tol).map(Outcome::Checks),
            };
            (case, out)
        })
        .collect();
    for (case, out) in results {
        match out {
            Ok(Outcome::Rows(r)) => report.sign_balls.extend(r),
            Ok(Outcome::Checks(c)) => report.checks.extend(c),
            Err(e) => absorb(report, case, e)?,
        }
    }
    sharpness(report, &[(5, 0), (5, 1), (3, 2)], t, config.seed, tol)
}

/// n = 3 identity against 4π(1 - cos(√λ r))/λ · φ(x), normalised by 1 + |φ(x)|.
fn identity3_check(case: &str, c: &IdentityCase, tol: &Tolerances) -> crate::Result<Check> {
    let lambda = c.phi.lambda();
    let integral = coulomb_ball_integral(&c.phi, &c.x, c.r, tol.get("quad"))?;
    let value = c.phi.eval(&c.x);
    let closed = 4.0 * PI * (1.0 - (lambda.sqrt() * c.r).cos()) / lambda * value;
    let residual = (integral - closed).abs() / (1.0 + value.abs());
    Ok(check(case, "identity_q3", 3, Some(lambda), Some(c.r), residual, tol.get("identity")))
}

/// Top-shell coefficients of the smoothed polynomial, extracted from grid
/// samples, and the drop in shell count.
fn smoothing_checks(case: &str, f: &TrigPoly) -> crate::Result<Vec<Check>> {
    let g = f.smooth_top_shell()?;
    let d = f.dim();
    let top_sq = *f.shells().norms_sq().last().expect("nonempty");
    let max_component = f.coeffs().flat_map(|(k, _)| k.0.iter().map(|c| c.unsigned_abs())).max().unwrap_or(1);
    let res = 2 * max_component as usize + 2;
    let values = g.torus_grid(res);
    let scale = f.l1_norm().max(1.0);
    let leak = f
        .coeffs()
        .filter(|(k, _)| k.norm_sq() == top_sq)
        .map(|(k, _)| grid_coefficient(&values, res, d, &k.0).norm())
        .fold(0.0, f64::max);
    let drop = f.shells().len() as f64 - g.shells().len() as f64;
    Ok(vec![
        check(case, "top_shell_leak", d, None, None, leak / scale, 1e-10),
        check(case, "shell_drop_error", d, None, None, (drop - 1.0).abs(), 0.0),
    ])
}
