//! Static sign-pattern plots: positive samples red, negative blue.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write;
use std::path::Path;

use super::output::write_file;
use super::CliError;
use crate::signsearch::Evaluable;
use crate::sphere::SphereFn;
use crate::torus::TrigPoly;

const POS: &str = "#c0392b";
const NEG: &str = "#2e6da4";
const RASTER: usize = 128;

fn colour(v: f64) -> &'static str {
    if v >= 0.0 {
        POS
    } else {
        NEG
    }
}

fn open(w: usize, h: usize) -> String {
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n")
}

/// Sign trace on T¹ or a sign raster on T²; other dimensions are skipped.
pub(super) fn torus(path: &Path, f: &TrigPoly) -> Result<(), CliError> {
    match f.dim() {
        1 => trace(path, |x| f.eval(&[x])),
        2 => raster(path, |x, y| f.eval(&[x, y])),
        _ => Ok(()),
    }
}

/// Sign raster of a planar function over [0, side]².
pub(super) fn plane<E: Evaluable + ?Sized>(path: &Path, f: &E, side: f64) -> Result<(), CliError> {
    raster(path, |x, y| f.value(&[x * side, y * side]))
}

fn trace(path: &Path, f: impl Fn(f64) -> f64) -> Result<(), CliError> {
    let (w, h) = (800usize, 200usize);
    let n = 2000;
    let ys: Vec<f64> = (0..=n).map(|i| f(i as f64 / n as f64)).collect();
    let peak = ys.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut s = open(w, h);
    let mid = h as f64 / 2.0;
    let _ = writeln!(s, "<line x1=\"0\" y1=\"{mid}\" x2=\"{w}\" y2=\"{mid}\" stroke=\"#999\"/>");
    for (i, pair) in ys.windows(2).enumerate() {
        let x0 = i as f64 * w as f64 / n as f64;
        let x1 = (i + 1) as f64 * w as f64 / n as f64;
        let y0 = mid - 0.45 * h as f64 * pair[0] / peak;
        let y1 = mid - 0.45 * h as f64 * pair[1] / peak;
        let _ = writeln!(
            s,
            "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y1:.2}\" stroke=\"{}\"/>",
            colour(pair[0] + pair[1])
        );
    }
    s.push_str("</svg>\n");
    write_file(path, s.as_bytes())
}

fn raster(path: &Path, f: impl Fn(f64, f64) -> f64) -> Result<(), CliError> {
    let n = RASTER;
    let mut s = open(4 * n, 4 * n);
    for j in 0..n {
        for i in 0..n {
            let v = f((i as f64 + 0.5) / n as f64, 1.0 - (j as f64 + 0.5) / n as f64);
            let _ =
                writeln!(s, "<rect x=\"{}\" y=\"{}\" width=\"4\" height=\"4\" fill=\"{}\"/>", 4 * i, 4 * j, colour(v));
        }
    }
    s.push_str("</svg>\n");
    write_file(path, s.as_bytes())
}

/// Sign raster of a function on S² in the Mollweide projection.
pub(super) fn mollweide(path: &Path, f: &SphereFn) -> Result<(), CliError> {
    if f.dim() != 3 {
        return Ok(());
    }
    let (cols, rows) = (2 * RASTER, RASTER);
    let mut s = open(3 * cols, 3 * rows);
    for j in 0..rows {
        for i in 0..cols {
            // projection plane: x ∈ [-2√2, 2√2], y ∈ [-√2, √2]
            let x = (2.0 * (i as f64 + 0.5) / cols as f64 - 1.0) * 2.0 * SQRT_2;
            let y = (1.0 - 2.0 * (j as f64 + 0.5) / rows as f64) * SQRT_2;
            let theta = (y / SQRT_2).asin();
            let lon = PI * x / (2.0 * SQRT_2 * theta.cos());
            if lon.abs() > PI {
                continue;
            }
            let lat = ((2.0 * theta + (2.0 * theta).sin()) / PI).clamp(-1.0, 1.0).asin();
            let p = [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()];
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"3\" height=\"3\" fill=\"{}\"/>",
                3 * i,
                3 * j,
                colour(f.value(&p))
            );
        }
    }
    s.push_str("</svg>\n");
    write_file(path, s.as_bytes())
}
