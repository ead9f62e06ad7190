//! Browser bindings for the demo page. Each export takes plain numbers or
//! JSON text and returns JSON text; failures come back as `{"error": ...}`.

use boehmian::convolve::convolve_onto;
use boehmian::expr::Expr;
use boehmian::mollifier::{delta_sequence, infinite_convolution, standard_bump};
use boehmian::{GridFunction, OpenSet, TestFunction};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest number of samples a single call may produce.
pub const MAX_POINTS: usize = 4001;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Mollified {
    pub original: Curve,
    pub mollified: Curve,
    pub kernel: Curve,
    pub sup_error: f64,
}

#[derive(Debug, Serialize)]
pub struct Morphology {
    pub input: OpenSet,
    pub eroded: OpenSet,
    pub dilated: OpenSet,
    pub opening: OpenSet,
}

#[derive(Debug, Serialize)]
pub struct Truncations {
    pub radius: f64,
    pub terms: usize,
    pub partial: Vec<Curve>,
    pub limit: Curve,
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn sample_test(phi: &TestFunction, points: usize) -> Curve {
    let r = phi.radius();
    let x: Vec<f64> = (0..points).map(|i| -r + 2.0 * r * i as f64 / (points - 1) as f64).collect();
    let y = x.iter().map(|&t| phi.eval(t)).collect();
    Curve { x, y }
}

fn grid_curve(f: &GridFunction) -> Curve {
    let (x, y) = f.samples().unzip();
    Curve { x, y }
}

/// Samples `expr` on `(lo, hi)` with spacing `h`, convolves with the bump of
/// radius `eps` and returns both curves on `(lo + eps, hi - eps)`.
pub fn mollify_expr(expr_json: &str, lo: f64, hi: f64, h: f64, eps: f64) -> Result<Mollified, String> {
    let expr: Expr = serde_json::from_str(expr_json).map_err(err)?;
    if !(h > 0.0) || (hi - lo) / h > MAX_POINTS as f64 {
        return Err(format!("grid spacing {h} gives too many samples"));
    }
    let u = OpenSet::interval(lo, hi).map_err(err)?;
    let inner = u.erode(eps).map_err(err)?;
    if inner.is_empty() {
        return Err(format!("radius {eps} leaves no interior"));
    }
    let f = GridFunction::from_fn(&u, h, |x| expr.eval(x)).map_err(err)?;
    let phi = standard_bump(eps).map_err(err)?;
    let g = convolve_onto(&f, &phi, &inner).map_err(err)?;
    let sup_error = g
        .samples()
        .map(|(x, v)| (v - expr.eval(x)).abs())
        .fold(0.0, f64::max);
    Ok(Mollified {
        original: grid_curve(&f.restrict(&inner).map_err(err)?),
        mollified: grid_curve(&g),
        kernel: sample_test(&phi, 201),
        sup_error,
    })
}

/// Parses `[[lo, hi], ...]` and applies erosion, dilation and their
/// composite opening by `eps`.
pub fn morphology(intervals_json: &str, eps: f64) -> Result<Morphology, String> {
    let spans: Vec<[f64; 2]> = serde_json::from_str(intervals_json).map_err(err)?;
    let input = OpenSet::new(spans.iter().map(|s| (s[0], s[1]))).map_err(err)?;
    let eroded = input.erode(eps).map_err(err)?;
    let dilated = input.dilate(eps).map_err(err)?;
    let opening = if eroded.is_empty() {
        OpenSet::empty()
    } else {
        eroded.dilate(eps).map_err(err)?
    };
    Ok(Morphology {
        input,
        eroded,
        dilated,
        opening,
    })
}

/// Partial products `φ_1 ∗ … ∗ φ_k`, `k = 1..=shown`, of the schedule
/// `s1 · ratio^(n-1)`, together with the truncated infinite product.
pub fn truncations(s1: f64, ratio: f64, shown: usize, points: usize) -> Result<Truncations, String> {
    if !(2..=MAX_POINTS).contains(&points) || shown == 0 || shown > 12 {
        return Err("need 2..=4001 points and 1..=12 partial products".into());
    }
    let seq = delta_sequence(s1, ratio).map_err(err)?;
    let ic = infinite_convolution(&seq, 1e-9, 1e-7).map_err(err)?;
    let radius = ic.psi.radius();
    let x: Vec<f64> = (0..points).map(|i| -radius + 2.0 * radius * i as f64 / (points - 1) as f64).collect();
    let curve = |phi: &TestFunction| Curve {
        x: x.clone(),
        y: x.iter().map(|&t| phi.eval(t)).collect(),
    };
    let partial = (1..=shown)
        .map(|k| curve(&TestFunction::product((1..=k).map(|n| seq.get(n)).collect())))
        .collect();
    Ok(Truncations {
        radius,
        terms: ic.terms,
        partial,
        limit: curve(&ic.psi),
    })
}

#[wasm_bindgen]
pub fn mollify(expr_json: &str, lo: f64, hi: f64, h: f64, eps: f64) -> String {
    to_json(mollify_expr(expr_json, lo, hi, h, eps))
}

#[wasm_bindgen]
pub fn erode_dilate(intervals_json: &str, eps: f64) -> String {
    to_json(morphology(intervals_json, eps))
}

#[wasm_bindgen]
pub fn infinite_product(s1: f64, ratio: f64, shown: usize, points: usize) -> String {
    to_json(truncations(s1, ratio, shown, points))
}
