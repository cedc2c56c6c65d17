//! WebAssembly bindings for the static demo page in `www/`.
//!
//! The `*_impl` functions are plain Rust so they can be tested natively; the
//! exported wrappers turn their errors into JavaScript exceptions.

use std::fmt::Write;

use dilution_core::geometry::{CheckType, Orientation};
use dilution_core::noise::{sample_prior, trial_rng};
use dilution_core::oracle::cavity_discrepancy_closed;
use dilution_core::{
    classify_residual, prior_of, sparsify, syndrome, xz_coupling, Decoder, DecoderConfig,
    NoiseKind, NoiseModel, PatternFamily, PauliConfig, SparsificationPattern, SurfaceCode,
    Syndrome,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

const UNIT: f64 = 22.0;
const PAD: f64 = 26.0;

fn js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

fn pos(i: usize, j: usize) -> (f64, f64) {
    (PAD + j as f64 * UNIT, PAD + i as f64 * UNIT)
}

/// Endpoints of a qubit drawn as an edge of the Z-lattice (between the two
/// Z-checks it touches, or one check and the boundary).
fn qubit_segment(code: &SurfaceCode, q: usize) -> ((f64, f64), (f64, f64)) {
    let qb = code.qubits[q];
    let (i, j) = qb.doubled();
    let (i, j) = (i as f64, j as f64);
    let (a, b) = match qb.orientation {
        Orientation::Horizontal => ((i, j - 1.0), (i, j + 1.0)),
        Orientation::Vertical => ((i - 1.0, j), (i + 1.0, j)),
    };
    let p = |(x, y): (f64, f64)| (PAD + y * UNIT, PAD + x * UNIT);
    (p(a), p(b))
}

struct Overlay<'a> {
    error: Option<&'a PauliConfig>,
    estimate: Option<&'a PauliConfig>,
    syndrome: Option<&'a Syndrome>,
}

fn svg(code: &SurfaceCode, active: &[bool], overlay: &Overlay) -> String {
    let d = code.d as f64;
    let size = 2.0 * PAD + (2.0 * d - 2.0) * UNIT;
    let mut s = String::new();
    write!(s, r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" width="{size}" height="{size}">"##).unwrap();
    for q in 0..code.n {
        let ((x1, y1), (x2, y2)) = qubit_segment(code, q);
        let style = if active[q] {
            r##"stroke="#444" stroke-width="3""##
        } else {
            r##"stroke="#ccc" stroke-width="1.5" stroke-dasharray="3 3""##
        };
        write!(s, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}><title>qubit {q}</title></line>"##).unwrap();
    }
    if let Some(est) = overlay.estimate {
        for q in (0..code.n).filter(|&q| est.x[q] || est.z[q]) {
            let ((x1, y1), (x2, y2)) = qubit_segment(code, q);
            write!(s, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#2a9d8f" stroke-width="9" stroke-opacity="0.45"/>"##).unwrap();
        }
    }
    if let Some(err) = overlay.error {
        for q in 0..code.n {
            let color = match (err.x[q], err.z[q]) {
                (true, false) => "#d62828",
                (false, true) => "#1d4ed8",
                (true, true) => "#7b2cbf",
                (false, false) => continue,
            };
            let ((x1, y1), (x2, y2)) = qubit_segment(code, q);
            let (cx, cy) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            write!(
                s,
                r##"<circle cx="{cx}" cy="{cy}" r="4.5" fill="{color}"/>"##
            )
            .unwrap();
        }
    }
    for (ty, lit) in [
        (CheckType::Z, overlay.syndrome.map(|x| &x.z_checks)),
        (CheckType::X, overlay.syndrome.map(|x| &x.x_checks)),
    ] {
        for a in 0..code.num_checks(ty) {
            let (i, j) = code.check_doubled(ty, a);
            let (x, y) = pos(i, j);
            let on = lit.is_some_and(|v| v[a]);
            match ty {
                CheckType::Z => {
                    let fill = if on { "#f4a261" } else { "#fff" };
                    write!(s, r##"<circle cx="{x}" cy="{y}" r="5" fill="{fill}" stroke="#444"><title>Z-check {a}</title></circle>"##).unwrap();
                }
                CheckType::X => {
                    let fill = if on { "#f4a261" } else { "none" };
                    let stroke = if on { "#444" } else { "#bbb" };
                    write!(s, r##"<rect x="{}" y="{}" width="7" height="7" fill="{fill}" stroke="{stroke}"><title>X-check {a}</title></rect>"##, x - 3.5, y - 3.5).unwrap();
                }
            }
        }
    }
    s.push_str("</svg>");
    s
}

fn setup(
    d: usize,
    pattern: &str,
    s: usize,
) -> Result<(SurfaceCode, PatternFamily, Vec<bool>), String> {
    let code = SurfaceCode::new(d).map_err(|e| e.to_string())?;
    let family: PatternFamily = pattern
        .parse()
        .map_err(|e: dilution_core::Error| e.to_string())?;
    let graph =
        sparsify(&code, SparsificationPattern::new(family, s)).map_err(|e| e.to_string())?;
    Ok((code, family, graph.active))
}

pub fn render_lattice_impl(d: usize, pattern: &str, s: usize) -> Result<String, String> {
    let (code, _, active) = setup(d, pattern, s)?;
    Ok(svg(
        &code,
        &active,
        &Overlay {
            error: None,
            estimate: None,
            syndrome: None,
        },
    ))
}

/// SVG of the distance-`d` lattice after `s`-sparsification with `pattern`
/// (`dv`, `dh`, `cv`, `ch`). Removed qubits are dashed.
#[wasm_bindgen]
pub fn render_lattice(d: usize, pattern: &str, s: usize) -> Result<String, JsValue> {
    render_lattice_impl(d, pattern, s).map_err(js)
}

pub fn decode_demo_impl(
    d: usize,
    noise: &str,
    p: f64,
    pattern: &str,
    seed: u64,
) -> Result<String, String> {
    let kind: NoiseKind = noise
        .parse()
        .map_err(|e: dilution_core::Error| e.to_string())?;
    let (code, family, _) = setup(d, pattern, 0)?;
    let model = NoiseModel::new(kind, p).map_err(|e| e.to_string())?;
    let prior = prior_of(&model).map_err(|e| e.to_string())?;
    let e = sample_prior(&prior, code.n, &mut trial_rng(seed, 0));
    let syn = syndrome(&code, &e).map_err(|e| e.to_string())?;
    let decoder =
        Decoder::with_family(&code, family, DecoderConfig::default()).map_err(|e| e.to_string())?;
    let out = decoder.decode(&syn, &prior).map_err(|e| e.to_string())?;
    let residual = out.estimate.apply(&e).map_err(|e| e.to_string())?;
    let class = if out.converged {
        Some(classify_residual(&code, &residual).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let verdict = match class {
        None => "not converged",
        Some(c) if c.is_logical_error() => "logical error",
        Some(_) => "corrected",
    };
    let full = vec![true; code.n];
    let picture = svg(
        &code,
        &full,
        &Overlay {
            error: Some(&e),
            estimate: Some(&out.estimate),
            syndrome: Some(&syn),
        },
    );
    Ok(json!({
        "svg": picture,
        "error_weight": e.weight(),
        "syndrome_weight": syn.weight(),
        "estimate_weight": out.estimate.weight(),
        "converged": out.converged,
        "verdict": verdict,
        "stage_of_convergence": out.stage_of_convergence,
        "total_iterations": out.total_iterations,
        "per_stage_iterations": out.per_stage_iterations,
        "pattern": family.name(),
    })
    .to_string())
}

/// Sample one error, decode it with the staged decoder and return JSON with
/// an SVG overlay (errors as dots, estimate as shaded edges, lit checks filled).
#[wasm_bindgen]
pub fn decode_demo(
    d: usize,
    noise: &str,
    p: f64,
    pattern: &str,
    seed: u64,
) -> Result<String, JsValue> {
    decode_demo_impl(d, noise, p, pattern, seed).map_err(js)
}

pub fn cavity_curve_impl(p_max: f64, steps: usize) -> Result<String, String> {
    if !(p_max > 0.0 && p_max <= 1.0) || steps == 0 {
        return Err("need 0 < p_max <= 1 and at least one step".into());
    }
    let mut points = Vec::with_capacity(steps + 1);
    for i in 1..=steps {
        let p = p_max * i as f64 / steps as f64;
        let prior = prior_of(&NoiseModel::depolarizing(p).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let kappa = xz_coupling(&prior);
        let d0 = cavity_discrepancy_closed(&prior, false).map_err(|e| e.to_string())?;
        let d1 = cavity_discrepancy_closed(&prior, true).map_err(|e| e.to_string())?;
        points.push(json!({ "p": p, "kappa": kappa, "delta0": d0, "delta1": d1 }));
    }
    Ok(serde_json::Value::Array(points).to_string())
}

/// Coupling and cavity discrepancy (both syndrome values) along the
/// depolarizing line `p in (0, p_max]`, as a JSON array.
#[wasm_bindgen]
pub fn cavity_curve(p_max: f64, steps: usize) -> Result<String, JsValue> {
    cavity_curve_impl(p_max, steps).map_err(js)
}
