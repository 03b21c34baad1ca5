//! Browser bindings. Each entry point takes an expression and returns a JSON
//! string; the plain functions are also callable natively for testing.

use lojbound::bounds::{bracket, BoundConfig};
use lojbound::dualfan::fan_vertices_of;
use lojbound::newton::build_polyhedron;
use lojbound::report;
use lojbound::{parse, MixedFunction};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Sampler budget kept small so the page stays responsive.
const DEMO_CURVES: usize = 400;
const DEMO_STARTS: usize = 24;

fn function(expr: &str) -> Result<MixedFunction, String> {
    parse(expr, None).map_err(|e| e.to_string())
}

fn config(seed: u64) -> BoundConfig {
    let mut cfg = BoundConfig::with_seed(seed);
    cfg.sampler.curves = DEMO_CURVES;
    cfg.nondeg.starts = DEMO_STARTS;
    cfg
}

/// Upper bound and sampled lower bound; refused bounds come back as an `error` object.
pub fn bracket_report(expr: &str, seed: u64) -> Result<String, String> {
    let f = function(expr)?;
    let value = match bracket(&f, &config(seed)) {
        Ok(r) => json!({"text": report::bound_text(&r), "report": report::bound_json(&r)}),
        Err(e) => report::error_json(&e),
    };
    Ok(value.to_string())
}

/// Newton polyhedron, fan vertices and, for two variables, the boundary edges to draw.
pub fn diagram_report(expr: &str) -> Result<String, String> {
    let f = function(expr)?;
    let poly = build_polyhedron(&f).map_err(|e| e.to_string())?;
    let fan = fan_vertices_of(&f, &poly).map_or_else(|e| report::error_json(&e), |v| report::fan_json(&f, &v));
    let coords = poly.coords();
    let edges: Vec<Value> = poly
        .compact_faces()
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| c.dim == 1)
        .map(|c| {
            let pts: Vec<&Vec<u32>> = c.indices.iter().map(|&i| &coords[i]).collect();
            let lo = pts.iter().min().expect("edge has points");
            let hi = pts.iter().max().expect("edge has points");
            json!([lo, hi])
        })
        .collect();
    let vertices: Vec<&Vec<u32>> = poly.vertices().map_err(|e| e.to_string())?.into_iter().map(|i| &coords[i]).collect();
    Ok(json!({
        "function": f.to_string(),
        "newton": report::newton_json(&poly),
        "vertices": vertices,
        "edges": edges,
        "fan": fan,
    })
    .to_string())
}

/// Face and Łojasiewicz non-degeneracy verdicts.
pub fn check_report(expr: &str, seed: u64) -> Result<String, String> {
    let f = function(expr)?;
    let verdicts = report::check_verdicts(&f, &config(seed));
    Ok(json!({"text": report::verdicts_text(&verdicts), "report": report::verdicts_json(&verdicts)}).to_string())
}

#[wasm_bindgen]
pub fn bound(expr: &str, seed: u32) -> Result<String, JsValue> {
    bracket_report(expr, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn diagram(expr: &str) -> Result<String, JsValue> {
    diagram_report(expr).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check(expr: &str, seed: u32) -> Result<String, JsValue> {
    check_report(expr, seed.into()).map_err(|e| JsValue::from_str(&e))
}
