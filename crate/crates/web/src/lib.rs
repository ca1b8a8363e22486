//! Browser bindings: every export returns a JSON string the page renders.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use potequiv::algebra::{rat_frac, IntMatrix};
use potequiv::density::density_report;
use potequiv::frobenius::{cm_pair_table, table_verdicts};
use potequiv::powermap::{semisimple_noncollapse_demo, torus_collapse_demo};
use potequiv::torus::{decompose, invariant_order, LatticeAutomorphism};

/// Largest X the page may request; point counting is linear in p.
pub const MAX_X: u32 = 50_000;

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn rows<T: ToString>(rows: &[Vec<T>]) -> Value {
    rows.iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
        .collect()
}

/// Running frequency of equivalent verdicts for the CM pair, sampled at `points` values of X.
pub fn cm_density_json(xmax: u32, points: u32) -> Result<Value, String> {
    if !(3..=MAX_X).contains(&xmax) {
        return Err(format!("X must lie in 3..={MAX_X}"));
    }
    let verdicts = table_verdicts(&cm_pair_table(xmax as u64).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let step = (verdicts.len() / points.max(1) as usize).max(1);
    let mut curve = Vec::new();
    let mut hits = 0;
    for (i, (p, v)) in verdicts.iter().enumerate() {
        hits += usize::from(v.equivalent);
        if (i + 1) % step == 0 || i + 1 == verdicts.len() {
            curve.push(json!({ "x": p, "observed": hits as f64 / (i + 1) as f64 }));
        }
    }
    let r = density_report(xmax as u64, &verdicts, Some(rat_frac(1, 2))).map_err(|e| e.to_string())?;
    let inert = verdicts.iter().filter(|(p, _)| p % 4 == 3).count();
    Ok(json!({
        "xmax": xmax,
        "primes": r.total_primes,
        "hits": r.hits,
        "inert": inert,
        "observed": r.observed_f64(),
        "deviation": r.deviation_f64(),
        "curve": curve,
    }))
}

pub fn lattice_json(matrix: &str) -> Result<Value, String> {
    let theta = LatticeAutomorphism::new(IntMatrix::parse(matrix).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let d = decompose(&theta, None).map_err(|e| e.to_string())?;
    Ok(json!({
        "order": theta.order(),
        "rank": theta.rank(),
        "fixed_basis": rows(&d.fixed_basis),
        "y_basis": rows(&d.y_basis),
        "ltheta_basis": rows(&d.ltheta_basis),
        "invariant_order": invariant_order(&theta).map(|m| m.to_string()),
        "ltheta_invariant_order": d.invariant_order.map(|m| m.to_string()),
    }))
}

pub fn powermap_json(demo: &str, samples: u32, seed: u64) -> Result<Value, String> {
    let samples = samples.clamp(1, 1000) as usize;
    let r = match demo {
        "torus" => torus_collapse_demo(samples, seed),
        "swap" => semisimple_noncollapse_demo(samples, seed),
        other => return Err(format!("unknown demo {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let shown: Vec<Value> = r
        .witnessed_neighborhood
        .iter()
        .take(6)
        .map(|m| Value::String(m.to_string()))
        .collect();
    Ok(json!({
        "demo": demo,
        "m": r.m,
        "samples": r.samples,
        "distinct_images": r.distinct_images,
        "collapse": r.collapse,
        "witnesses": r.witnessed_neighborhood.len(),
        "examples": shown,
    }))
}

#[wasm_bindgen]
pub fn cm_density(xmax: u32, points: u32) -> Result<String, JsValue> {
    cm_density_json(xmax, points).map(|v| v.to_string()).map_err(err)
}

#[wasm_bindgen]
pub fn lattice(matrix: &str) -> Result<String, JsValue> {
    lattice_json(matrix).map(|v| v.to_string()).map_err(err)
}

/// `seed` arrives as a JS number; integers up to 2^53 are exact.
#[wasm_bindgen]
pub fn powermap(demo: &str, samples: u32, seed: f64) -> Result<String, JsValue> {
    powermap_json(demo, samples, seed as u64).map(|v| v.to_string()).map_err(err)
}
