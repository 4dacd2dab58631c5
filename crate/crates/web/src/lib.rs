//! Browser bindings. Each export returns a JSON string; the plain functions
//! behind them are what the native tests exercise.

use serde_json::json;
use superq_core::catalog;
use superq_core::quadratic::{ci_verdict, Limits};
use superq_core::wall_brauer::brauer_table;
use wasm_bindgen::prelude::*;

/// Browser tabs get a smaller budget than the CLI.
fn page_limits() -> Limits {
    Limits { max_sym_dim: 20_000, max_tensor_dim: 20_000 }
}

pub fn series_json(name: &str, degree: usize) -> Result<String, String> {
    let space = catalog::quadratic(name).map_err(|e| e.to_string())?;
    let h = space.hilbert_series(degree, &page_limits()).map_err(|e| e.to_string())?;
    let ci = ci_verdict(&h, space.dim_b(), space.dim_v());
    let lie = space.lie_dims(degree, &page_limits()).ok().map(|l| l.dims);
    Ok(json!({
        "name": name,
        "hilbert": h.coefficients,
        "expected_if_ci": ci.expected,
        "complete_intersection": ci.is_ci,
        "lie_dims": lie,
    })
    .to_string())
}

pub fn brackets_json(name: &str) -> Result<String, String> {
    let space = catalog::quadratic(name).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for i in 0..space.dim_b() {
        for j in i..space.dim_b() {
            let g = space.gamma(i, j);
            if g.is_empty() {
                continue;
            }
            let terms: Vec<String> = g.iter().map(|(k, c)| format!("{c}·{}", space.v_names()[*k])).collect();
            rows.push(json!([space.b_names()[i], space.b_names()[j], terms.join(" + ")]));
        }
    }
    Ok(json!({ "name": name, "B": space.b_names(), "V": space.v_names(), "rows": rows }).to_string())
}

pub fn brauer_json(p: usize, q: usize, n: usize) -> Result<String, String> {
    let t = brauer_table(p, q, n).map_err(|e| e.to_string())?;
    serde_json::to_string(&t).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn hilbert(name: &str, degree: usize) -> Result<String, JsValue> {
    series_json(name, degree).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn brackets(name: &str) -> Result<String, JsValue> {
    brackets_json(name).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn brauer(p: usize, q: usize, n: usize) -> Result<String, JsValue> {
    brauer_json(p, q, n).map_err(|e| JsValue::from_str(&e))
}
