//! Browser bindings. Each operation returns a JSON string; the `*_json`
//! functions hold the logic so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use satdesign::report::{self, ClassJson, DesignReportJson, EnumerationJson};
use satdesign::search::binomial;
use satdesign::{build_model_matrix, d_optimal, enumerate_admissible, is_admissible, make_partition, ModelSpec, SearchConfig};

/// Keeps the page responsive: larger searches belong on the command line.
pub const BROWSER_SUBSET_CAP: u128 = 200_000;

fn split(list: &str) -> Vec<&str> {
    list.split([',', ' ']).map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn spec(k: u32, negligible: &str) -> Result<ModelSpec, String> {
    let labels = split(negligible);
    if labels.is_empty() {
        return Err("list at least one negligible effect".into());
    }
    ModelSpec::from_labels(k, &labels).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn model_matrix_json(k: u32) -> Result<String, String> {
    if k > 6 {
        return Err("the page shows matrices up to k = 6".into());
    }
    let h = build_model_matrix(k).map_err(|e| e.to_string())?;
    to_json(&report::matrix_json(k, &h))
}

#[derive(Serialize)]
struct CheckJson {
    report: DesignReportJson,
    /// Rows: deleted runs; columns: negligible effects.
    c_block: Vec<Vec<i64>>,
}

pub fn check_design_json(k: u32, negligible: &str, deleted: &str) -> Result<String, String> {
    let spec = spec(k, negligible)?;
    let runs = spec.parse_runs(&split(deleted)).map_err(|e| e.to_string())?;
    let mut r = is_admissible(&spec, &runs).map_err(|e| e.to_string())?;
    if binomial(spec.runs(), spec.d()) <= BROWSER_SUBSET_CAP {
        let opt = d_optimal(&spec, &SearchConfig::default()).map_err(|e| e.to_string())?;
        r = r.with_reference(&opt.best.abs_det_c, satdesign::search::ReportMethod::Check, true);
    }
    let p = make_partition(&spec, &runs).map_err(|e| e.to_string())?;
    let c_block = p
        .c()
        .to_i64()
        .ok_or("C block entries out of range")?
        .chunks(spec.d().max(1))
        .map(<[i64]>::to_vec)
        .collect();
    to_json(&CheckJson { report: DesignReportJson::from(&r), c_block })
}

#[derive(Serialize)]
struct ExploreJson {
    total: u128,
    admissible: u128,
    inadmissible: u128,
    classes: Vec<ClassJson>,
    optimum: Option<DesignReportJson>,
    optima_count: usize,
}

pub fn explore_json(k: u32, negligible: &str) -> Result<String, String> {
    let spec = spec(k, negligible)?;
    let config = SearchConfig { subset_cap: BROWSER_SUBSET_CAP, ..SearchConfig::default() };
    let e = enumerate_admissible(&spec, &config).map_err(|e| e.to_string())?;
    let full = EnumerationJson::from(&e);
    let optima: Vec<&DesignReportJson> = full.designs.iter().filter(|d| d.optimal).collect();
    to_json(&ExploreJson {
        total: full.total,
        admissible: full.admissible,
        inadmissible: full.inadmissible,
        optimum: optima.first().map(|d| (*d).clone()),
        optima_count: optima.len(),
        classes: full.classes,
    })
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// The model matrix `H_N` with labels.
#[wasm_bindgen]
pub fn model_matrix(k: u32) -> Result<String, JsError> {
    js(model_matrix_json(k))
}

/// Report for one deletion set plus its `C` block.
#[wasm_bindgen]
pub fn check_design(k: u32, negligible: &str, deleted: &str) -> Result<String, JsError> {
    js(check_design_json(k, negligible, deleted))
}

/// Determinant classes and the lexicographically first D-optimal set.
#[wasm_bindgen]
pub fn explore(k: u32, negligible: &str) -> Result<String, JsError> {
    js(explore_json(k, negligible))
}
