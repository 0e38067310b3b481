//! Wire formats: JSON reports and CSV tables.
//!
//! Exact quantities serialize as strings, integers as `"48"` and rationals
//! always as `"p/q"`. Fields ending in `_decimal` carry a 12-significant-digit
//! rendering for people; nothing else is floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::estimation::{EstimationResult, SimulationSummary};
use crate::factorial::ModelSpec;
use crate::linalg::IntMatrix;
use crate::partition::Partition;
use crate::search::{DesignReport, Enumeration, OptimalDesign, ReportMethod, Spectrum};

/// `p/q`, with the denominator always present.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ser_ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

/// 12 significant digits, shortest form.
pub fn decimal12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub fn rational_decimal(r: &BigRational) -> String {
    decimal12(r.to_f64().unwrap_or(f64::NAN))
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignReportJson {
    pub k: u32,
    pub n: usize,
    pub d: usize,
    pub negligible: Vec<String>,
    pub deleted: Vec<String>,
    pub kept: Vec<String>,
    pub admissible: bool,
    #[serde(rename = "abs_det_C")]
    pub abs_det_c: String,
    #[serde(rename = "abs_det_D")]
    pub abs_det_d: String,
    pub efficiency_ratio: Option<String>,
    pub efficiency_ratio_decimal: Option<String>,
    /// `ratio^(1/d)`.
    pub d_efficiency_decimal: Option<String>,
    pub optimal: bool,
    pub method: ReportMethod,
    pub certified: bool,
}

fn labels<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

impl From<&DesignReport> for DesignReportJson {
    fn from(r: &DesignReport) -> Self {
        let d_eff = r.efficiency_ratio.as_ref().map(|ratio| {
            let x = ratio.to_f64().unwrap_or(0.0);
            decimal12(if r.d == 0 { 1.0 } else { x.powf(1.0 / r.d as f64) })
        });
        Self {
            k: r.k,
            n: r.n,
            d: r.d,
            negligible: labels(&r.negligible),
            deleted: labels(&r.deleted),
            kept: labels(&r.kept),
            admissible: r.admissible,
            abs_det_c: r.abs_det_c.to_string(),
            abs_det_d: r.abs_det_d.to_string(),
            efficiency_ratio: r.efficiency_ratio.as_ref().map(ratio_string),
            efficiency_ratio_decimal: r.efficiency_ratio.as_ref().map(rational_decimal),
            d_efficiency_decimal: d_eff,
            optimal: r.optimal,
            method: r.method,
            certified: r.certified,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassJson {
    pub class_rank: usize,
    #[serde(rename = "abs_det_C")]
    pub abs_det_c: String,
    #[serde(rename = "abs_det_D")]
    pub abs_det_d: String,
    pub count: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationJson {
    pub k: u32,
    pub n: usize,
    pub d: usize,
    pub negligible: Vec<String>,
    pub total: u128,
    pub admissible: u128,
    pub inadmissible: u128,
    pub classes: Vec<ClassJson>,
    pub designs: Vec<DesignReportJson>,
}

impl From<&Enumeration> for EnumerationJson {
    fn from(e: &Enumeration) -> Self {
        Self {
            k: e.spec.k(),
            n: e.spec.n(),
            d: e.spec.d(),
            negligible: labels(e.spec.negligible()),
            total: e.total,
            admissible: e.total - e.inadmissible,
            inadmissible: e.inadmissible,
            classes: e
                .classes
                .iter()
                .map(|c| ClassJson {
                    class_rank: c.rank,
                    abs_det_c: c.abs_det_c.to_string(),
                    abs_det_d: c.abs_det_d.to_string(),
                    count: c.count,
                })
                .collect(),
            designs: e.designs.iter().map(DesignReportJson::from).collect(),
        }
    }
}

/// Fixed columns: `deleted_set,abs_det_C,admissible,class_rank`. The deleted
/// set is space-separated run labels in standard order.
pub fn enumeration_csv(e: &Enumeration) -> String {
    let mut out = String::from("deleted_set,abs_det_C,admissible,class_rank\n");
    for r in &e.designs {
        let rank = e.class_rank(&r.abs_det_c).map_or_else(String::new, |x| x.to_string());
        out.push_str(&format!(
            "{},{},{},{}\n",
            labels(&r.deleted).join(" "),
            r.abs_det_c,
            r.admissible,
            rank
        ));
    }
    out
}

/// One-row table for a single report, same columns as the enumeration CSV.
pub fn report_csv(r: &DesignReport, class_rank: Option<usize>) -> String {
    format!(
        "deleted_set,abs_det_C,admissible,class_rank\n{},{},{},{}\n",
        labels(&r.deleted).join(" "),
        r.abs_det_c,
        r.admissible,
        class_rank.map_or_else(String::new, |x| x.to_string())
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimalJson {
    pub certified: bool,
    pub evaluated: u128,
    pub optima: Vec<DesignReportJson>,
}

impl From<&OptimalDesign> for OptimalJson {
    fn from(o: &OptimalDesign) -> Self {
        Self {
            certified: o.certified,
            evaluated: o.evaluated,
            optima: o.optima.iter().map(DesignReportJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueJson {
    pub label: String,
    pub value: String,
    pub value_decimal: String,
}

fn value_json(label: String, v: &BigRational) -> ValueJson {
    ValueJson { label, value: ratio_string(v), value_decimal: rational_decimal(v) }
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimationJson {
    pub k: u32,
    pub n: usize,
    pub d: usize,
    pub negligible: Vec<String>,
    pub deleted: Vec<String>,
    pub kept: Vec<String>,
    #[serde(rename = "abs_det_C")]
    pub abs_det_c: String,
    #[serde(rename = "abs_det_D")]
    pub abs_det_d: String,
    pub theta1_hat: Vec<ValueJson>,
    pub y2_blup: Vec<ValueJson>,
    /// Effect labels indexing the dispersion rows and columns.
    pub dispersion_effects: Vec<String>,
    /// `D^{-1} D^{-T}` in units of the error variance.
    pub dispersion: Vec<Vec<String>>,
}

pub fn estimation_json(p: &Partition, est: &EstimationResult) -> EstimationJson {
    let disp = &est.dispersion;
    EstimationJson {
        k: p.spec().k(),
        n: p.spec().n(),
        d: p.spec().d(),
        negligible: labels(p.spec().negligible()),
        deleted: labels(p.deleted()),
        kept: labels(p.kept()),
        abs_det_c: est.abs_det_c.to_string(),
        abs_det_d: est.abs_det_d.to_string(),
        theta1_hat: est.theta1_hat.iter().map(|(e, v)| value_json(e.to_string(), v)).collect(),
        y2_blup: est.y2_blup.iter().map(|(r, v)| value_json(r.to_string(), v)).collect(),
        dispersion_effects: labels(p.spec().nonneg()),
        dispersion: (0..disp.rows())
            .map(|i| disp.row(i).iter().map(ratio_string).collect())
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationJson {
    pub effects: Vec<String>,
    pub deleted: Vec<String>,
    #[serde(flatten)]
    pub summary: SimulationSummary,
}

pub fn simulation_json(p: &Partition, s: &SimulationSummary) -> SimulationJson {
    SimulationJson {
        effects: labels(p.spec().nonneg()),
        deleted: labels(p.deleted()),
        summary: s.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumJson {
    pub order: usize,
    pub raw: Vec<String>,
    pub normalized: Vec<String>,
    pub matrices_enumerated: u64,
}

impl From<&Spectrum> for SpectrumJson {
    fn from(s: &Spectrum) -> Self {
        Self {
            order: s.order,
            raw: s.raw.iter().map(BigInt::to_string).collect(),
            normalized: s.normalized.iter().map(BigInt::to_string).collect(),
            matrices_enumerated: s.matrices_enumerated,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixJson {
    pub k: u32,
    pub runs: Vec<String>,
    pub effects: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

fn sign_rows(h: &IntMatrix) -> Vec<Vec<i64>> {
    (0..h.rows())
        .map(|i| h.row(i).iter().map(|x| x.to_i64().expect("sign entry")).collect())
        .collect()
}

pub fn matrix_json(k: u32, h: &IntMatrix) -> MatrixJson {
    MatrixJson {
        k,
        runs: labels(&crate::factorial::all_runs(k).expect("valid k")),
        effects: labels(&crate::factorial::all_effects(k).expect("valid k")),
        entries: sign_rows(h),
    }
}

/// `run,F0,F1,...` header, then one row per run in standard order.
pub fn matrix_csv(k: u32, h: &IntMatrix) -> String {
    let m = matrix_json(k, h);
    let mut out = format!("run,{}\n", m.effects.join(","));
    for (label, row) in m.runs.iter().zip(&m.entries) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:+}")).collect();
        out.push_str(&format!("{label},{}\n", cells.join(",")));
    }
    out
}

/// Negligible-effect labels of a spec, standard order.
pub fn negligible_labels(spec: &ModelSpec) -> Vec<String> {
    labels(spec.negligible())
}
