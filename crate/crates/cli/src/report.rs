//! Report envelope and payload shapes. Complex numbers are `[re, im]`.

use densecode_core::{
    ComplexMatrix, ComplexScalar, GramReport, Method, OptimizationResult, PreparationPlan, Prop2Report,
    SchmidtForm, SimulationResult,
};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub type Complex = [f64; 2];

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub payload: Value,
    pub tool_version: String,
}

impl Report {
    pub fn new(command: &str, input: &[u8], payload: impl Serialize) -> Self {
        Self {
            command: command.to_owned(),
            input_digest: hex::encode(Sha256::digest(input)),
            payload: serde_json::to_value(payload).expect("payload serializes"),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One `path = value` line per leaf.
    pub fn to_text(&self) -> String {
        let mut out = format!("command = {}\ninput_digest = {}\ntool_version = {}\n", self.command, self.input_digest, self.tool_version);
        flatten("", &self.payload, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        // Leaf arrays (vectors, complex pairs) stay on one line.
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array() && x.as_array().is_some_and(|a| a.iter().any(Value::is_array))) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        leaf => out.push_str(&format!("{prefix} = {leaf}\n")),
    }
}

pub fn complex(z: ComplexScalar) -> Complex {
    [z.re, z.im]
}

pub fn vector(v: &[ComplexScalar]) -> Vec<Complex> {
    v.iter().copied().map(complex).collect()
}

/// Rows of `[re, im]` entries.
pub fn matrix(m: &ComplexMatrix) -> Vec<Vec<Complex>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| complex(m[(i, j)])).collect()).collect()
}

#[derive(Debug, Serialize)]
pub struct ViolationPayload {
    pub j1: usize,
    pub j2: usize,
    pub gamma: Complex,
}

#[derive(Debug, Serialize)]
pub struct AnalyzePayload {
    pub d: usize,
    pub gram: Vec<Vec<Complex>>,
    pub column_norms: Vec<f64>,
    pub violations: Vec<ViolationPayload>,
    pub perfectly_preparable: bool,
}

impl From<&GramReport> for AnalyzePayload {
    fn from(r: &GramReport) -> Self {
        Self {
            d: r.gram.rows(),
            gram: matrix(&r.gram),
            column_norms: r.column_norms.clone(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationPayload { j1: v.j1, j2: v.j2, gamma: complex(v.gamma) })
                .collect(),
            perfectly_preparable: r.perfectly_preparable,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanPayload {
    pub c: Vec<Complex>,
    pub perm_a: Vec<usize>,
    pub perm_b: Vec<usize>,
    pub y: Vec<Vec<Complex>>,
    pub e0: Vec<Vec<Complex>>,
    pub e1: Vec<Vec<Complex>>,
    pub success_prob: f64,
    pub is_perfect: bool,
    pub free_columns: Vec<usize>,
    pub completeness_error: f64,
}

impl From<&PreparationPlan> for PlanPayload {
    fn from(p: &PreparationPlan) -> Self {
        Self {
            c: vector(p.shared.amplitudes()),
            perm_a: p.shared.perm_a().to_vec(),
            perm_b: p.shared.perm_b().to_vec(),
            y: matrix(&p.y),
            e0: matrix(&p.kraus.e0),
            e1: matrix(&p.kraus.e1),
            success_prob: p.success_prob,
            is_perfect: p.is_perfect,
            free_columns: p.free_columns.clone(),
            completeness_error: p.kraus.completeness_error(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BaselinePayload {
    pub success_prob: f64,
}

#[derive(Debug, Serialize)]
pub struct BoundPayload {
    pub pair: [usize; 2],
    pub gamma: Complex,
    pub bound: f64,
    pub spectrum: Vec<f64>,
    pub achieved: f64,
}

impl From<&Prop2Report> for BoundPayload {
    fn from(r: &Prop2Report) -> Self {
        Self {
            pair: [r.pair.0, r.pair.1],
            gamma: complex(r.gamma),
            bound: r.bound,
            spectrum: r.spectrum.clone(),
            achieved: r.achieved,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SchmidtPayload {
    pub lambdas: Vec<f64>,
    pub basis_a: Vec<Vec<Complex>>,
    pub basis_b: Vec<Vec<Complex>>,
    pub entropy: f64,
}

impl SchmidtPayload {
    pub fn new(s: &SchmidtForm, entropy: f64) -> Self {
        Self { lambdas: s.lambdas.clone(), basis_a: matrix(&s.basis_a), basis_b: matrix(&s.basis_b), entropy }
    }
}

#[derive(Debug, Serialize)]
pub struct SimulatePayload {
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
    pub empirical_prob: f64,
    pub analytic_prob: f64,
    pub mean_success_fidelity: f64,
    pub ci_halfwidth: f64,
}

impl SimulatePayload {
    pub fn new(seed: u64, r: &SimulationResult) -> Self {
        Self {
            seed,
            trials: r.trials,
            successes: r.successes,
            empirical_prob: r.empirical_prob,
            analytic_prob: r.analytic_prob,
            mean_success_fidelity: r.mean_success_fidelity,
            ci_halfwidth: r.ci_halfwidth,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SeedPayload {
    pub name: &'static str,
    pub weights: Vec<f64>,
    pub prob: f64,
}

#[derive(Debug, Serialize)]
pub struct OptimizePayload {
    pub method: &'static str,
    pub best_c: Vec<f64>,
    pub best_prob: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub seeds: Vec<SeedPayload>,
    pub history: Vec<(usize, f64)>,
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Grid => "grid",
        Method::NelderMead => "nelder-mead",
    }
}

impl From<&OptimizationResult> for OptimizePayload {
    fn from(r: &OptimizationResult) -> Self {
        Self {
            method: method_name(r.method),
            best_c: r.best_c.clone(),
            best_prob: r.best_prob,
            evaluations: r.evaluations,
            converged: r.converged,
            seeds: r
                .seeds
                .iter()
                .map(|s| SeedPayload { name: s.name, weights: s.weights.clone(), prob: s.prob })
                .collect(),
            history: r.history.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let values = [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, 2.0f64.sqrt() * 1e17, -0.0];
        let report = Report::new("x", b"", BaselinePayload { success_prob: 0.0 });
        let mut v = report.payload.clone();
        for x in values {
            v["success_prob"] = serde_json::json!(x);
            let text = serde_json::to_string(&v).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(back["success_prob"].as_f64().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn digest_is_sha256_hex() {
        let r = Report::new("x", b"abc", BaselinePayload { success_prob: 1.0 });
        assert_eq!(r.input_digest, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn text_rendering() {
        let r = Report::new("baseline", b"", BaselinePayload { success_prob: 0.5 });
        assert!(r.to_text().contains("success_prob = 0.5\n"));
    }
}
