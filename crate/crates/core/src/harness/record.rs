use serde::{Deserialize, Serialize};

use crate::circuit::Origin;

/// Column order of the results CSV.
pub const RESULTS_HEADER: &str =
    "circuit_id,origin,n_qubits,n_edges,n_multiqubit_gates,k,strategy,cut_cost,per_qubit,rel_to_baseline,balanced,status,seed,elapsed_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

/// One (circuit, k, strategy) evaluation. Cost columns are empty for failed
/// runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub circuit_id: String,
    pub origin: Origin,
    pub n_qubits: usize,
    pub n_edges: usize,
    pub n_multiqubit_gates: usize,
    pub k: usize,
    pub strategy: String,
    pub cut_cost: Option<u64>,
    pub per_qubit: Option<f64>,
    pub rel_to_baseline: Option<f64>,
    pub balanced: Option<bool>,
    pub status: Status,
    pub seed: u64,
    pub elapsed_ms: f64,
}

impl BenchRecord {
    pub fn key(&self) -> String {
        job_key(&self.circuit_id, self.k, &self.strategy)
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok && self.cut_cost.is_some()
    }
}

/// Journal line identifying one job.
pub fn job_key(circuit_id: &str, k: usize, strategy: &str) -> String {
    format!("{circuit_id}\t{k}\t{strategy}")
}
