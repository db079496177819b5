//! Machine-readable run reports. Identical (command, seed, instance)
//! invocations produce byte-identical reports unless --timing is given.

use serde::{Deserialize, Serialize};

use pareto_tsp::maxtsp::Truncation;

#[derive(Debug, Serialize, Deserialize)]
pub struct RunParams {
    pub eps: Option<String>,
    pub gamma: Option<String>,
    pub seed: u64,
    pub max_k_cardinality: usize,
    pub max_beta_per_coord: usize,
    pub cc_mode: String,
    pub threads: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Solution {
    pub edges: Vec<(usize, usize)>,
    pub weight: Vec<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OracleSection {
    pub alpha: String,
    pub ok: bool,
    pub counterexample: Option<Vec<u128>>,
    pub achieved_ratio: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub algorithm: String,
    pub instance_digest: String,
    pub params: RunParams,
    /// Present iff a budget clipped the formal enumeration bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
    pub solutions: Vec<Solution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    pub wall_time_ms: Option<u128>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}
