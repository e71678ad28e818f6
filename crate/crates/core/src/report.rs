//! Machine-readable summary of one synthesis run.

use crate::adder::Bounds;
use crate::aop::GateCounts;
use crate::circuit::Circuit;
use crate::verify::Verdict;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Verification {
    Exhaustive { passed: bool, checked: u64 },
    Random { passed: bool, checked: u64, trials: usize, seed: u64 },
    Skipped,
}

impl Verification {
    pub fn passed(&self) -> bool {
        match self {
            Verification::Exhaustive { passed, .. } | Verification::Random { passed, .. } => *passed,
            Verification::Skipped => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthReport {
    pub kind: String,
    pub construction: String,
    /// Input pairs for adders, alternating inputs for paths.
    pub n: usize,
    /// Symmetric inputs (paths only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_sym: Option<usize>,
    pub depth: u32,
    pub size: usize,
    pub fanout: usize,
    pub bound_depth: Option<u32>,
    pub bound_depth_formula: Option<String>,
    pub bound_size: Option<f64>,
    pub bound_size_formula: Option<String>,
    pub bounds_hold: bool,
    pub verified: Verification,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gate_categories: Option<GateCounts>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Verdict>,
    pub wall_time_ms: f64,
}

impl SynthReport {
    pub fn new(kind: &str, construction: String, n: usize, circuit: &Circuit, bounds: &Bounds) -> Self {
        let depth = circuit.depth();
        let size = circuit.size();
        SynthReport {
            kind: kind.to_string(),
            construction,
            n,
            n_sym: None,
            depth,
            size,
            fanout: circuit.fanout(),
            bound_depth: bounds.depth,
            bound_depth_formula: bounds.depth_formula.clone(),
            bound_size: bounds.size,
            bound_size_formula: bounds.size_formula.clone(),
            bounds_hold: bounds.holds(depth, size),
            verified: Verification::Skipped,
            gate_categories: None,
            counterexample: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.bounds_hold && self.verified.passed()
    }
}
