//! Executable checks, each returning a JSON [`Certificate`].
//!
//! A passing certificate carries a summary of what was checked; a failing
//! one carries the first failure found.

pub mod forms;
mod checks;
mod pipelines;

pub use checks::{
    check_braid, check_closed_forms, check_green_and_dt, check_peripheral_and_casimir, check_r_preserves_quiver, check_sequence_preserves,
    tilde_multiple, FormMode,
};
pub use pipelines::{
    check_braid_weyl_d, check_construction_pins, check_equivalences, check_f_polynomial, check_laurent, check_m_d_to_q, check_rd_preserves,
    check_separation, check_t_pipeline, d_a1_squared, random_sequence, BraidWeylConvention,
};

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::roots::CartanData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Tropical,
    Symbolic,
}

/// Field order is part of the format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub params: Value,
    pub verdict: Verdict,
    pub witness: Value,
    pub wall_ms: u64,
    pub mode: Mode,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Copy with `wall_ms` zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Certificate { wall_ms: 0, ..self.clone() }
    }
}

/// Outcome of a check body: a summary on success, a witness on failure.
pub(crate) type Outcome = Result<Value, Value>;

pub(crate) struct Run {
    check: &'static str,
    params: Value,
    mode: Mode,
    start: Instant,
}

impl Run {
    pub(crate) fn new(check: &'static str, params: Value, mode: Mode) -> Self {
        Run { check, params, mode, start: Instant::now() }
    }

    pub(crate) fn finish(self, outcome: Outcome) -> Certificate {
        let (verdict, witness) = match outcome {
            Ok(w) => (Verdict::Pass, w),
            Err(w) => (Verdict::Fail, w),
        };
        Certificate {
            check: self.check.into(),
            params: self.params,
            verdict,
            witness,
            wall_ms: self.start.elapsed().as_millis() as u64,
            mode: self.mode,
        }
    }
}

pub(crate) fn engine_error(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

pub(crate) fn type_params(cd: &CartanData, m: usize) -> Value {
    json!({ "type": cd.kind.to_string(), "n": cd.rank(), "m": m })
}
