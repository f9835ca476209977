//! Versioned report documents.
//!
//! Generator indices in reports are 1-based, matching the `x_1, x_2, ...`
//! names. Ring values use the ring's textual encoding.

use std::time::Duration;

use evolia_core::RingDescriptor;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::job::{Analysis, PowerKind, SCHEMA_VERSION};

pub const INPUT_CONVENTION: &str = "matrix rows: entry (k, j) is the coefficient of x_k in x_j^2";
pub const INTERNAL_CONVENTION: &str = "structure columns: column j lists the coordinates of x_j^2";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conventions {
    pub input: String,
    pub internal: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            input: INPUT_CONVENTION.to_string(),
            internal: INTERNAL_CONVENTION.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub v: u32,
    pub ring: RingDescriptor,
    pub mode: String,
    pub algebra_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// Set when the finite analyses ran on the window `x_1..x_N` of a rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    pub conventions: Conventions,
    pub results: Vec<AnalysisEntry>,
}

/// One analysis outcome. Exactly one of `result` and `error` is set.
/// Timing is kept out of the document so that it stays byte-stable.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisEntry {
    pub analysis: Analysis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub invariant: bool,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl PartialEq for AnalysisEntry {
    fn eq(&self, other: &Self) -> bool {
        self.analysis == other.analysis
            && self.result == other.result
            && self.error == other.error
            && self.invariant == other.invariant
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathCert {
    pub path: Vec<usize>,
    pub product: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PumpKind {
    RepeatedValue,
    DomainCycle,
}

/// `path[cycle_start..]` is a closed loop; `cycle_start` is a position in
/// `path`, not a generator index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpCert {
    pub path: Vec<usize>,
    pub cycle_start: usize,
    pub product: Value,
    pub kind: PumpKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Verdict {
    Nilpotent {
        exponent: usize,
        /// Nonzero product of `exponent - 2` factors.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        minimality: Option<PathCert>,
    },
    NotNilpotent {
        witness: PumpCert,
        /// Path-product DP levels `[s, l]` with equal states.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dp_cycle: Option<[usize; 2]>,
    },
    NilpotencyUnknown {
        bound: usize,
    },
    Nil {
        max_exponent: usize,
        checked: u64,
    },
    /// `cycle = [s, l]`: `a^(s+1) = a^(l+1)`, all powers up to there nonzero.
    NotNil {
        witness: Value,
        witness_text: String,
        cycle: [usize; 2],
    },
    NilSkipped {
        size: String,
        cap: u64,
    },
    StronglyNilpotent {
        associated_index: usize,
        product_length: usize,
    },
    NotStronglyNilpotent {
        associated_dimension: usize,
        stable_dimension: usize,
        word: Vec<usize>,
    },
    StrongUnsupported,
    Filtration {
        complete: bool,
        layers: Vec<Vec<usize>>,
        residue: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        permutation: Option<Vec<usize>>,
    },
    Power {
        kind: PowerKind,
        exponent: usize,
        element: Value,
        element_text: String,
        result: Value,
        result_text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nil_exponent: Option<usize>,
    },
}

impl Report {
    /// Machine format: pretty-printed JSON with a trailing newline.
    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Report, CliError> {
        let report: Report = serde_json::from_str(text).map_err(|e| CliError::Parse {
            context: "report".into(),
            message: e.to_string(),
        })?;
        if report.v != SCHEMA_VERSION {
            return Err(CliError::Version(report.v));
        }
        Ok(report)
    }

    pub fn entry(&self, analysis: Analysis) -> Option<&AnalysisEntry> {
        self.results.iter().find(|e| e.analysis == analysis)
    }

    /// 0 when every analysis finished, 1 on a precondition error, 2 on an
    /// internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().any(|e| e.invariant) {
            2
        } else if self.results.iter().any(|e| e.error.is_some()) {
            1
        } else {
            0
        }
    }
}
