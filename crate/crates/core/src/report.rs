//! Machine-readable check reports shared by the validators and the CLI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::VertexId;

/// Concrete evidence attached to a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Eigen-equation residual at a vertex.
    Residual { vertex: VertexId, residual: u64 },
    /// A proper neighbor subset whose restricted residual vanishes.
    Subset { vertex: VertexId, subset: Vec<VertexId> },
    /// Two vertices at distance 1 or 2 with the same value.
    Pair { u: VertexId, v: VertexId, value: u64, distance: usize },
    Vertex { vertex: VertexId, detail: String },
    Edge { u: VertexId, v: VertexId, detail: String },
    Value { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Advisory checks are reported but never fail a report.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub advisory: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            advisory: false,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witnesses: Vec<Witness>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            advisory: false,
            detail: detail.into(),
            witnesses,
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        if ok {
            Check::pass(name, detail)
        } else {
            let witness = Witness::Value {
                detail: detail.clone(),
            };
            Check::fail(name, detail, vec![witness])
        }
    }

    pub fn advisory(mut self) -> Self {
        self.advisory = true;
        self
    }

    /// Prefix the check name, e.g. with the block it belongs to.
    pub fn scoped(mut self, scope: &str) -> Self {
        self.name = format!("{scope}.{}", self.name);
        self
    }

    pub fn blocking_failure(&self) -> bool {
        !self.passed && !self.advisory
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub status: Status,
}

/// Hex SHA-256 over the length-prefixed inputs.
pub fn digest_inputs<I, B>(inputs: I) -> String
where
    I: IntoIterator<Item = B>,
    B: AsRef<[u8]>,
{
    let mut h = Sha256::new();
    for chunk in inputs {
        let bytes = chunk.as_ref();
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: impl Into<String>, inputs_digest: String) -> Self {
        Report {
            command: command.into(),
            inputs_digest,
            checks: Vec::new(),
            data: None,
            status: Status::Pass,
        }
    }

    pub fn push(&mut self, check: Check) {
        if check.blocking_failure() {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = Some(data);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.blocking_failure())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}]", self.command, &self.inputs_digest[..12.min(self.inputs_digest.len())]);
        for c in &self.checks {
            let mark = match (c.passed, c.advisory) {
                (true, _) => "PASS",
                (false, true) => "NOTE",
                (false, false) => "FAIL",
            };
            let _ = writeln!(out, "  {mark} {}: {}", c.name, c.detail);
            for w in &c.witnesses {
                let _ = writeln!(out, "       witness: {}", serde_json::to_string(w).unwrap_or_default());
            }
        }
        if let Some(data) = &self.data {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(data).unwrap_or_default());
        }
        let _ = writeln!(
            out,
            "status: {}",
            if self.passed() { "pass" } else { "fail" }
        );
        out
    }
}
