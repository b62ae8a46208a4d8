//! Structured reports for positivity and signature checks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::Inertia;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Degenerate,
}

impl Outcome {
    pub fn is_pass(self) -> bool {
        self == Outcome::Pass
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Degenerate => "DEGENERATE",
        })
    }
}

/// An element certifying a failure, as coordinates over the relevant basis.
/// Coordinates are strings so exact rationals survive a JSON round trip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    pub coords: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub exact: bool,
    pub relative: f64,
}

/// One named scalar condition inside a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// `[n₊, n₀, n₋]`.
    pub signature: [usize; 3],
    pub eigenvalues: Vec<f64>,
    pub witness: Option<Witness>,
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn new(outcome: Outcome, inertia: &Inertia, eigenvalues: Vec<f64>, exact: bool, relative: f64) -> Self {
        Verdict {
            outcome,
            signature: [inertia.positive, inertia.zero, inertia.negative],
            eigenvalues,
            witness: None,
            tolerances: Tolerances { exact, relative },
            checks: Vec::new(),
        }
    }

    pub fn with_witness(mut self, kind: &str, coords: Vec<String>) -> Self {
        self.witness = Some(Witness {
            kind: kind.to_string(),
            coords,
        });
        self
    }

    pub fn with_check(mut self, name: &str, value: impl fmt::Display, pass: bool) -> Self {
        self.checks.push(Check {
            name: name.to_string(),
            value: value.to_string(),
            pass,
        });
        self
    }

    pub fn is_pass(&self) -> bool {
        self.outcome.is_pass()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdicts serialize")
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, z, n] = self.signature;
        writeln!(f, "outcome    {}", self.outcome)?;
        writeln!(f, "signature  ({p}, {z}, {n})")?;
        if !self.eigenvalues.is_empty() {
            let eig: Vec<String> = self.eigenvalues.iter().map(|x| format!("{x:.6e}")).collect();
            writeln!(f, "eigenvalues [{}]", eig.join(", "))?;
        }
        for c in &self.checks {
            writeln!(f, "{:<10} {} {}", if c.pass { "ok" } else { "violated" }, c.name, c.value)?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "witness    {} [{}]", w.kind, w.coords.join(", "))?;
        }
        Ok(())
    }
}
