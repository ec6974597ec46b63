use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Which leg of a comparison a record describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    A,
    B,
    Target,
    Both,
}

/// One pass/fail record. Dimension vectors are indexed by weight (or
/// degree) starting at 0; an empty vector means the leg was not computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub side: Side,
    pub pass: bool,
    pub dims_a: Vec<usize>,
    pub dims_b: Vec<usize>,
    pub dims_target: Vec<usize>,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, side: Side) -> Self {
        CheckRecord {
            name: name.into(),
            side,
            pass: true,
            dims_a: Vec::new(),
            dims_b: Vec::new(),
            dims_target: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records a failure with a witness.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.pass = false;
        self.witnesses.push(witness.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Fails unless `cond` holds.
    pub fn require(&mut self, cond: bool, witness: impl FnOnce() -> String) {
        if !cond {
            self.fail(witness());
        }
    }

    pub fn set_leg_dims(&mut self, side: Side, dims: Vec<usize>) {
        match side {
            Side::A => self.dims_a = dims,
            Side::B => self.dims_b = dims,
            Side::Target | Side::Both => self.dims_target = dims,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: Verdict,
    pub checks: Vec<CheckRecord>,
    pub provenance: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(checks: Vec<CheckRecord>, provenance: BTreeMap<String, serde_json::Value>) -> Self {
        let verdict = if checks.iter().all(|c| c.pass) { Verdict::Pass } else { Verdict::Fail };
        Report { verdict, checks, provenance }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn merge(reports: Vec<Report>) -> Report {
        let mut checks = Vec::new();
        let mut provenance = BTreeMap::new();
        for r in reports {
            checks.extend(r.checks);
            provenance.extend(r.provenance);
        }
        Report::new(checks, provenance)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "verdict: {verdict}");
        for c in &self.checks {
            let flag = if c.pass { "pass" } else { "FAIL" };
            let _ = writeln!(out, "[{flag}] {}", c.name);
            for (label, dims) in [("A", &c.dims_a), ("B", &c.dims_b), ("target", &c.dims_target)] {
                if !dims.is_empty() {
                    let _ = writeln!(out, "    dims {label:<6} {dims:?}");
                }
            }
            for n in &c.notes {
                let _ = writeln!(out, "    note: {n}");
            }
            for w in &c.witnesses {
                let _ = writeln!(out, "    witness: {w}");
            }
        }
        out
    }
}

/// Successive differences of a cumulative dimension sequence.
pub fn graded_from_filtered(cumulative: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(cumulative.len());
    let mut prev = 0;
    for &c in cumulative {
        out.push(c.saturating_sub(prev));
        prev = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_records() {
        let mut bad = CheckRecord::new("b", Side::A);
        bad.fail("witness");
        let r = Report::new(vec![CheckRecord::new("a", Side::B), bad], BTreeMap::new());
        assert!(!r.passed());
        assert!(r.to_json().contains("\"verdict\": \"fail\""));
        assert!(r.to_text().contains("witness: witness"));
    }

    #[test]
    fn graded_differences() {
        assert_eq!(graded_from_filtered(&[1, 1, 2, 4]), vec![1, 0, 1, 2]);
    }
}
