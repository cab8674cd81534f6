//! Check records and run reports shared by the verification suites and the
//! command line.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// One check. `paper_anchor` names the mathematical statement checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub family: Option<String>,
    pub n: Option<usize>,
    pub t: Option<String>,
    pub s: Option<String>,
    pub check: String,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub verdict: Verdict,
    pub paper_anchor: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(suite: &str, check: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        CheckRecord {
            suite: suite.to_string(),
            family: None,
            n: None,
            t: None,
            s: None,
            check: check.into(),
            lhs: None,
            rhs: None,
            verdict: Verdict::from_bool(ok),
            paper_anchor: anchor.into(),
            detail: None,
        }
    }

    pub fn family(mut self, family: impl Into<String>, n: Option<usize>) -> Self {
        self.family = Some(family.into());
        self.n = n;
        self
    }

    pub fn params(mut self, t: impl ToString, s: Option<impl ToString>) -> Self {
        self.t = Some(t.to_string());
        self.s = s.map(|v| v.to_string());
        self
    }

    pub fn sides(mut self, lhs: impl ToString, rhs: impl ToString) -> Self {
        self.lhs = Some(lhs.to_string());
        self.rhs = Some(rhs.to_string());
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub mode: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(mode: &str, seed: u64) -> Self {
        RunReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            mode: mode.to_string(),
            seed,
            records: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
        self.tally();
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(rs);
        self.tally();
    }

    fn tally(&mut self) {
        let passed = self.records.iter().filter(|r| r.verdict.is_pass()).count();
        self.summary = Summary {
            total: self.records.len(),
            passed,
            failed: self.records.len() - passed,
        };
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Fixed-width human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "spherekit {} | mode {} | seed {}", self.tool_version, self.mode, self.seed);
        let _ = writeln!(
            out,
            "{:<10} {:<10} {:>3} {:>8} {:>8} {:<34} {:>14} {:>14} {:<4}",
            "suite", "family", "n", "t", "s", "check", "lhs", "rhs", "ok"
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<10} {:<10} {:>3} {:>8} {:>8} {:<34} {:>14} {:>14} {:<4}",
                r.suite,
                r.family.as_deref().unwrap_or("-"),
                r.n.map_or("-".to_string(), |n| n.to_string()),
                r.t.as_deref().unwrap_or("-"),
                r.s.as_deref().unwrap_or("-"),
                r.check,
                r.lhs.as_deref().unwrap_or("-"),
                r.rhs.as_deref().unwrap_or("-"),
                if r.verdict.is_pass() { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        out
    }
}
