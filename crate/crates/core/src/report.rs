//! Check results that keep unmet hypotheses apart from failed conclusions.

use std::cell::Cell;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FamilyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisUnmet,
    /// A budget ran out before the check finished; never counts as a pass.
    NotFullyVerified,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisUnmet => "hypothesis unmet",
            Status::NotFullyVerified => "not fully verified",
        })
    }
}

/// One named check with optional explanation and witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Pass, detail: String::new(), witnesses: Vec::new() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witnesses: Vec<String>) -> Self {
        Check { name: name.into(), status: Status::Fail, detail: detail.into(), witnesses }
    }

    pub fn unverified(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::NotFullyVerified, detail: detail.into(), witnesses: Vec::new() }
    }

    /// Pass when `witness` is `None`, otherwise fail with it.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, "counterexample found", vec![w]),
        }
    }

    /// Converts a budget error into a not-fully-verified check.
    pub fn from_result(name: impl Into<String>, r: Result<Option<String>, FamilyError>) -> Self {
        let name = name.into();
        match r {
            Ok(w) => Check::from_witness(name, w),
            Err(FamilyError::BudgetExceeded(n)) => Check::unverified(name, format!("budget of {n} exhausted")),
            Err(e) => Check::fail(name, e.to_string(), Vec::new()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Result of checking one theorem-like statement on one instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<Check>,
    pub conclusions: Vec<Check>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), hypotheses: Vec::new(), conclusions: Vec::new() }
    }

    pub fn hypothesis(&mut self, c: Check) -> &mut Self {
        self.hypotheses.push(c);
        self
    }

    pub fn conclusion(&mut self, c: Check) -> &mut Self {
        self.conclusions.push(c);
        self
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|c| c.status.is_pass())
    }

    /// An unmet hypothesis dominates; otherwise the worst conclusion.
    pub fn status(&self) -> Status {
        if self.hypotheses.iter().any(|c| c.status == Status::NotFullyVerified) {
            return Status::NotFullyVerified;
        }
        if !self.hypotheses_hold() {
            return Status::HypothesisUnmet;
        }
        if self.conclusions.iter().any(|c| c.status == Status::Fail || c.status == Status::HypothesisUnmet) {
            Status::Fail
        } else if self.conclusions.iter().any(|c| c.status == Status::NotFullyVerified) {
            Status::NotFullyVerified
        } else {
            Status::Pass
        }
    }

    /// First failing or unverified check, for summaries.
    pub fn first_problem(&self) -> Option<&Check> {
        self.hypotheses.iter().chain(&self.conclusions).find(|c| !c.status.is_pass())
    }
}

/// A cap on the number of elementary steps a sweep may take.
#[derive(Debug)]
pub struct Budget {
    limit: Option<u64>,
    used: Cell<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { limit: None, used: Cell::new(0) }
    }

    pub fn new(limit: u64) -> Self {
        Budget { limit: Some(limit), used: Cell::new(0) }
    }

    pub fn from_option(limit: Option<u64>) -> Self {
        Budget { limit, used: Cell::new(0) }
    }

    pub fn spend(&self, n: u64) -> Result<(), FamilyError> {
        let used = self.used.get().saturating_add(n);
        self.used.set(used);
        match self.limit {
            Some(l) if used > l => Err(FamilyError::BudgetExceeded(l)),
            _ => Ok(()),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unmet_hypothesis_is_not_a_failure() {
        let mut r = Report::new("t");
        r.hypothesis(Check::fail("h", "", vec![]));
        r.conclusion(Check::fail("c", "", vec![]));
        assert_eq!(r.status(), Status::HypothesisUnmet);
    }

    #[test]
    fn budget_exhaustion_never_passes() {
        let b = Budget::new(3);
        assert!(b.spend(3).is_ok());
        let c = Check::from_result("x", b.spend(1).map(|_| None));
        assert_eq!(c.status, Status::NotFullyVerified);
        let mut r = Report::new("t");
        r.conclusion(Check::pass("a")).conclusion(c);
        assert_eq!(r.status(), Status::NotFullyVerified);
    }
}
