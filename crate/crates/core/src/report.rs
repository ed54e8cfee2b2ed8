//! The `{claim, status, witness}` report shape shared by every checker.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Violated,
    PreconditionFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub status: Status,
    pub witness: Option<Value>,
}

impl Report {
    pub fn holds(claim: impl Into<String>) -> Self {
        Report {
            claim: claim.into(),
            status: Status::Holds,
            witness: None,
        }
    }

    pub fn violated(claim: impl Into<String>, witness: Value) -> Self {
        Report {
            claim: claim.into(),
            status: Status::Violated,
            witness: Some(witness),
        }
    }

    pub fn precondition_failed(claim: impl Into<String>, witness: Value) -> Self {
        Report {
            claim: claim.into(),
            status: Status::PreconditionFailed,
            witness: Some(witness),
        }
    }

    /// `holds` when `ok`, otherwise `violated` with the lazily built witness.
    pub fn check(claim: impl Into<String>, ok: bool, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Report::holds(claim)
        } else {
            Report::violated(claim, witness())
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_violated(&self) -> bool {
        self.status == Status::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_serializes_kebab_case() {
        let r = Report::precondition_failed("x", json!({"why": "y"}));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "precondition-failed");
        assert_eq!(
            serde_json::to_value(Report::holds("c")).unwrap()["witness"],
            Value::Null
        );
    }
}
