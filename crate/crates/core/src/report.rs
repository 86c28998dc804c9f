//! Check records and reports, rendered as JSON or CSV.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::seq::ExtReal;

/// One verified claim: `lhs` compared with `rhs` at `tolerance`.
/// Infinite values are the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub claim: String,
    /// The law or statement being checked.
    pub source: String,
    pub lhs: Value,
    pub rhs: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(claim: impl Into<String>, source: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            source: source.into(),
            lhs: Value::Null,
            rhs: Value::Null,
            tolerance: None,
            pass: false,
        }
    }

    pub fn values(mut self, lhs: impl Serialize, rhs: impl Serialize) -> Self {
        self.lhs = to_value(lhs);
        self.rhs = to_value(rhs);
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    /// `|lhs − rhs| ≤ tol` on plain numbers.
    pub fn close(claim: impl Into<String>, source: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(claim, source)
            .values(lhs, rhs)
            .tolerance(tol)
            .pass((lhs - rhs).abs() <= tol)
    }

    /// `lhs == rhs` for exact values.
    pub fn equal<T: Serialize + PartialEq>(claim: impl Into<String>, source: impl Into<String>, lhs: T, rhs: T) -> Self {
        let pass = lhs == rhs;
        Self::new(claim, source).values(lhs, rhs).pass(pass)
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn ext_value(x: ExtReal) -> Value {
    match x {
        ExtReal::Finite(v) => serde_json::json!(v),
        ExtReal::Infinite => Value::String("inf".into()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            seed: None,
            generated_at: None,
            checks: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn extend<I: IntoIterator<Item = CheckRecord>>(&mut self, records: I) {
        self.checks.extend(records);
    }

    pub fn set_details(&mut self, details: impl Serialize) {
        self.details = serde_json::to_value(details).unwrap_or(Value::Null);
    }

    /// Stamps the current time (seconds since the Unix epoch).
    pub fn stamp(&mut self) {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.generated_at = Some(secs.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// JSON without the timestamp, for byte comparison of runs.
    pub fn comparable_json(&self) -> String {
        let mut copy = self.clone();
        copy.generated_at = None;
        copy.to_json()
    }

    /// One line per check: `claim,source,lhs,rhs,tolerance,pass`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["claim", "source", "lhs", "rhs", "tolerance", "pass"])
            .map_err(err)?;
        for c in &self.checks {
            let cell = |v: &Value| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            w.write_record([
                c.claim.clone(),
                c.source.clone(),
                cell(&c.lhs),
                cell(&c.rhs),
                c.tolerance.map(|t| t.to_string()).unwrap_or_default(),
                c.pass.to_string(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_rendering() {
        let mut r = Report::new("test").with_seed(3);
        r.push(CheckRecord::close("a", "x = x", 1.0, 1.0 + 1e-12, 1e-9));
        r.push(CheckRecord::new("b", "m(H) = inf").values(ext_value(ExtReal::Infinite), "inf").pass(true));
        assert!(r.all_pass());
        r.stamp();
        assert!(r.to_json().contains("generated_at"));
        assert!(!r.comparable_json().contains("generated_at"));
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().contains(",inf,inf,"));
        r.push(CheckRecord::equal("c", "eq", 1, 2));
        assert_eq!(r.failed(), 1);
    }
}
