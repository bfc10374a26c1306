//! The `bvlab-report v1` JSON schema and its CSV sidecar.
//!
//! ```json
//! {
//!   "schema": "bvlab-report v1",
//!   "experiment": "measure-compose",
//!   "params": {"n": "2", "q": "1/4"},
//!   "results": [
//!     {"claim": "...", "value": "15/16", "bound": "15/16", "verdict": "pass", "certificate": "..."}
//!   ],
//!   "budget": {"depth": "6"}
//! }
//! ```
//!
//! Every number is a string: rationals as `n/d`, counts as decimal integers.
//! The sidecar is a CSV table whose columns depend on the experiment.

use std::collections::BTreeMap;
use std::path::Path;

use bvlab_core::Verdict;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "bvlab-report v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub claim: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<String>,
    pub verdict: String,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub experiment: String,
    pub params: BTreeMap<String, String>,
    pub results: Vec<ResultRow>,
    pub budget: BTreeMap<String, String>,
    #[serde(skip)]
    pub table: Option<Table>,
}

/// A CSV sidecar.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(header: I) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = S>, S: ToString>(&mut self, row: I) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
    }
}

impl Report {
    pub fn new(experiment: &str) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            results: Vec::new(),
            budget: BTreeMap::new(),
            table: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn budget(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.budget.insert(key.to_string(), value.to_string());
        self
    }

    pub fn result(
        &mut self,
        claim: impl Into<String>,
        value: impl ToString,
        bound: Option<String>,
        verdict: Verdict,
        certificate: impl Into<String>,
    ) -> &mut Self {
        self.results.push(ResultRow {
            claim: claim.into(),
            value: value.to_string(),
            bound,
            verdict: verdict.as_str().to_string(),
            certificate: certificate.into(),
        });
        self
    }

    /// Worst verdict over all results: any fail, then any undecided.
    pub fn verdict(&self) -> Verdict {
        self.results.iter().fold(Verdict::Pass, |acc, r| {
            acc.and(match r.verdict.as_str() {
                "pass" => Verdict::Pass,
                "undecided" => Verdict::Undecided,
                _ => Verdict::Fail,
            })
        })
    }

    /// 0 if everything passes, 2 if the only non-passes are undecided, else 1.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Pass => 0,
            Verdict::Undecided => 2,
            Verdict::Fail => 1,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses a report, rejecting any other schema version.
    pub fn from_json(text: &str) -> Result<Report, CliError> {
        let r: Report = serde_json::from_str(text)?;
        if r.schema != SCHEMA {
            return Err(CliError::format(1, format!("unsupported schema {:?}, expected {SCHEMA:?}", r.schema)));
        }
        Ok(r)
    }

    /// The sidecar: the experiment's own table, or one row per result.
    pub fn csv(&self) -> Result<String, CliError> {
        match &self.table {
            Some(t) => t.to_csv(),
            None => {
                let mut t = Table::new(["claim", "value", "bound", "verdict", "certificate"]);
                for r in &self.results {
                    t.push([
                        r.claim.clone(),
                        r.value.clone(),
                        r.bound.clone().unwrap_or_default(),
                        r.verdict.clone(),
                        r.certificate.clone(),
                    ]);
                }
                t.to_csv()
            }
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.csv()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_and_schema() {
        let mut r = Report::new("demo");
        r.param("q", "1/4");
        assert_eq!(r.exit_code(), 0);
        r.result("a", "1/2", None, Verdict::Undecided, "");
        assert_eq!(r.exit_code(), 2);
        r.result("b", "1/2", Some("1/3".into()), Verdict::Fail, "x");
        assert_eq!(r.exit_code(), 1);
        let back = Report::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back.results, r.results);
        let bad = r.to_json().unwrap().replace("bvlab-report v1", "bvlab-report v2");
        assert!(Report::from_json(&bad).is_err());
        assert!(r.csv().unwrap().starts_with("claim,value,bound,verdict,certificate\n"));
    }
}
