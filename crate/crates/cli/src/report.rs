//! Experiment reports: a fixed CSV layout plus a JSON mirror with metadata.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// How `observed` is compared with `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `observed ≤ expected + tolerance`.
    #[serde(rename = "<=")]
    AtMost,
    /// `observed ≥ expected − tolerance`.
    #[serde(rename = ">=")]
    AtLeast,
    /// `observed < expected`, strictly.
    #[serde(rename = "<")]
    Below,
    /// `|observed − expected| ≤ tolerance`.
    #[serde(rename = "=")]
    Equal,
    /// `|observed − expected| ≤ tolerance · |expected|`.
    #[serde(rename = "=rel")]
    RelEqual,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::Equal => "=",
            Relation::RelEqual => "=rel",
        }
    }

    pub fn holds(self, observed: f64, expected: f64, tolerance: f64) -> bool {
        match self {
            Relation::AtMost => observed <= expected + tolerance,
            Relation::AtLeast => observed >= expected - tolerance,
            Relation::Below => observed < expected,
            Relation::Equal => (observed - expected).abs() <= tolerance,
            Relation::RelEqual => (observed - expected).abs() <= tolerance * expected.abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub check: String,
    pub relation: Relation,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(check: impl Into<String>, relation: Relation, observed: f64, expected: f64, tolerance: f64) -> Self {
        ReportRow {
            check: check.into(),
            relation,
            expected,
            observed,
            tolerance,
            pass: relation.holds(observed, expected, tolerance),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub version: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub rows: Vec<ReportRow>,
    pub pass: bool,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check: &'a str,
    relation: &'static str,
    expected: f64,
    observed: f64,
    tolerance: f64,
    pass: bool,
}

impl ExperimentReport {
    pub fn new(name: &str, seed: u64, parameters: BTreeMap<String, String>, rows: Vec<ReportRow>) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        ExperimentReport {
            name: name.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            parameters,
            rows,
            pass,
        }
    }

    /// Columns `check,relation,expected,observed,tolerance,pass`.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRow {
                check: &r.check,
                relation: r.relation.symbol(),
                expected: r.expected,
                observed: r.observed,
                tolerance: r.tolerance,
                pass: r.pass,
            })
            .map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        let json_path = dir.join(format!("{}.json", self.name));
        fs::write(&csv_path, self.to_csv()?).map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
        fs::write(&json_path, self.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", json_path.display())))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Relation::AtMost.holds(1.0, 1.0, 0.0));
        assert!(!Relation::AtMost.holds(1.1, 1.0, 0.05));
        assert!(Relation::AtLeast.holds(0.96, 1.0, 0.05));
        assert!(!Relation::Below.holds(1.0, 1.0, 1.0));
        assert!(Relation::Equal.holds(-1.0, -1.04, 0.05));
        assert!(Relation::RelEqual.holds(100.0, 100.5, 0.01));
        assert!(!Relation::RelEqual.holds(100.0, 102.0, 0.01));
    }

    #[test]
    fn csv_layout() {
        let rows = vec![ReportRow::new("a", Relation::AtMost, 0.5, 1.0, 1e-9)];
        let r = ExperimentReport::new("demo", 3, BTreeMap::new(), rows);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv, "check,relation,expected,observed,tolerance,pass\na,<=,1.0,0.5,1e-9,true\n");
        assert!(r.pass);
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
