//! Experiment reports and their JSON/CSV encodings.
//!
//! The JSON schema has exactly six top-level fields: `command`, `config`,
//! `scalars`, `series`, `flags`, `version`. Maps are ordered, so equal reports
//! serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::scalar::{Real, C};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Configuration value echoed into a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
}

/// Complex number as a two-field record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

impl<T: Real> From<C<T>> for ComplexRecord {
    fn from(z: C<T>) -> Self {
        Self {
            re: z.re.to_f64_lossy(),
            im: z.im.to_f64_lossy(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Int(i64),
    Real(f64),
    Complex(ComplexRecord),
    Vector(Vec<ComplexRecord>),
}

/// Column-named table of real samples; every row has one value per column.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "series row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub command: String,
    pub config: BTreeMap<String, ParamValue>,
    pub scalars: BTreeMap<String, ScalarValue>,
    pub series: Series,
    pub flags: BTreeMap<String, bool>,
    pub version: String,
}

impl ExperimentReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            config: BTreeMap::new(),
            scalars: BTreeMap::new(),
            series: Series::default(),
            flags: BTreeMap::new(),
            version: VERSION.to_string(),
        }
    }

    pub fn real(&mut self, key: &str, value: impl Real) -> &mut Self {
        self.scalars
            .insert(key.into(), ScalarValue::Real(value.to_f64_lossy()));
        self
    }

    pub fn int(&mut self, key: &str, value: i64) -> &mut Self {
        self.scalars.insert(key.into(), ScalarValue::Int(value));
        self
    }

    pub fn complex<T: Real>(&mut self, key: &str, value: C<T>) -> &mut Self {
        self.scalars
            .insert(key.into(), ScalarValue::Complex(value.into()));
        self
    }

    pub fn vector<T: Real>(&mut self, key: &str, value: &[C<T>]) -> &mut Self {
        self.scalars.insert(
            key.into(),
            ScalarValue::Vector(value.iter().map(|&z| z.into()).collect()),
        );
        self
    }

    pub fn flag(&mut self, key: &str, pass: bool) -> &mut Self {
        self.flags.insert(key.into(), pass);
        self
    }

    pub fn get_real(&self, key: &str) -> Option<f64> {
        match self.scalars.get(key)? {
            ScalarValue::Real(x) => Some(*x),
            ScalarValue::Int(x) => Some(*x as f64),
            _ => None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.flags.values().all(|&f| f)
    }

    pub fn failed_flags(&self) -> Vec<&str> {
        self.flags
            .iter()
            .filter(|(_, &v)| !v)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Prefixes and merges another report's scalars, flags and nothing else.
    pub fn absorb(&mut self, prefix: &str, other: &ExperimentReport) {
        for (k, v) in &other.scalars {
            self.scalars.insert(format!("{prefix}.{k}"), v.clone());
        }
        for (k, v) in &other.flags {
            self.flags.insert(format!("{prefix}.{k}"), *v);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Formats a float with 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV rendering of the report's series: a header row, then one
/// newline-terminated row per sample.
pub fn emit_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(&report.series.columns.join(","));
    out.push('\n');
    for row in &report.series.rows {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_f64(*v));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_series_is_header_only() {
        let mut r = ExperimentReport::new("x");
        r.series = Series::new(&["t", "value"]);
        assert_eq!(emit_csv(&r), "t,value\n");
    }

    #[test]
    fn three_rows_give_four_lines() {
        let mut r = ExperimentReport::new("x");
        r.series = Series::new(&["t", "value"]);
        for k in 0..3 {
            r.series.push(vec![k as f64, 0.1 * k as f64]);
        }
        let csv = emit_csv(&r);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.ends_with('\n'));
        assert_eq!(
            csv.lines().nth(2).unwrap(),
            "1.0000000000000000e0,1.0000000000000001e-1"
        );
    }

    #[test]
    fn json_field_names_are_stable() {
        let mut r = ExperimentReport::new("spinflip");
        r.real("epsilon", 0.01f64)
            .complex("z", C::new(1.0f64, -2.0))
            .flag("ok", true);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        assert_eq!(
            keys,
            ["command", "config", "flags", "scalars", "series", "version"]
        );
        assert_eq!(v["scalars"]["z"]["re"], 1.0);
        assert_eq!(v["scalars"]["z"]["im"], -2.0);
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
