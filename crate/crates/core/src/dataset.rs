//! Balanced one-way layouts: `n_I` groups, each observed `n_J` times.

use std::collections::HashMap;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

const RAIL_CSV: &str = include_str!("../data/rail.csv");

/// Observations `Y_ij` arranged one row per group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalancedOneWayData {
    labels: Vec<String>,
    values: Vec<Vec<f64>>,
}

/// Group means and the grand mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub group_means: Vec<f64>,
    pub grand_mean: f64,
}

impl BalancedOneWayData {
    /// Validates and wraps a row-per-group matrix.
    pub fn new(labels: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() || values.iter().all(|g| g.is_empty()) {
            return Err(Error::EmptyInput);
        }
        if labels.len() != values.len() {
            return Err(Error::MalformedInput(format!(
                "{} labels for {} groups",
                labels.len(),
                values.len()
            )));
        }
        let expected = values[0].len();
        for (label, group) in labels.iter().zip(&values) {
            if group.len() != expected {
                return Err(Error::UnbalancedDesign {
                    group: label.clone(),
                    found: group.len(),
                    expected,
                });
            }
        }
        if values.len() < 2 {
            return Err(Error::TooFewGroups(values.len()));
        }
        if expected < 2 {
            return Err(Error::TooFewReplicates(expected));
        }
        let mut seen = HashMap::new();
        for label in &labels {
            if seen.insert(label.as_str(), ()).is_some() {
                return Err(Error::MalformedInput(format!("duplicate group label `{label}`")));
            }
        }
        if let Some(bad) = values.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::MalformedInput(format!("non-finite value {bad}")));
        }
        Ok(Self { labels, values })
    }

    /// Builds a dataset with labels `g1`, `g2`, ...
    pub fn from_rows(values: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (1..=values.len()).map(|i| format!("g{i}")).collect();
        Self::new(labels, values)
    }

    /// Reads `group,value` CSV. Groups keep their order of first appearance.
    pub fn load_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(source);

        let headers = match reader.headers() {
            Ok(h) => h.clone(),
            Err(_) => return Err(Error::EmptyInput),
        };
        if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
            return Err(Error::EmptyInput);
        }
        if headers.len() != 2 || &headers[0] != "group" || &headers[1] != "value" {
            return Err(Error::MalformedInput(format!(
                "expected header `group,value`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }

        let mut labels: Vec<String> = Vec::new();
        let mut values: Vec<Vec<f64>> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for (row, record) in reader.records().enumerate() {
            // header is line 1
            let line = row + 2;
            let record = record.map_err(|e| Error::MalformedInput(format!("line {line}: {e}")))?;
            if record.len() != 2 {
                return Err(Error::MalformedInput(format!(
                    "line {line}: expected 2 fields, found {}",
                    record.len()
                )));
            }
            let value: f64 = record[1].parse().map_err(|_| Error::NonNumericValue {
                line,
                value: record[1].to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonNumericValue {
                    line,
                    value: record[1].to_string(),
                });
            }
            let slot = *index.entry(record[0].to_string()).or_insert_with(|| {
                labels.push(record[0].to_string());
                values.push(Vec::new());
                values.len() - 1
            });
            values[slot].push(value);
        }
        Self::new(labels, values)
    }

    pub fn group_labels(&self) -> &[String] {
        &self.labels
    }

    /// Row-per-group observations.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn group(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// `n_I`
    pub fn n_groups(&self) -> usize {
        self.values.len()
    }

    /// `n_J`
    pub fn n_reps(&self) -> usize {
        self.values[0].len()
    }

    /// `n = n_I * n_J`
    pub fn n(&self) -> usize {
        self.n_groups() * self.n_reps()
    }

    pub fn summarize(&self) -> GroupSummary {
        let n_j = self.n_reps() as f64;
        let group_means: Vec<f64> = self.values.iter().map(|g| g.iter().sum::<f64>() / n_j).collect();
        let grand_mean = self.values.iter().flatten().sum::<f64>() / self.n() as f64;
        GroupSummary {
            group_means,
            grand_mean,
        }
    }

    /// Applies `f` to every observation, keeping the layout.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = self.values.iter().map(|g| g.iter().map(|&v| f(v)).collect()).collect();
        Self::new(self.labels.clone(), values)
    }

    /// Renders back to `group,value` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,value\n");
        for (label, group) in self.labels.iter().zip(&self.values) {
            for v in group {
                out.push_str(&format!("{label},{v}\n"));
            }
        }
        out
    }
}

/// Travel times of an ultrasonic wave along six railway rails, three
/// measurements each (the classic `Rail` data).
pub fn rail() -> BalancedOneWayData {
    BalancedOneWayData::load_csv(RAIL_CSV.as_bytes()).expect("bundled rail data is valid")
}
