// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::FoodGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Fatal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    pub file: String,
    /// 1-based line number in the file, header included.
    pub row: Option<u64>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Fatal => "fatal",
        };
        match self.row {
            Some(r) => write!(f, "{sev}: {}:{r}: {}", self.file, self.message),
            None => write!(f, "{sev}: {}: {}", self.file, self.message),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileStats {
    pub rows_read: u64,
    pub rows_rejected: u64,
}

/// Per-location availability of the guideline groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationCoverage {
    pub location_id: String,
    /// Groups with fewer priced items than the guideline item count.
    pub unsatisfiable: Vec<FoodGroup>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub inputs: BTreeMap<String, FileStats>,
    pub issues: Vec<Issue>,
    pub unmatched_items: Vec<String>,
    pub locations: Vec<LocationCoverage>,
}

impl ValidationReport {
    pub fn has_fatal(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Fatal)
    }

    pub fn fatal_count(&self) -> usize {
        self.issues.iter().filter(|i| i.severity == Severity::Fatal).count()
    }

    pub fn warning_count(&self) -> usize {
        self.issues.iter().filter(|i| i.severity == Severity::Warning).count()
    }

    pub fn warn(&mut self, file: &str, row: Option<u64>, message: impl Into<String>) {
        self.push(Severity::Warning, file, row, message);
    }

    pub fn fatal(&mut self, file: &str, row: Option<u64>, message: impl Into<String>) -> Issue {
        self.push(Severity::Fatal, file, row, message)
    }

    fn push(&mut self, severity: Severity, file: &str, row: Option<u64>, message: impl Into<String>) -> Issue {
        let issue = Issue { severity, file: file.to_string(), row, message: message.into() };
        self.issues.push(issue.clone());
        issue
    }

    pub(crate) fn stats_mut(&mut self, file: &str) -> &mut FileStats {
        self.inputs.entry(file.to_string()).or_default()
    }

    /// Appends another report's findings.
    pub fn merge(&mut self, other: ValidationReport) {
        for (k, v) in other.inputs {
            let s = self.inputs.entry(k).or_default();
            s.rows_read += v.rows_read;
            s.rows_rejected += v.rows_rejected;
        }
        self.issues.extend(other.issues);
        self.unmatched_items.extend(other.unmatched_items);
        self.unmatched_items.sort();
        self.unmatched_items.dedup();
        self.locations.extend(other.locations);
        self.locations.sort_by(|a, b| a.location_id.cmp(&b.location_id));
    }
}
