// SPDX-License-Identifier: MIT OR Apache-2.0

//! Header-checked CSV reading shared by the loaders.

use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use super::report::ValidationReport;
use super::IngestError;

pub(crate) struct Table {
    pub file: String,
    columns: HashMap<String, usize>,
    reader: csv::Reader<File>,
}

pub(crate) struct Row {
    pub line: u64,
    record: csv::StringRecord,
}

impl Row {
    pub fn get<'a>(&'a self, table: &Table, column: &str) -> &'a str {
        table.columns.get(column).and_then(|&i| self.record.get(i)).map(str::trim).unwrap_or("")
    }
}

pub(crate) fn file_label(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

impl Table {
    /// Opens `path` and checks that every `required` column is present.
    pub fn open(path: &Path, required: &[&str], report: &mut ValidationReport) -> Result<Table, IngestError> {
        let file = file_label(path);
        let handle = File::open(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
        let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(handle);
        let headers = reader
            .headers()
            .map_err(|e| IngestError::Fatal(report.fatal(&file, Some(1), format!("unreadable header: {e}"))))?;
        let columns: HashMap<String, usize> =
            headers.iter().enumerate().map(|(i, h)| (h.trim().trim_start_matches('\u{feff}').to_string(), i)).collect();
        let missing: Vec<&str> = required.iter().copied().filter(|c| !columns.contains_key(*c)).collect();
        if !missing.is_empty() {
            return Err(IngestError::Fatal(report.fatal(
                &file,
                Some(1),
                format!("missing column(s): {}", missing.join(", ")),
            )));
        }
        report.stats_mut(&file);
        Ok(Table { file, columns, reader })
    }

    pub fn has_column(&self, column: &str) -> bool {
        self.columns.contains_key(column)
    }

    /// Reads every data row. Malformed rows are rejected with a warning.
    pub fn rows(&mut self, report: &mut ValidationReport) -> Vec<Row> {
        let mut out = Vec::new();
        let mut record = csv::StringRecord::new();
        loop {
            let line = self.reader.position().line() + 1;
            match self.reader.read_record(&mut record) {
                Ok(false) => break,
                Ok(true) => {
                    report.stats_mut(&self.file).rows_read += 1;
                    if record.iter().all(|f| f.is_empty()) {
                        report.stats_mut(&self.file).rows_read -= 1;
                        continue;
                    }
                    out.push(Row { line: record.position().map(|p| p.line()).unwrap_or(line), record: record.clone() });
                }
                Err(e) => {
                    report.stats_mut(&self.file).rows_read += 1;
                    self.reject(report, line, format!("malformed row: {e}"));
                    if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn reject(&self, report: &mut ValidationReport, line: u64, message: impl Into<String>) {
        report.stats_mut(&self.file).rows_rejected += 1;
        report.warn(&self.file, Some(line), message);
    }

    /// Records a fatal row issue; the row also counts as rejected.
    pub fn fatal(&self, report: &mut ValidationReport, line: u64, message: impl Into<String>) -> IngestError {
        report.stats_mut(&self.file).rows_rejected += 1;
        IngestError::Fatal(report.fatal(&self.file, Some(line), message))
    }
}
