//! Structured check results shared by every module and the CLI.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Truncated,
}

/// One violated identity or one noteworthy observation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    /// Which identity was checked, e.g. `relation (2)`.
    pub check: String,
    /// Arities and indices of the failing instance.
    pub location: String,
    /// First differing matrix entry or other diagnostic.
    pub detail: String,
}

/// Per-arity dimensions, one row per stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub title: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub rows: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub status: Status,
    /// Number of identity instances examined.
    pub checked: usize,
    pub findings: Vec<Finding>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<DimTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Report {
            status: Status::Pass,
            checked: 0,
            findings: vec![],
            tables: vec![],
            notes: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Records one checked instance; a mismatch turns the report into a failure.
    pub fn record(
        &mut self,
        ok: bool,
        check: &str,
        location: impl FnOnce() -> String,
        detail: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        if !ok {
            self.status = Status::Fail;
            self.findings.push(Finding {
                check: check.into(),
                location: location(),
                detail: detail(),
            });
        }
    }

    pub fn fail(&mut self, check: &str, location: String, detail: String) {
        self.record(false, check, || location, || detail);
    }

    /// Marks a passing report as valid only within a truncation.
    pub fn mark_truncated(&mut self, note: String) {
        if self.status == Status::Pass {
            self.status = Status::Truncated;
        }
        self.notes.push(note);
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        if other.status == Status::Fail {
            self.status = Status::Fail;
        } else if other.status == Status::Truncated && self.status == Status::Pass {
            self.status = Status::Truncated;
        }
        self.findings.extend(other.findings);
        self.tables.extend(other.tables);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for DimTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let w0 = self
            .row_labels
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max(4);
        let widths: Vec<usize> = (0..self.col_labels.len())
            .map(|c| {
                let body = self
                    .rows
                    .iter()
                    .map(|r| r.get(c).map(|x| x.to_string().len()).unwrap_or(0));
                body.chain(std::iter::once(self.col_labels[c].len()))
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        write!(f, "{:w0$}", "")?;
        for (c, l) in self.col_labels.iter().enumerate() {
            write!(f, "  {:>w$}", l, w = widths[c])?;
        }
        writeln!(f)?;
        for (r, row) in self.rows.iter().enumerate() {
            write!(f, "{:w0$}", self.row_labels[r])?;
            for (c, x) in row.iter().enumerate() {
                write!(f, "  {:>w$}", x, w = widths[c])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Truncated => "truncated",
        };
        writeln!(f, "status: {status} ({} instances checked)", self.checked)?;
        for x in &self.findings {
            writeln!(f, "  {} at {}: {}", x.check, x.location, x.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        for t in &self.tables {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Describes the first entry where two equally shaped matrices differ.
pub fn first_difference(a: &crate::exactcat::LinMap, b: &crate::exactcat::LinMap) -> String {
    if a.rows() != b.rows() || a.ncols() != b.ncols() {
        return format!(
            "shape {}x{} vs {}x{}",
            a.rows(),
            a.ncols(),
            b.rows(),
            b.ncols()
        );
    }
    for c in 0..a.ncols() {
        if a.column(c) != b.column(c) {
            let rows: std::collections::BTreeSet<usize> =
                a.column(c).iter().chain(b.column(c)).map(|e| e.0).collect();
            for r in rows {
                let (x, y) = (a.entry(r, c), b.entry(r, c));
                if x != y {
                    return format!("entry ({r},{c}): {x} vs {y}");
                }
            }
        }
    }
    "equal".into()
}
