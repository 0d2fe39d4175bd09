//! Suite outcomes, pass/fail checks and schema-tagged CSV tables.

use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One assertion: `value` compared against `limit`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub relation: Relation,
    /// Informational checks are reported but never fail a run.
    pub hard: bool,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, relation: Relation::AtMost, hard: true, passed: value <= limit }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, relation: Relation::AtLeast, hard: true, passed: value >= limit }
    }

    pub fn informational(mut self) -> Self {
        self.hard = false;
        self
    }

    fn line(&self) -> String {
        let verdict = match (self.passed, self.hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        format!("  [{verdict}] {}: {:.6e} {op} {:.6e}", self.name, self.value, self.limit)
    }
}

/// A CSV table; written with a `# schema=theta-shift/<name>/v1` first line.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub name: String,
    /// Extra `key=value` pairs appended to the schema line.
    pub attrs: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            attrs: String::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn schema_line(&self) -> String {
        if self.attrs.is_empty() {
            format!("# schema=theta-shift/{}/v1", self.name)
        } else {
            format!("# schema=theta-shift/{}/v1 {}", self.name, self.attrs)
        }
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.schema_line())?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Column index by header name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parsed numeric column; unparsable cells are skipped.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let Some(j) = self.column(name) else { return Vec::new() };
        self.rows.iter().filter_map(|r| r[j].parse().ok()).collect()
    }
}

/// Outcome of one suite: checks, named metrics, tables and notes.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    /// Short identifier, used in file names.
    pub suite: String,
    /// The statement under test, as shown in the summary line.
    pub statement: String,
    pub checks: Vec<Check>,
    pub metrics: Vec<(String, f64)>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, statement: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            statement: statement.into(),
            checks: Vec::new(),
            metrics: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|p| p.1)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// True when every hard check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.hard)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{verdict} {} ({}) in {:.2?}", self.suite, self.statement, self.elapsed);
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.line());
        }
        for (n, v) in &self.metrics {
            let _ = writeln!(s, "  {n} = {v:.9e}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }

    /// Writes `<suite>_<table>.csv` for each table and `<suite>_summary.txt`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut files = Vec::new();
        for t in &self.tables {
            let p = dir.join(format!("{}_{}.csv", self.suite, t.name));
            t.write(fs::File::create(&p)?)?;
            files.push(p);
        }
        let p = dir.join(format!("{}_summary.txt", self.suite));
        fs::write(&p, self.summary())?;
        files.push(p);
        Ok(files)
    }
}

pub(crate) fn sci(v: f64) -> String {
    format!("{v:.12e}")
}
