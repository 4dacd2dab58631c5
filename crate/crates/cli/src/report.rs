use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Validation failed but `--force-unvalidated` was given.
    Forced,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// A TSV-friendly table carried alongside the checks.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub body: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    pub verdict: Status,
}

/// Collects checks in declaration order.
pub struct Recorder {
    timing: bool,
    checks: Vec<Check>,
    tables: Vec<Table>,
}

impl Recorder {
    pub fn new(timing: bool) -> Self {
        Recorder { timing, checks: Vec::new(), tables: Vec::new() }
    }

    /// Runs `f` and records its status and witness under `name`.
    pub fn run<E>(&mut self, name: &str, f: impl FnOnce() -> Result<(Status, Value), E>) -> Result<(), E> {
        let start = Instant::now();
        let (status, witness) = f()?;
        let timing_ms = self.timing.then(|| (start.elapsed().as_secs_f64() * 1e6).round() / 1e3);
        self.checks.push(Check { name: name.to_string(), status, witness: Some(witness), timing_ms });
        Ok(())
    }

    pub fn table(&mut self, name: &str, body: String) {
        self.tables.push(Table { name: name.to_string(), body });
    }

    pub fn finish(self, config: Value) -> Report {
        let verdict = if self.checks.iter().any(|c| c.status == Status::Fail) { Status::Fail } else { Status::Pass };
        Report {
            tool: "superq",
            version: env!("CARGO_PKG_VERSION"),
            config,
            checks: self.checks,
            tables: self.tables,
            verdict,
        }
    }
}

pub fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `check status witness [timing]` rows, then each table under a `## name` line.
    pub fn to_tsv(&self) -> String {
        let timed = self.checks.iter().any(|c| c.timing_ms.is_some());
        let mut out = format!("# {} {}\tverdict={}\n", self.tool, self.version, status_word(self.verdict));
        out.push_str(if timed { "check\tstatus\twitness\ttiming_ms\n" } else { "check\tstatus\twitness\n" });
        for c in &self.checks {
            let w = c.witness.as_ref().map(|w| serde_json::to_string(w).expect("json")).unwrap_or_default();
            out.push_str(&format!("{}\t{}\t{}", c.name, status_word(c.status), w));
            if let Some(t) = c.timing_ms {
                out.push_str(&format!("\t{t}"));
            }
            out.push('\n');
        }
        for t in &self.tables {
            out.push_str(&format!("## {}\n{}", t.name, t.body));
            if !t.body.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Forced => "forced",
    }
}
