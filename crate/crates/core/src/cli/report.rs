use std::fmt::Write as _;

use serde::Serialize;

use crate::diag::Diagnostics;
use crate::error::Error;
use crate::exactlin::Mat;

/// Outcome of one section; ordered from best to worst.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Refused,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Refused => "REFUSED",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub matrix: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub status: Status,
    pub facts: Vec<Fact>,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Section {
        Section {
            name: name.into(),
            status: Status::Pass,
            facts: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.facts.push(Fact { key: key.into(), value: value.to_string() });
        self
    }

    pub fn witness(&mut self, label: impl Into<String>, m: &Mat) {
        self.witnesses.push(Witness { label: label.into(), matrix: m.to_string() });
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
        self.status = Status::Fail;
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn absorb(&mut self, d: Diagnostics) {
        if !d.ok() {
            self.status = Status::Fail;
        }
        self.failures.extend(d.failures);
        self.notes.extend(d.notes);
    }

    pub fn refused(name: impl Into<String>, why: &str) -> Section {
        let mut s = Section::new(name);
        s.status = Status::Refused;
        s.note(format!("hypothesis refused: {why}"));
        s
    }

    /// A section for an error raised while the check ran.
    pub fn from_error(name: impl Into<String>, e: &Error) -> Section {
        match e {
            Error::HypothesisRefused(why) => Section::refused(name, why),
            other => {
                let mut s = Section::new(name);
                s.fail(other.to_string());
                s
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub scenario: String,
    pub status: Status,
    pub exit_code: i32,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str, scenario: &str, sections: Vec<Section>) -> Report {
        let status = sections.iter().map(|s| s.status).max().unwrap_or(Status::Pass);
        let exit_code = match status {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Refused => 3,
        };
        Report { command: command.into(), scenario: scenario.into(), status, exit_code, sections }
    }

    /// Plain text; witnesses only when `verbose`.
    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "phl {} ({})", self.command, self.scenario);
        for s in &self.sections {
            let _ = writeln!(out, "[{}] {}", s.status.label(), s.name);
            for f in &s.facts {
                let _ = writeln!(out, "    {}: {}", f.key, f.value);
            }
            for f in &s.failures {
                let _ = writeln!(out, "    failed: {f}");
            }
            for n in &s.notes {
                let _ = writeln!(out, "    note: {n}");
            }
            if verbose {
                for w in &s.witnesses {
                    let _ = writeln!(out, "    {} = {}", w.label, w.matrix);
                }
            }
        }
        let _ = writeln!(out, "result: {} (exit {})", self.status.label(), self.exit_code);
        out
    }

    /// The same content as [`Report::to_text`] as a JSON tree.
    pub fn to_json(&self, verbose: bool) -> String {
        let mut r = self.clone();
        if !verbose {
            for s in &mut r.sections {
                s.witnesses.clear();
            }
        }
        serde_json::to_string_pretty(&r).expect("reports serialize") + "\n"
    }
}
