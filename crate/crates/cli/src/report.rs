//! The report every command produces. The JSON form is documented in the
//! README and is what `--json` prints, pretty-printed with keys in field
//! order.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// An instance of a theorem; a failure makes the command exit with 1.
    Instance,
    /// An answer to a question, either way is a valid outcome.
    Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub facts: Vec<Fact>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            seed: None,
            facts: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) {
        self.facts.push(Fact {
            key: key.into(),
            value: value.to_string(),
        });
    }

    fn check(&mut self, kind: CheckKind, name: impl Into<String>, holds: bool, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            kind,
            holds,
            witness,
        });
    }

    pub fn instance(&mut self, name: impl Into<String>, holds: bool, witness: Option<String>) {
        self.check(CheckKind::Instance, name, holds, witness);
    }

    pub fn verdict(&mut self, name: impl Into<String>, holds: bool, witness: Option<String>) {
        self.check(CheckKind::Verdict, name, holds, witness);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Some theorem instance failed.
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.kind == CheckKind::Instance && !c.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "ualg {}", self.command).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}").unwrap();
        }
        for f in &self.facts {
            writeln!(out, "{}: {}", f.key, f.value).unwrap();
        }
        for c in &self.checks {
            let tag = match (c.kind, c.holds) {
                (CheckKind::Instance, true) => "PASS",
                (CheckKind::Instance, false) => "FAIL",
                (CheckKind::Verdict, true) => "yes ",
                (CheckKind::Verdict, false) => "no  ",
            };
            match &c.witness {
                Some(w) => writeln!(out, "{tag} {} (witness: {w})", c.name).unwrap(),
                None => writeln!(out, "{tag} {}", c.name).unwrap(),
            }
        }
        for n in &self.notes {
            writeln!(out, "{n}").unwrap();
        }
        if let Some(ms) = self.elapsed_ms {
            writeln!(out, "elapsed: {ms} ms").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
