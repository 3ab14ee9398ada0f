//! Command outcomes: a human-readable table and a machine-readable block
//! that mirrors the document format. Machine output is built exclusively
//! from ordered collections, so identical inputs produce identical bytes.

use std::fmt::Display;

/// Process exit classes: success, mathematical failure (with witness),
/// input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Success,
    MathFailure,
    InputError,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        match self {
            ExitClass::Success => 0,
            ExitClass::MathFailure => 1,
            ExitClass::InputError => 2,
        }
    }
}

/// Rendered result of one command invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub human: String,
    pub machine: String,
    pub exit: ExitClass,
}

/// Incremental builder for the two report renderings.
pub struct ReportBuilder {
    human: String,
    machine: String,
}

impl ReportBuilder {
    pub fn new(command: &str) -> Self {
        ReportBuilder {
            human: String::new(),
            machine: format!("report {command}\n"),
        }
    }

    /// Key/value pair emitted to the machine block only.
    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.machine.push_str(&format!("  {key} {value}\n"));
        self
    }

    /// Line emitted to the human rendering only.
    pub fn human(&mut self, line: impl Display) -> &mut Self {
        self.human.push_str(&format!("{line}\n"));
        self
    }

    /// Line emitted to both renderings (indented in the machine block).
    pub fn both(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.kv(key, &value);
        self.human_kv(key, value)
    }

    pub fn human_kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.human.push_str(&format!("{key}: {value}\n"));
        self
    }

    pub fn finish(mut self, exit: ExitClass) -> Outcome {
        self.machine.push_str("end\n");
        Outcome {
            human: self.human,
            machine: self.machine,
            exit,
        }
    }
}

/// Verdict of one verify-all row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        })
    }
}

/// One row of a verify-all matrix.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub suite: &'static str,
    pub check: String,
    pub subject: String,
    pub status: Status,
    pub detail: String,
}

impl CheckRow {
    pub fn pass(suite: &'static str, check: &str, subject: &str, detail: impl Display) -> Self {
        CheckRow {
            suite,
            check: check.to_string(),
            subject: subject.to_string(),
            status: Status::Pass,
            detail: detail.to_string(),
        }
    }

    pub fn fail(suite: &'static str, check: &str, subject: &str, detail: impl Display) -> Self {
        CheckRow {
            suite,
            check: check.to_string(),
            subject: subject.to_string(),
            status: Status::Fail,
            detail: detail.to_string(),
        }
    }

    pub fn skip(suite: &'static str, check: &str, subject: &str, detail: impl Display) -> Self {
        CheckRow {
            suite,
            check: check.to_string(),
            subject: subject.to_string(),
            status: Status::Skip,
            detail: detail.to_string(),
        }
    }

    pub fn of(
        suite: &'static str,
        check: &str,
        subject: &str,
        ok: bool,
        detail: impl Display,
    ) -> Self {
        if ok {
            CheckRow::pass(suite, check, subject, detail)
        } else {
            CheckRow::fail(suite, check, subject, detail)
        }
    }
}
