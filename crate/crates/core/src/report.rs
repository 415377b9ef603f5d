use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    EvidenceOnly,
}

/// Outcome of a verification routine: a status plus human-readable lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub status: Status,
    pub lines: Vec<String>,
}

impl Default for CheckReport {
    fn default() -> Self {
        CheckReport::new()
    }
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport { status: Status::Pass, lines: Vec::new() }
    }

    /// A report whose positive outcome is only bounded-search evidence.
    pub fn evidence() -> Self {
        CheckReport { status: Status::EvidenceOnly, lines: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn fail(&mut self, line: impl Into<String>) {
        self.status = Status::Fail;
        self.lines.push(format!("FAIL: {}", line.into()));
    }

    /// Records a failure with `msg` unless `cond` holds. Returns `cond`.
    pub fn require(&mut self, cond: bool, msg: impl FnOnce() -> String) -> bool {
        if !cond {
            self.fail(msg());
        }
        cond
    }

    pub fn merge(&mut self, other: CheckReport) {
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.lines.extend(other.lines);
    }

    pub fn details(&self) -> String {
        self.lines.join("; ")
    }
}
