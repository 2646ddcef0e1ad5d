use std::fmt::Write as _;

use lieconf::error::FailedInstance;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: Option<String>,
    pub suites: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<usize>,
    pub findings: Vec<FailedInstance>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub result: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl Report {
    pub fn new(command: &str, input_digest: Option<String>) -> Self {
        Report {
            command: command.to_string(),
            input_digest,
            suites: Vec::new(),
            status: Status::Pass,
            checked: None,
            skipped: None,
            findings: Vec::new(),
            result: Vec::new(),
            error: None,
            timing_ms: None,
        }
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if let Some(d) = &self.input_digest {
            let _ = writeln!(s, "input: {d}");
        }
        if !self.suites.is_empty() {
            let _ = writeln!(s, "suites: {}", self.suites.join(", "));
        }
        let _ = writeln!(s, "status: {}", self.status.as_str());
        if let Some(n) = self.checked {
            let _ = writeln!(s, "checked: {n}");
        }
        if let Some(n) = self.skipped {
            let _ = writeln!(s, "skipped: {n}");
        }
        if !self.findings.is_empty() {
            let _ = writeln!(s, "findings: {}", self.findings.len());
            for f in &self.findings {
                let _ = writeln!(s, "  {} ({}): {}", f.axiom, f.tuple.join(", "), f.residual);
            }
        }
        if !self.result.is_empty() {
            let _ = writeln!(s, "result:");
            for line in &self.result {
                let _ = writeln!(s, "  {line}");
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(s, "timing: {ms} ms");
        }
        s
    }
}
