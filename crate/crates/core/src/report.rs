//! Uniform JSON check reports.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub window: i64,
    pub status: String,
    pub pass: bool,
    #[serde(flatten)]
    pub data: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, window: i64) -> Self {
        CheckReport {
            check: check.to_string(),
            window,
            status: "pass".into(),
            pass: true,
            data: Map::new(),
            witnesses: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.data
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn violation(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn witness(&mut self, value: impl Serialize) {
        self.witnesses.push(serde_json::to_value(value).expect("serializable"));
    }

    /// Marks the report failed without recording a message.
    pub fn fail(&mut self) {
        self.pass = false;
    }

    /// Sets `status`/`pass` from the recorded violations.
    pub fn finish(mut self) -> Self {
        self.pass = self.pass && self.violations.is_empty();
        self.status = if self.pass { "pass" } else { "fail" }.into();
        self
    }
}
