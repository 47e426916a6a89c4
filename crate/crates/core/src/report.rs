//! Uniform JSON envelope for command-line runs.
//!
//! Every subcommand emits one [`RunReport`]: a fixed header (schema tag,
//! engine version, command echo, inputs) followed by the command-specific
//! payload. Serialization is deterministic: struct fields keep declaration
//! order and both maps are sorted, so identical inputs produce identical
//! bytes. Wall-clock fields stay out of the report unless explicitly
//! requested, for the same reason.

use crate::{SCHEMA_VERSION, VERSION};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: String,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outcome: String,
    /// Command-specific fields, spliced into the top level.
    #[serde(flatten)]
    pub payload: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            version: VERSION.to_string(),
            command: command.to_string(),
            inputs: BTreeMap::new(),
            outcome: String::new(),
            payload: BTreeMap::new(),
            millis: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).expect("input serializes");
        self.inputs.insert(key.to_string(), v);
        self
    }

    pub fn outcome(mut self, outcome: &str) -> Self {
        self.outcome = outcome.to_string();
        self
    }

    pub fn payload(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).expect("payload serializes");
        self.payload.insert(key.to_string(), v);
        self
    }

    pub fn millis(mut self, millis: Option<u64>) -> Self {
        self.millis = millis;
        self
    }

    /// Pretty JSON with a trailing newline, ready for stdout.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
