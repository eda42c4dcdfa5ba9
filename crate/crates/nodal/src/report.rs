//! Reports: the single output document of every command.

use nodal_core::classifier::ClassificationVerdict;
use nodal_core::trace::Trace;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::json;

pub const TOOL_VERSION: &str = concat!("nodal ", env!("CARGO_PKG_VERSION"));

/// Keys owned by the report itself; command results may not use them.
pub const RESERVED: [&str; 6] = ["title", "inputs", "trace", "verdict", "tool_version", "content_hash"];

/// A command's output. Result fields sit at the top level next to the
/// metadata so `{"det": "-2"}` style answers stay one lookup away.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub title: String,
    pub inputs: Map<String, Value>,
    pub result: Map<String, Value>,
    pub trace: Value,
    pub verdict: Value,
}

impl Report {
    pub fn new(title: impl Into<String>, inputs: Map<String, Value>) -> Self {
        Report {
            title: title.into(),
            inputs,
            result: Map::new(),
            trace: Value::Array(Vec::new()),
            verdict: Value::Null,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        assert!(!RESERVED.contains(&key), "{key} is a reserved report key");
        self.result.insert(key.to_string(), value.into());
        self
    }

    pub fn with_trace(mut self, trace: &Trace) -> Self {
        self.trace = json::trace(trace);
        self
    }

    pub fn with_verdict(mut self, v: &ClassificationVerdict) -> Self {
        self.trace = json::trace(&v.trace);
        self.verdict = json::verdict(v);
        self
    }

    fn body(&self) -> Map<String, Value> {
        let mut m = self.result.clone();
        m.insert("title".into(), Value::String(self.title.clone()));
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        m.insert("trace".into(), self.trace.clone());
        m.insert("verdict".into(), self.verdict.clone());
        m.insert("tool_version".into(), Value::String(TOOL_VERSION.into()));
        m
    }

    /// SHA-256 of the compact serialization of everything except the hash.
    /// Object keys are sorted, so equal reports hash equally.
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(&Value::Object(self.body())).expect("JSON values serialize");
        format!("{:x}", Sha256::digest(&bytes))
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.body();
        m.insert("content_hash".into(), Value::String(self.content_hash()));
        Value::Object(m)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut inputs = Map::new();
        inputs.insert("gram".into(), json!([["-2"]]));
        let mut r = Report::new("determinant", inputs);
        r.set("det", "-2");
        r
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = sample();
        assert_eq!(a.content_hash(), sample().content_hash());
        assert_eq!(a.content_hash().len(), 64);
        let mut b = sample();
        b.set("det", "2");
        assert_ne!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn result_fields_are_top_level() {
        let v = sample().to_json();
        assert_eq!(v["det"], "-2");
        assert_eq!(v["verdict"], Value::Null);
        assert_eq!(v["tool_version"], TOOL_VERSION);
    }

    #[test]
    #[should_panic(expected = "reserved")]
    fn reserved_keys_are_rejected() {
        sample().set("trace", 1);
    }
}
