use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Result of one CLI command, renderable as text or JSON with the same content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub tolerances: Map<String, Value>,
    pub results: Map<String, Value>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            tolerances: Map::new(),
            results: Map::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Sectioned `key: value` listing. Nested objects flatten to dotted keys;
    /// arrays and scalars print as inline JSON, strings print bare.
    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (name, section) in self.sections() {
            out.push_str(name);
            out.push_str(":\n");
            for (key, value) in flatten(section) {
                out.push_str("  ");
                out.push_str(&key);
                out.push_str(": ");
                out.push_str(&render_value(&value));
                out.push('\n');
            }
        }
        out
    }

    fn sections(&self) -> [(&'static str, &Map<String, Value>); 3] {
        [
            ("inputs", &self.inputs),
            ("tolerances", &self.tolerances),
            ("results", &self.results),
        ]
    }

    /// Flattened `section.key -> value` view of the whole report.
    pub fn flattened(&self) -> BTreeMap<String, Value> {
        let mut out = BTreeMap::new();
        out.insert("command".to_string(), Value::String(self.command.clone()));
        for (name, section) in self.sections() {
            for (key, value) in flatten(section) {
                out.insert(format!("{name}.{key}"), value);
            }
        }
        out
    }
}

/// Flattens nested objects into dotted keys. Empty objects are kept as leaves.
pub fn flatten(map: &Map<String, Value>) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    flatten_into("", map, &mut out);
    out
}

fn flatten_into(prefix: &str, map: &Map<String, Value>, out: &mut Vec<(String, Value)>) {
    for (k, v) in map {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Object(inner) if !inner.is_empty() => flatten_into(&key, inner, out),
            other => out.push((key, other.clone())),
        }
    }
}

fn render_value(v: &Value) -> String {
    match v {
        // Bare unless the text would read back as some other JSON value.
        Value::String(s) if serde_json::from_str::<Value>(s).is_err() && !s.is_empty() => s.clone(),
        other => other.to_string(),
    }
}

/// Parses [`RunReport::to_text`] output back into the flattened view.
pub fn parse_text(text: &str) -> BTreeMap<String, Value> {
    let mut out = BTreeMap::new();
    let mut section = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("  ") {
            let (key, value) = rest.split_once(": ").unwrap_or((rest, ""));
            let value = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.to_string()));
            out.insert(format!("{section}.{key}"), value);
        } else if let Some(cmd) = line.strip_prefix("command: ") {
            out.insert("command".to_string(), Value::String(cmd.to_string()));
        } else if let Some(name) = line.strip_suffix(':') {
            section = name.to_string();
        }
    }
    out
}
