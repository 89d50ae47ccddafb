use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Machine-readable result of one command. Everything but `timing` is deterministic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub computation: String,
    pub inputs: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub result: Value,
    #[serde(default)]
    pub timing: Timing,
}

impl Report {
    pub fn new(computation: &str, inputs: Value, result: Value) -> Self {
        Report { computation: computation.into(), inputs, method: None, result, timing: Timing::default() }
    }

    pub fn with_method(mut self, method: &str) -> Self {
        self.method = Some(method.into());
        self
    }

    /// Equality with the timing block ignored.
    pub fn same_payload(&self, other: &Report) -> bool {
        self.computation == other.computation && self.inputs == other.inputs && self.method == other.method && self.result == other.result
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = self.computation.clone();
        if let Some(m) = &self.method {
            let _ = write!(out, " [{m}]");
        }
        out.push('\n');
        text_lines(&self.result, 1, &mut out);
        let _ = writeln!(out, "  ({:.1} ms)", self.timing.elapsed_ms);
        out
    }
}

fn text_lines(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text_lines(x, indent + 1, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", compact(x));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", compact(other));
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// An integer as a JSON number when it fits in `i64`, else as a decimal string.
pub fn big(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

pub fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}
