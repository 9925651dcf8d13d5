//! Report assembly and emission. Machine format is line-delimited JSON with
//! every float rounded to 9 significant digits; keys are emitted in sorted
//! order, so identical inputs and seeds produce byte-identical output.

use serde_json::{Map, Value};

/// Rounds to 9 significant decimal digits.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor();
    let factor = 10f64.powf(8.0 - magnitude);
    (x * factor).round() / factor
}

/// JSON value for a float; infinities become the strings "inf"/"-inf"
/// (JSON has no literals for them).
pub fn num(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::String("inf".into())
    } else if x == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        serde_json::json!(sig9(x))
    }
}

/// One output document: a flat map of values plus input provenance.
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::String(command.into()));
        fields.insert("seed".into(), serde_json::json!(seed));
        Report { fields }
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.into(), value);
        self
    }

    pub fn set_num(&mut self, key: &str, value: f64) -> &mut Self {
        self.set(key, num(value))
    }

    pub fn set_str(&mut self, key: &str, value: &str) -> &mut Self {
        self.set(key, Value::String(value.into()))
    }

    pub fn set_bool(&mut self, key: &str, value: bool) -> &mut Self {
        self.set(key, Value::Bool(value))
    }

    pub fn set_usize(&mut self, key: &str, value: usize) -> &mut Self {
        self.set(key, serde_json::json!(value))
    }

    pub fn set_inputs(&mut self, inputs: &[(String, String)]) -> &mut Self {
        let list: Vec<Value> = inputs
            .iter()
            .map(|(path, digest)| {
                let mut entry = Map::new();
                entry.insert("path".into(), Value::String(path.clone()));
                entry.insert("digest".into(), Value::String(digest.clone()));
                Value::Object(entry)
            })
            .collect();
        self.set("inputs", Value::Array(list))
    }

    /// One line of JSON (sorted keys via serde_json's BTreeMap backend).
    pub fn machine_line(&self) -> String {
        serde_json::to_string(&Value::Object(self.fields.clone())).expect("serialization")
    }

    /// Plain key = value lines for terminals.
    pub fn human_lines(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            let rendered = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{key} = {rendered}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_rounds_to_nine_digits() {
        assert_eq!(sig9(0.8535533905932737), 0.853553391);
        assert_eq!(sig9(2.0), 2.0);
        assert_eq!(sig9(0.0), 0.0);
        assert_eq!(sig9(1.23456789012e-7), 1.23456789e-7);
        assert_eq!(sig9(-0.8535533905932737), -0.853553391);
        assert!(sig9(f64::INFINITY).is_infinite());
    }

    #[test]
    fn machine_line_is_single_json_object() {
        let mut r = Report::new("entropy", 7);
        r.set_num("bits", 2.0);
        let line = r.machine_line();
        let parsed: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(parsed["command"], "entropy");
        assert_eq!(parsed["bits"], 2.0);
        assert!(!line.contains('\n'));
    }

    #[test]
    fn infinities_become_strings() {
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(num(f64::NEG_INFINITY), Value::String("-inf".into()));
    }
}
