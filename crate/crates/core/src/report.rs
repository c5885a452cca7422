//! Deterministic JSON reports: sorted keys, canonical rational strings,
//! checks kept in the order they were run.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    fields: Map<String, Value>,
    checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.set("command", command);
        r.set("version", env!("CARGO_PKG_VERSION"));
        r
    }

    pub fn set<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.fields.insert(key.to_string(), v);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(Check { name: name.to_string(), status: status(pass), witness: None });
    }

    /// Records a check; the witness is kept only on failure.
    pub fn check_with<T: Serialize>(&mut self, name: &str, pass: bool, witness: T) {
        let witness = (!pass).then(|| serde_json::to_value(witness).expect("witness serializes"));
        self.checks.push(Check { name: name.to_string(), status: status(pass), witness });
    }

    /// Records a check whose detail is always kept.
    pub fn check_detail<T: Serialize>(&mut self, name: &str, pass: bool, detail: T) {
        let witness = Some(serde_json::to_value(detail).expect("detail serializes"));
        self.checks.push(Check { name: name.to_string(), status: status(pass), witness });
    }

    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
        let mut fields = other.fields;
        fields.remove("command");
        fields.remove("version");
        if !fields.is_empty() {
            self.fields.insert(prefix.to_string(), Value::Object(fields));
        }
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_value(&self) -> Value {
        let mut m = self.fields.clone();
        m.insert("checks".into(), serde_json::to_value(&self.checks).expect("checks serialize"));
        m.insert("passed".into(), Value::Bool(self.passed()));
        canonical(Value::Object(m))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// Rebuilds every object with keys in sorted order, whatever map
/// implementation serde_json was compiled with.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sorted_and_stable() {
        let mut r = Report::new("alg");
        r.set("zeta", 1);
        r.set("alpha", vec![1, 2]);
        r.check("unit", true);
        r.check_with("assoc", false, (0, 1, 2));
        let s = r.to_json();
        assert_eq!(s, r.clone().to_json());
        let a = s.find("\"alpha\"").unwrap();
        let z = s.find("\"zeta\"").unwrap();
        assert!(a < z);
        assert!(!r.passed());
        assert!(s.contains("\"witness\""));
        assert!(s.ends_with("}\n"));
    }
}
