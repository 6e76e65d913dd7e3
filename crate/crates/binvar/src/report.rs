//! Command results: a JSON document for machines, text for people, and an
//! outcome that fixes the exit code.

use serde::Serialize;
use serde_json::{json, Map, Value};

use binvar_core::verify::CheckLine;

use crate::formats::SCHEMA;

/// Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
/// 3 a budget ran out before a verdict.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Incomplete,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    /// A failure outranks an incomplete run, which outranks a pass.
    pub fn and(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Incomplete, _) | (_, Incomplete) => Incomplete,
            _ => Pass,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => EXIT_OK,
            Outcome::Fail => EXIT_FAILED,
            Outcome::Incomplete => EXIT_BUDGET,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Incomplete => "INCOMPLETE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub outcome: Outcome,
    pub body: Map<String, Value>,
    pub text: String,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            outcome: Outcome::Pass,
            body: Map::new(),
            text: String::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.body.insert(
            key.to_string(),
            serde_json::to_value(value).expect("report values serialize"),
        );
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        self.text.push_str(text.as_ref());
        self.text.push('\n');
    }

    pub fn record(&mut self, outcome: Outcome) {
        self.outcome = self.outcome.and(outcome);
    }

    /// Adds a named check to the `checks` list and the text output.
    pub fn check(&mut self, c: &CheckLine) {
        self.record(Outcome::from_bool(c.passed));
        self.line(format!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
        let entry = json!({"name": c.name, "passed": c.passed, "detail": c.detail});
        match self.body.get_mut("checks") {
            Some(Value::Array(list)) => list.push(entry),
            _ => {
                self.body.insert("checks".into(), Value::Array(vec![entry]));
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA));
        doc.insert("command".into(), json!(self.command));
        doc.insert(
            "outcome".into(),
            serde_json::to_value(self.outcome).expect("enum serializes"),
        );
        for (k, v) in &self.body {
            doc.insert(k.clone(), v.clone());
        }
        Value::Object(doc)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json renders");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcomes_combine() {
        use Outcome::*;
        assert_eq!(Pass.and(Incomplete), Incomplete);
        assert_eq!(Incomplete.and(Fail), Fail);
        assert_eq!(Pass.and(Pass).exit_code(), 0);
        assert_eq!(Incomplete.exit_code(), 3);
    }

    #[test]
    fn json_has_schema_and_checks() {
        let mut r = Report::new("demo");
        r.check(&CheckLine::new("one", true, "ok"));
        r.check(&CheckLine::new("two", false, "no"));
        let v = r.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["outcome"], "fail");
        assert_eq!(v["checks"].as_array().unwrap().len(), 2);
        assert!(r.text.contains("FAIL two: no"));
    }
}
