use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "ncforms-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

impl Assertion {
    pub fn eq<T: std::fmt::Debug + PartialEq>(name: impl Into<String>, expected: T, computed: T) -> Assertion {
        Assertion {
            name: name.into(),
            passed: expected == computed,
            expected: format!("{expected:?}"),
            computed: format!("{computed:?}"),
        }
    }

    pub fn holds(name: impl Into<String>, computed: bool) -> Assertion {
        Assertion::eq(name, true, computed)
    }
}

/// What a command hands back before rendering.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub lines: Vec<String>,
    pub assertions: Vec<Assertion>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub config: Value,
    pub results: Value,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

/// Every JSON number becomes a string.
pub fn stringify(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify(v))).collect()),
        other => other,
    }
}

impl ReportDocument {
    pub fn new(command: Vec<String>, config: Value, outcome: Outcome) -> ReportDocument {
        let passed = outcome.passed();
        ReportDocument {
            schema: SCHEMA,
            command,
            config: stringify(config),
            results: stringify(outcome.results),
            assertions: outcome.assertions,
            passed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn render_text(outcome: &Outcome) -> String {
    let mut out = String::new();
    for l in &outcome.lines {
        out.push_str(l);
        out.push('\n');
    }
    if !outcome.assertions.is_empty() {
        if !outcome.lines.is_empty() {
            out.push('\n');
        }
        for a in &outcome.assertions {
            if a.passed {
                out.push_str(&format!("PASS  {}\n", a.name));
            } else {
                out.push_str(&format!("FAIL  {}: expected {}, computed {}\n", a.name, a.expected, a.computed));
            }
        }
        let ok = outcome.assertions.iter().filter(|a| a.passed).count();
        out.push_str(&format!("{ok} of {} assertions passed\n", outcome.assertions.len()));
    }
    out
}
