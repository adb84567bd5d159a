use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Output {
    pub value: Value,
    pub unit: &'static str,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub cutoffs: BTreeMap<String, Value>,
    pub tolerances: Value,
    pub tail_estimates: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub group: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Output>,
    pub diagnostics: Diagnostics,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: &str, group: &str) -> Self {
        Self {
            command: command.into(),
            group: group.into(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            diagnostics: Diagnostics::default(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn input(&mut self, name: &str, v: impl Serialize) {
        self.inputs.insert(name.into(), json!(v));
    }

    pub fn out(&mut self, name: &str, v: impl Serialize, unit: &'static str, provenance: &'static str) {
        self.outputs.insert(name.into(), Output { value: json!(v), unit, provenance });
    }

    pub fn complex(&mut self, name: &str, z: Complex64, provenance: &'static str) {
        self.out(name, json!({"re": z.re, "im": z.im}), "", provenance);
    }

    pub fn cutoff(&mut self, name: &str, v: impl Serialize) {
        self.diagnostics.cutoffs.insert(name.into(), json!(v));
    }

    pub fn tail(&mut self, name: &str, v: f64) {
        self.diagnostics.tail_estimates.insert(name.into(), v);
    }

    pub fn note(&mut self, name: &str, v: impl Serialize) {
        self.diagnostics.notes.insert(name.into(), json!(v));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per scalar; complex values split into `.re` and `.im` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,value,unit,provenance\n");
        for (name, o) in &self.outputs {
            match &o.value {
                Value::Object(m) if m.contains_key("re") && m.contains_key("im") => {
                    for part in ["re", "im"] {
                        row(&mut s, &format!("{name}.{part}"), &m[part], o);
                    }
                }
                v => row(&mut s, name, v, o),
            }
        }
        s
    }
}

fn row(s: &mut String, name: &str, v: &Value, o: &Output) {
    let text = match v {
        Value::String(t) => t.clone(),
        other => other.to_string(),
    };
    let _ = writeln!(s, "{},{},{},{}", field(name), field(&text), field(o.unit), field(o.provenance));
}

fn field(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}
