//! Verification reports and their text/JSON serializations.

use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        }
    }

    /// Process exit code for an overall status.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }
}

/// Outcome of one relation, with per-generator residuals on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub name: String,
    pub status: Status,
    /// `(where, residual)` for every failing generator or sample.
    pub failures: Vec<(String, String)>,
    pub note: Option<String>,
}

impl RelationReport {
    pub fn pass(name: &str) -> Self {
        RelationReport {
            name: name.to_string(),
            status: Status::Pass,
            failures: Vec::new(),
            note: None,
        }
    }

    pub fn fail(name: &str, at: &str, residual: String) -> Self {
        RelationReport {
            name: name.to_string(),
            status: Status::Fail,
            failures: vec![(at.to_string(), residual)],
            note: None,
        }
    }

    pub fn inconclusive(name: &str, note: &str) -> Self {
        RelationReport {
            name: name.to_string(),
            status: Status::Inconclusive,
            failures: Vec::new(),
            note: Some(note.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub suite: String,
    pub convention: String,
    pub gauge: String,
    pub relations: Vec<RelationReport>,
    pub seed: Option<u64>,
    /// `(label, sha256 hex)` of every input file or built-in table used.
    pub inputs: Vec<(String, String)>,
    /// Extra `(key, value)` settings echoed into the report.
    pub settings: Vec<(String, String)>,
    /// Wall-clock time; kept out of serialized output so reports stay byte-identical.
    pub duration: Option<Duration>,
}

impl VerificationReport {
    pub fn new(suite: &str, convention: &str, gauge: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            convention: convention.to_string(),
            gauge: gauge.to_string(),
            ..Default::default()
        }
    }

    pub fn add_input(&mut self, label: &str, content: &[u8]) {
        self.inputs.push((label.to_string(), digest(content)));
    }

    pub fn status(&self) -> Status {
        self.relations
            .iter()
            .map(|r| r.status)
            .max()
            .unwrap_or(Status::Pass)
    }

    pub fn passed(&self) -> usize {
        self.relations
            .iter()
            .filter(|r| r.status == Status::Pass)
            .count()
    }

    pub fn relation(&self, name: &str) -> Option<&RelationReport> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Merges several reports into one, keeping their order.
    pub fn merge(suite: &str, parts: Vec<VerificationReport>) -> VerificationReport {
        let mut out = VerificationReport::new(suite, "", "");
        for p in parts {
            if out.convention.is_empty() {
                out.convention = p.convention.clone();
                out.gauge = p.gauge.clone();
                out.seed = p.seed;
            }
            for r in p.relations {
                let mut r = r;
                r.name = format!("{}: {}", p.suite, r.name);
                out.relations.push(r);
            }
            for i in p.inputs {
                if !out.inputs.contains(&i) {
                    out.inputs.push(i);
                }
            }
            for s in p.settings {
                if !out.settings.contains(&s) {
                    out.settings.push(s);
                }
            }
        }
        out
    }
}

pub fn digest(content: &[u8]) -> String {
    hex::encode(Sha256::digest(content))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(report: &VerificationReport, format: Format) -> Vec<u8> {
    match format {
        Format::Text => emit_text(report).into_bytes(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(report)).expect("json values serialize");
            s.push('\n');
            s.into_bytes()
        }
    }
}

fn emit_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("suite: {}\n", r.suite));
    out.push_str(&format!("convention: {}\n", r.convention));
    out.push_str(&format!("gauge: {}\n", r.gauge));
    if let Some(seed) = r.seed {
        out.push_str(&format!("seed: {seed}\n"));
    }
    for (k, v) in &r.settings {
        out.push_str(&format!("{k}: {v}\n"));
    }
    for (label, hash) in &r.inputs {
        out.push_str(&format!("input: {label} sha256:{hash}\n"));
    }
    for rel in &r.relations {
        let tag = match rel.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        };
        out.push_str(&format!("{tag:<12} {}\n", rel.name));
        if let Some(note) = &rel.note {
            out.push_str(&format!("             note: {note}\n"));
        }
        for (at, residual) in &rel.failures {
            out.push_str(&format!("             on {at}: {residual}\n"));
        }
    }
    let n = r.relations.len();
    let tag = match r.status() {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inconclusive => "INCONCLUSIVE",
    };
    out.push_str(&format!("{tag} ({}/{n})\n", r.passed()));
    out
}

fn to_json(r: &VerificationReport) -> Value {
    let relations: Vec<Value> = r
        .relations
        .iter()
        .map(|rel| {
            let failures: Vec<Value> = rel
                .failures
                .iter()
                .map(|(at, res)| json!({ "at": at, "residual": res }))
                .collect();
            let mut m = Map::new();
            m.insert("name".into(), json!(rel.name));
            m.insert("status".into(), json!(rel.status.as_str()));
            m.insert("failures".into(), Value::Array(failures));
            if let Some(note) = &rel.note {
                m.insert("note".into(), json!(note));
            }
            Value::Object(m)
        })
        .collect();
    let inputs: Vec<Value> = r
        .inputs
        .iter()
        .map(|(l, h)| json!({ "label": l, "sha256": h }))
        .collect();
    let settings: Map<String, Value> = r
        .settings
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "engine_version": ENGINE_VERSION,
        "suite": r.suite,
        "convention": r.convention,
        "gauge": r.gauge,
        "seed": r.seed.map(|s| s.to_string()),
        "settings": settings,
        "inputs": inputs,
        "relations": relations,
        "status": r.status().as_str(),
        "passed": r.passed().to_string(),
        "total": r.relations.len().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(statuses: &[Status]) -> VerificationReport {
        let mut r = VerificationReport::new("demo", "leibniz", "linear");
        for (i, s) in statuses.iter().enumerate() {
            let name = format!("rel{i}");
            r.relations.push(match s {
                Status::Pass => RelationReport::pass(&name),
                Status::Fail => RelationReport::fail(&name, "c_L", "2*c_L*c_L".into()),
                Status::Inconclusive => RelationReport::inconclusive(&name, "bound"),
            });
        }
        r
    }

    #[test]
    fn text_footer() {
        let r = sample(&[Status::Pass, Status::Pass]);
        let t = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(t.ends_with("PASS (2/2)\n"));
        let r = sample(&[Status::Pass, Status::Fail]);
        let t = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(t.ends_with("FAIL (1/2)\n"));
        assert!(t.contains("on c_L: 2*c_L*c_L"));
    }

    #[test]
    fn fail_dominates_inconclusive() {
        assert_eq!(sample(&[Status::Inconclusive, Status::Fail]).status(), Status::Fail);
        assert_eq!(sample(&[Status::Inconclusive, Status::Pass]).status(), Status::Inconclusive);
        assert_eq!(sample(&[]).status(), Status::Pass);
    }

    #[test]
    fn json_has_residual_and_sorted_keys() {
        let mut r = sample(&[Status::Fail]);
        r.duration = Some(Duration::from_millis(5));
        let j = String::from_utf8(emit_report(&r, Format::Json)).unwrap();
        assert!(j.contains("\"residual\": \"2*c_L*c_L\""));
        let v: Value = serde_json::from_str(&j).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(!j.contains("duration"));
    }
}
