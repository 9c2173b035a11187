//! End-to-end runs of the command-line binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use superbrst::report::{RelationReport, Status, VerificationReport};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superbrst"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn exit_codes_on_fixtures() {
    let pass = fixture("pass.conf");
    let fail = fixture("fail.conf");
    let inconclusive = fixture("inconclusive.conf");
    assert_eq!(run(&["verify-gauge-fixing", "--config", &pass]).status.code(), Some(0));
    assert_eq!(run(&["verify-gauge-fixing", "--config", &fail]).status.code(), Some(1));
    let out = run(&["verify-gauge-fixing", "--config", &inconclusive]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("INCONCLUSIVE"));
    assert_eq!(run(&["verify-brst", "--config", &fixture("missing.conf")]).status.code(), Some(3));
    assert_eq!(run(&["verify-brst", "--samples", "many"]).status.code(), Some(3));
}

#[test]
fn flags_override_config() {
    let fail = fixture("fail.conf");
    let out = run(&["verify-brst", "--config", &fail, "--convention", "leibniz"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn brst_json_example() {
    let out = run(&["verify-brst", "--gauge", "landau", "--convention", "leibniz", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["status"], "pass");
}

#[test]
fn massive_no_algebra_reports_residuals() {
    let out = run(&["verify-no-algebra", "--massive"]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[s,s] = -2*i*m2*d1"));
    assert!(text.contains(" on "));
}

#[test]
fn eval_prints_zero_for_ghost_square() {
    let out = run(&["eval", "s(s(c_L))", "--gauge", "linear", "--convention", "leibniz"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
}

#[test]
fn json_reports_are_byte_identical() {
    for cmd in ["verify-superspace", "verify-star"] {
        let args = [cmd, "--seed", "11", "--samples", "5", "--format", "json"];
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        assert!(String::from_utf8_lossy(&a.stdout).contains("\"seed\": \"11\""));
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.display().to_string();
    let out = run(&["verify-brst", "--convention", "leibniz", "--format", "json", "--out", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "linear");
}

#[test]
fn rules_file_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("mirrored.rules");
    std::fs::write(&rules, superbrst::derivation::MIRRORED_LINEAR_RULES).unwrap();
    let conf = dir.path().join("c.conf");
    std::fs::write(&conf, "rules = mirrored.rules\n").unwrap();
    let out = run(&["verify-brst", "--config", &conf.display().to_string()]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("input: mirrored.rules sha256:"), "{text}");
}

fn status_strategy() -> impl Strategy<Value = Status> {
    prop_oneof![Just(Status::Pass), Just(Status::Fail), Just(Status::Inconclusive)]
}

proptest! {
    #[test]
    fn exit_code_contract(statuses in prop::collection::vec(status_strategy(), 0..8)) {
        let mut r = VerificationReport::new("synthetic", "none", "none");
        for (i, s) in statuses.iter().enumerate() {
            let mut rel = RelationReport::pass(&format!("r{i}"));
            rel.status = *s;
            r.relations.push(rel);
        }
        let want = if statuses.contains(&Status::Fail) {
            1
        } else if statuses.contains(&Status::Inconclusive) {
            2
        } else {
            0
        };
        prop_assert_eq!(r.status().exit_code(), want);
    }
}

/// Checks `v` against the subset of JSON Schema used by the report schema.
fn conforms(v: &serde_json::Value, s: &serde_json::Value, path: &str) -> Result<(), String> {
    use serde_json::Value;
    if let Some(c) = s.get("const") {
        if v != c {
            return Err(format!("{path}: expected {c}"));
        }
    }
    if let Some(Value::Array(opts)) = s.get("enum") {
        if !opts.contains(v) {
            return Err(format!("{path}: {v} not in enum"));
        }
    }
    if let Some(t) = s.get("type") {
        let types: Vec<&str> = match t {
            Value::String(x) => vec![x.as_str()],
            Value::Array(xs) => xs.iter().filter_map(|x| x.as_str()).collect(),
            _ => vec![],
        };
        let actual = match v {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        if !types.contains(&actual) {
            return Err(format!("{path}: {actual} is not {types:?}"));
        }
    }
    if let (Some(p), Value::String(x)) = (s.get("pattern").and_then(|p| p.as_str()), v) {
        let ok = match p {
            "^[0-9]+$" => !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit()),
            "^[0-9a-f]{64}$" => x.len() == 64 && x.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()),
            _ => return Err(format!("{path}: unhandled pattern {p}")),
        };
        if !ok {
            return Err(format!("{path}: '{x}' does not match {p}"));
        }
    }
    if let Value::Object(map) = v {
        if let Some(Value::Array(req)) = s.get("required") {
            for k in req.iter().filter_map(|k| k.as_str()) {
                if !map.contains_key(k) {
                    return Err(format!("{path}: missing {k}"));
                }
            }
        }
        let props = s.get("properties").and_then(|p| p.as_object());
        for (k, child) in map {
            let sub = match props.and_then(|p| p.get(k)) {
                Some(sub) => sub,
                None => match s.get("additionalProperties") {
                    Some(Value::Bool(false)) => return Err(format!("{path}: unexpected key {k}")),
                    Some(sub @ Value::Object(_)) => sub,
                    _ => continue,
                },
            };
            conforms(child, sub, &format!("{path}.{k}"))?;
        }
    }
    if let (Value::Array(items), Some(sub)) = (v, s.get("items")) {
        for (i, item) in items.iter().enumerate() {
            conforms(item, sub, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

#[test]
fn json_reports_match_schema() {
    let schema: serde_json::Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let runs: [&[&str]; 3] = [
        &["verify-brst", "--gauge", "landau", "--format", "json"],
        &["verify-no-algebra", "--massive", "--format", "json"],
        &["verify-gauge-fixing", "--convention", "leibniz", "--format", "json", "--seed", "7"],
    ];
    for args in runs {
        let out = run(args);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        conforms(&v, &schema, "$").unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn example_config_runs() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/example.conf");
    let out = run(&["verify-no-algebra", "--config", &path.display().to_string()]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)), "{}", String::from_utf8_lossy(&out.stderr));
}
