use std::process::{Command, Output};

use serde_json::Value;

use metahecke::parse::parse_laurent;
use metahecke::render::from_json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metahecke")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/output.schema.json");
    let v: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

fn json_of(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = schema();
    let valid = s.is_valid(&v);
    assert!(valid, "{args:?} output fails the schema: {v}");
    v
}

#[test]
fn epoly_table_entry() {
    let o = run(&["epoly", "--r", "3", "--n", "1", "--kappa", "1", "--mu", "0,1,0"]);
    assert!(o.status.success());
    let got = parse_laurent(&stdout(&o), 3, None).unwrap();
    let want = parse_laurent("(k-1)*(k+1)/(k^4*q-1)*x1 + x2", 3, None).unwrap();
    assert_eq!(got, want);
}

#[test]
fn epoly_kappa_two_is_monomial() {
    let o = run(&["epoly", "--r", "3", "--n", "2", "--kappa", "2", "--mu", "1,0,0"]);
    assert_eq!(stdout(&o), "x1");
    assert_eq!(stdout(&run(&["epoly", "--mu", "0,0,0"])), "1");
}

#[test]
fn json_round_trip() {
    for eps in ["+1", "-1"] {
        let v = json_of(&["epoly", "--n", "3", "--epsilon", eps, "--mu", "0,1,1", "--format", "json"]);
        let parsed = from_json(&v["poly"], 3).unwrap();
        let plain = stdout(&run(&["epoly", "--n", "3", "--epsilon", eps, "--mu", "0,1,1"]));
        assert_eq!(parsed, parse_laurent(&plain, 3, None).unwrap());
        let again = from_json(&serde_json::from_str(&v["poly"].to_string()).unwrap(), 3).unwrap();
        assert_eq!(again, parsed);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["epoly", "--mu", "0,2,0", "--cap", "2"]).status.code(), Some(2));
    assert_eq!(run(&["whittaker", "--type", "A2", "--lambda", "1,-1"]).status.code(), Some(5));
    assert_eq!(run(&["epoly", "--mu", "0,1"]).status.code(), Some(1));
    assert_ne!(run(&["epoly", "--mu", "0,0,0", "--epsilon", "2"]).status.code(), Some(0));
}

#[test]
fn table_matches_and_reports_mismatch() {
    let o = run(&["table"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("50/50 entries match"));

    let v = json_of(&["table", "--epsilon", "-1", "--format", "json"]);
    assert_eq!(v["matched"], 50);

    let dir = std::env::temp_dir().join(format!("metahecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("perturbed.txt");
    std::fs::write(&path, "1|0,0,0|1\n1|0,1,0|(k-1)*(k+1)/(k^4*q+1)*x1 + x2\n").unwrap();
    let o = run(&["table", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(6));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[0, 1, 0]"), "{err}");
    assert!(stdout(&o).contains("1/2 entries match"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn table_latex_layout() {
    let o = run(&["table", "--format", "latex"]);
    let s = stdout(&o);
    assert!(s.contains("$E_{(0,0,0)}^{(1)}(x) = 1$"));
    assert!(s.contains("$E_{(1,0,0)}^{(5)}(x) = x_{1}$"));
    assert_eq!(s.matches("\\bigskip").count(), 9);
}

#[test]
fn checks_pass() {
    let cases: [&[&str]; 3] = [
        &["check", "sigma-braid", "--type", "B2", "--n", "2", "--kappa", "1"],
        &["check", "daha", "--r", "3", "--n", "3", "--kappa", "1", "--degree", "2"],
        &["check", "scaffold", "--type", "A2", "--n", "3", "--symbolic"],
    ];
    for args in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let v = json_of(&a);
        assert_eq!(v["passed"], true, "{args:?}");
        assert!(v["runs"].as_array().unwrap().len() >= 3);
    }
    for suite in ["dl-hecke", "localization"] {
        let o = run(&["check", suite, "--type", "A2", "--n", "2"]);
        assert!(o.status.success(), "{suite}");
    }
}

#[test]
fn whittaker_outputs() {
    let v = json_of(&["whittaker", "--type", "A1", "--n", "1", "--lambda", "1", "--format", "json"]);
    let f = from_json(&v["poly"], 1).unwrap();
    assert_eq!(f, parse_laurent("-k^2*x1^3 + (1-k^2)*x1 + x1^-1", 1, None).unwrap());
    let o = run(&["whittaker", "--type", "A2", "--n", "2", "--lambda", "1,0"]);
    assert!(o.status.success());
    let zero = stdout(&run(&["whittaker", "--type", "A1", "--lambda", "0"]));
    assert_eq!(parse_laurent(&zero, 1, None).unwrap(), parse_laurent("1 - k^2*x1^2", 1, None).unwrap());
    let o = run(&["whittaker", "--type", "A1", "--n", "2", "--lambda", "1", "--symmetric"]);
    assert!(o.status.success());
}
