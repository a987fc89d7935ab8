use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_densitylab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "schema errors: {errors:#?}\n{doc:#}");
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid(&schema("run_report.schema.json"), &doc);
    doc
}

fn failure(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_valid(&schema("error.schema.json"), &doc);
    doc
}

#[test]
fn classify_half_with_kleppner() {
    let doc = report(&["classify", "--invariant", "1/2", "--kleppner", "holds"]);
    let claims = doc["results"]["verdict"]["claims"].as_array().unwrap();
    assert!(claims.contains(&json!("parseval_frame_exists")));
    assert!(claims.contains(&json!("no_separating_vector")));
    assert_eq!(claims.len(), 2);
}

#[test]
fn classify_auto_from_basis() {
    let doc = report(&["classify", "--basis", "sqrt(2),0;0,1"]);
    assert_eq!(doc["results"]["verdict"]["kleppner"], "holds");
    assert_eq!(doc["results"]["verdict"]["invariant"]["exact"], "sqrt(2)");
    let doc = report(&["classify", "--invariant", "2", "--kleppner", "fails"]);
    assert_eq!(doc["results"]["verdict"]["claims"], json!(["no_cyclic_vector"]));
}

#[test]
fn finite_wh_critical_onb() {
    let doc = report(&["finite-wh", "--N", "4", "--a", "2", "--b", "2", "--window", "1,1,0,0"]);
    assert_eq!(doc["results"]["invariant"], "1");
    assert_eq!(doc["results"]["onb"], true);
    assert_eq!(doc["results"]["parseval"], true);
}

#[test]
fn kleppner_and_gabor_and_bergman_reports_validate() {
    let doc = report(&["kleppner", "--basis", "1/3,0;0,3", "--brute-radius", "10"]);
    assert_eq!(doc["results"]["kleppner"]["witness"], json!([1, 0]));
    assert_eq!(doc["results"]["brute"]["witness"], json!([1, 0]));
    let doc = report(&["gabor", "--lattice", "1,0;0,1/2", "--grid", "32"]);
    assert_eq!(doc["results"]["sandwich"]["holds"], true);
    report(&["gabor", "--window", "box", "--lattice", "1,0;0,1", "--method", "gram", "--radius", "1"]);
    let doc = report(&["bergman", "--alpha", "13", "--base", "i", "--radius", "1"]);
    assert_eq!(doc["results"]["verdict"]["kernel"]["stabilizer_order"], 2);
    report(&["bergman", "--alpha", "7", "--group", "sl2z", "--radius", "1"]);
}

#[test]
fn empty_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.json");
    std::fs::write(&p, "{}").unwrap();
    let doc = failure(&["run", "--config", p.to_str().unwrap()], 2);
    assert_eq!(doc["status"], "config_invalid");
    assert_eq!(doc["errors"][0]["field"], "command");
    std::fs::write(&p, "").unwrap();
    failure(&["run", "--config", p.to_str().unwrap()], 2);
}

#[test]
fn validation_errors_exit_two() {
    failure(&["classify", "--invariant", "1/2", "--kleppner", "maybe"], 2);
    failure(&["classify"], 2);
    failure(&["finite-wh", "--N", "4", "--a", "3", "--b", "2", "--window", "1,0,0,0"], 2);
    failure(&["bergman", "--alpha", "0.5"], 2);
    failure(&["gabor", "--lattice", "1,1;0,1"], 2);
    failure(&["sweep", "--target", "gabor-zz", "--param", "density", "--values", "1/2", "--set", "lattice=x"], 2);
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn quadrature_failure_exits_three() {
    let doc = failure(
        &["gabor", "--window", "box", "--lattice", "1,0;0,1", "--method", "gram", "--radius", "1", "--quad-abs", "1e-300", "--quad-rel", "1e-300"],
        3,
    );
    assert_eq!(doc["status"], "compute_failed");
}

#[test]
fn sweeps_emit_rfc4180_csv() {
    let out = run(&["sweep", "--target", "finite-wh", "--param", "a", "--values", "1,2,4", "--set", "n=4", "--set", "b=2", "--set", "window=1,1,0,0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.split_terminator("\r\n").collect();
    assert_eq!(lines[0], "a,invariant,A,B,parseval,onb");
    let inv: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(inv, ["1/2", "1", "2"]);
    assert!(!text.replace("\r\n", "").contains('\n'));

    let out = run(&["sweep", "--target", "gabor-zz", "--param", "density", "--values", "1/4,1/2,3/4,1", "--set", "grid=64", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let a: Vec<f64> = text.split_terminator("\r\n").skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(a.iter().all(|&x| x > 0.0));
    assert!(a.windows(2).all(|w| w[1] < w[0]));
    assert!(a[3] < 0.05 * a[1]);

    let doc = report(&["sweep", "--target", "bergman", "--param", "alpha", "--values", "2,7,13", "--set", "radius=1"]);
    let inv: Vec<&Value> = doc["results"]["table"]["rows"].as_array().unwrap().iter().map(|r| &r[1]).collect();
    assert_eq!(inv, [&json!("1/12"), &json!("1/2"), &json!("1")]);
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("out.json");
    let text = json!({
        "command": "bergman",
        "params": {"alpha": 2, "radius": 1},
        "output": {"path": out.to_str().unwrap(), "format": "json"},
        "seed": 3
    });
    std::fs::write(&cfg, text.to_string()).unwrap();
    let o = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_valid(&schema("run_report.schema.json"), &doc);
    assert_eq!(doc["results"]["verdict"]["generic"]["invariant"]["exact"], "1/12");

    // Flags win over the file.
    let o = run(&["bergman", "--config", cfg.to_str().unwrap(), "--alpha", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["results"]["verdict"]["generic"]["invariant"]["exact"], "1");
    assert_eq!(doc["config"]["seed"], 3);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn configs_validate_against_schema() {
    let v = schema("config.schema.json");
    for doc in [
        json!({"command": "classify", "params": {"invariant": "1/2", "kleppner": "holds"}}),
        json!({"command": "finite-wh", "params": {"N": 4, "a": 2, "b": 2, "window": "1,1,0,0"}}),
        json!({"command": "sweep", "params": {"target": "bergman", "param": "alpha", "values": [2, 7, 13]}, "seed": 1}),
        json!({"command": "suite", "output": {"format": "csv"}, "tolerances": {"spectral": 1e-9}}),
    ] {
        assert_valid(&v, &doc);
    }
    assert!(!v.is_valid(&json!({})));
    assert!(!v.is_valid(&json!({"command": "gabor", "params": {"window": "box"}})));
}

#[test]
fn suite_is_byte_identical_across_runs_and_thread_counts() {
    let a = run(&["suite", "--seed", "17"]);
    let b = run(&["suite", "--seed", "17"]);
    let c = bin().args(["suite", "--seed", "17"]).env("DENSITYLAB_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_valid(&schema("run_report.schema.json"), &doc);
    assert_eq!(doc["results"]["passed"], true);
    let other = run(&["suite", "--seed", "18"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn timing_is_opt_in() {
    let doc = report(&["classify", "--invariant", "1", "--kleppner", "holds", "--timing"]);
    assert!(doc["wall_time_s"].as_f64().unwrap() >= 0.0);
    let doc = report(&["classify", "--invariant", "1", "--kleppner", "holds"]);
    assert!(doc.get("wall_time_s").is_none());
    assert_eq!(doc["results"]["verdict"]["claims"], json!(["onb_exists"]));
}
