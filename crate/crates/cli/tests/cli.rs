use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_icpovm"));
    c.env_remove("ICPOVM_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("icpovm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn validate_reference_sets() {
    for s in ["set1", "set2"] {
        let v = json_of(&run(&["validate", s]));
        assert_eq!(v["sic"], Value::Bool(true));
        assert_eq!(v["ic"], Value::Bool(true));
    }
}

#[test]
fn validate_exit_codes() {
    let zero = scratch("zero.json", r#"{"kets": [[[0,0],[0,0]],[[0,0],[0,0]],[[0,0],[0,0]],[[0,0],[0,0]]]}"#);
    assert_eq!(run(&["validate", zero.to_str().unwrap()]).status.code(), Some(1));
    let junk = scratch("junk.json", "{not json");
    assert_eq!(run(&["validate", junk.to_str().unwrap()]).status.code(), Some(2));
    let short = scratch("short.json", r#"{"kets": [[[1,0],[0,0]]]}"#);
    assert_eq!(run(&["validate", short.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["validate", "/nonexistent/povm.json"]).status.code(), Some(2));
}

#[test]
fn classify_cnot_and_identity() {
    let cnot = scratch(
        "cnot.json",
        r#"[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]],[[0,0],[0,0],[1,0],[0,0]]]"#,
    );
    let v = json_of(&run(&["classify", cnot.to_str().unwrap()]));
    assert_eq!(v["cnot_count"], 1);
    assert!((num(&v["k"][0]) - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
    let id = scratch(
        "id.json",
        r#"{"matrix": [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#,
    );
    assert_eq!(json_of(&run(&["classify", id.to_str().unwrap()]))["cnot_count"], 0);
    let bad = scratch(
        "bad.json",
        r#"[[[2,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]"#,
    );
    assert_eq!(run(&["classify", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn compile_sic_outputs_round_trip() {
    let out = scratch("gen.json", "");
    let v = json_of(&run(&["compile-sic", "set1", "--circuit-out", out.to_str().unwrap()]));
    // Set 1 in its listed order pairs with the c = 1 completion under b = 2·b_A + b_S
    assert_eq!(v["c"], 1);
    assert!(num(&v["residuals"]["general_circuit"]) < 1e-8);
    assert!(num(&v["residuals"]["practical_elements"]) < 1e-9);

    let c = json_of(&run(&["classify", out.to_str().unwrap()]));
    assert!(c["cnot_count"].as_u64().unwrap() <= 3);

    let whole = scratch("compiled.json", &serde_json::to_string(&v).unwrap());
    let again = json_of(&run(&["validate", whole.to_str().unwrap()]));
    assert_eq!(again["sic"], Value::Bool(true));
}

#[test]
fn compile_set2_in_bell_outcome_order() {
    let v = json_of(&run(&["validate", "set2"]));
    let k = v["kets"].as_array().unwrap();
    let reordered = serde_json::json!({ "kets": [k[0], k[2], k[1], k[3]] });
    let p = scratch("set2_bell.json", &reordered.to_string());
    let r = json_of(&run(&["compile-sic", p.to_str().unwrap()]));
    assert_eq!(r["c"], 1);
    let u = &r["u_s"];
    let (a, b) = (&u[0][0], &u[1][0]);
    let mag = |z: &Value| num(&z[0]).hypot(num(&z[1]));
    assert!((mag(a) - 1.0).abs() < 1e-9 && mag(b) < 1e-9);
    assert!((mag(&u[1][1]) - 1.0).abs() < 1e-9);
    let phase = |z: &Value| num(&z[1]).atan2(num(&z[0]));
    let d = (phase(&u[0][0]) - phase(&u[1][1])).rem_euclid(std::f64::consts::TAU);
    assert!(d < 1e-9 || (std::f64::consts::TAU - d) < 1e-9);
    assert_eq!(json_of(&run(&["compile-sic", "set2"]))["c"], 0);
}

#[test]
fn optimize_reaches_two_cnots_and_round_trips() {
    let p = scratch(
        "povm.json",
        r#"{"kets": [[[0.6,0],[0,0]],[[0.2,0.1],[0.3,-0.2]],[[0.1,0],[0.4,0.3]],[[0.3,0.2],[0.1,0.1]]]}"#,
    );
    // not complete: optimize has to reject it
    assert_eq!(run(&["optimize", p.to_str().unwrap()]).status.code(), Some(1));

    let v = json_of(&run(&["compile-sic", "set1"]));
    let gen = scratch("general.json", &serde_json::json!({ "gates": v["gates"] }).to_string());
    let c = json_of(&run(&["classify", gen.to_str().unwrap()]));
    let u = scratch("u.json", &serde_json::json!({ "matrix": c["matrix"] }).to_string());
    let o = json_of(&run(&["optimize", u.to_str().unwrap()]));
    assert!(o["cnot_count"].as_u64().unwrap() <= 2);
    assert!(num(&o["k"][2]).abs() < 1e-8);
    assert!(num(&o["povm_residual"]) < 1e-9);
    let back = scratch("opt.json", &o.to_string());
    let again = json_of(&run(&["optimize", back.to_str().unwrap()]));
    for g in again["theta"]["gamma"].as_array().unwrap() {
        assert_eq!(num(g), 0.0);
    }
}

#[test]
fn relabel_table_matches() {
    let v = json_of(&run(&["relabel-table", "--json"]));
    assert_eq!(v["1a"], "1234");
    assert_eq!(v["3e"], "3241");
    assert_eq!(v["4f"], "4231");
    assert_eq!(v.as_object().unwrap().len(), 24);
}

fn csv_rows(o: &Output) -> Vec<Vec<f64>> {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("shots,mean,std_error,variance,mse_vs_ideal"));
    lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn shadow_estimate_targets() {
    let rows = csv_rows(&run(&["shadow-estimate", "--state", "depolarized", "--p", "0.2", "--shots", "1000,100000"]));
    assert_eq!(rows.len(), 2);
    assert!((rows[1][1] - 0.803125).abs() < 5.0 * rows[1][2]);
    let rows = csv_rows(&run(&["shadow-estimate", "--state", "ghz", "--shots", "100000"]));
    assert!((rows[0][1] - 1.0).abs() < 5.0 * rows[0][2]);
    let rows = csv_rows(&run(&["shadow-estimate", "--state", "depolarized", "--p", "1", "--shots", "100000"]));
    assert!((rows[0][1] - 1.0 / 64.0).abs() < 5.0 * rows[0][2]);
}

#[test]
fn shadow_estimate_is_reproducible() {
    let args = ["shadow-estimate", "--shots", "5000", "--noise", "default", "--circuit", "2cnot"];
    let a = bin().args(args).env("ICPOVM_SEED", "9").output().unwrap();
    let b = run(&[&args[..], &["--seed", "9"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[&args[..], &["--seed", "10"]].concat());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn shadow_estimate_optimal_needs_product_target() {
    assert_eq!(run(&["shadow-estimate", "--povm", "optimal", "--shots", "1000"]).status.code(), Some(1));
    let rows = csv_rows(&run(&[
        "shadow-estimate",
        "--povm",
        "optimal",
        "--target",
        "rotated",
        "--state",
        "depolarized",
        "--shots",
        "10000",
    ]));
    assert!((rows[0][1] - 0.803125).abs() < 5.0 * rows[0][2]);
}

#[test]
fn shadow_estimate_from_circuit_file() {
    let v = json_of(&run(&["compile-sic", "set2"]));
    let f = scratch("practical.json", &v["practical_circuit"].to_string());
    let rows = csv_rows(&run(&["shadow-estimate", "--circuit", f.to_str().unwrap(), "--n", "3", "--shots", "20000"]));
    assert!((rows[0][1] - 1.0).abs() < 5.0 * rows[0][2]);
    assert_eq!(run(&["shadow-estimate", "--n", "13", "--shots", "100"]).status.code(), Some(1));
}
