use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_selberg-heat"))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn plancherel_example() {
    let o = run(&["plancherel", "--dim", "3", "--sigma", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"coeffs":[0,-1],"degree":2}"#);
}

#[test]
fn plancherel_negative_last_entry_and_cn() {
    let a = run(&["plancherel", "--dim", "5", "--sigma", "1,-1", "--cn", "2"]);
    let b = run(&["plancherel", "--dim", "5", "--sigma", "1,1", "--cn", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["degree"], 4);
}

#[test]
fn check_passes_on_a_clean_build() {
    let o = run(&["check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS") || l.ends_with("checks passed")));
}

#[test]
fn missing_manifest() {
    let o = run(&["trace", "--manifold", "missing.json", "--nu", "0", "--t", "0.1:0.2:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cannot read manifest"));
}

#[test]
fn malformed_json_reports_position() {
    let o = run(&["trace", "--manifold", &data("malformed.json"), "--nu", "0", "--t", "0.1:0.2:1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");

    let o = run(&["torsion", "--spectral", &data("malformed.json"), "--tau", "0,0", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["plancherel"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["plancherel", "--dim", "three", "--sigma", "0"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    assert_eq!(run(&["plancherel", "--dim", "4", "--sigma", "0"]).status.code(), Some(1));
    assert_eq!(run(&["plancherel", "--dim", "5", "--sigma", "0,1"]).status.code(), Some(1));
    assert_eq!(run(&["plancherel", "--dim", "3", "--sigma", "0", "--cn", "-1"]).status.code(), Some(1));
    let o = run(&["trace", "--manifold", &data("manifold_h3.json"), "--nu", "0", "--t", "0.1:0.2:0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn trace_csv_is_stable_and_finite() {
    let args = ["trace", "--manifold", &data("manifold_h3.json"), "--nu", "0", "--t", "0.05:0.2:3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,I,H,T,Tprime,total"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!(r.iter().all(|v| v.is_finite()));
        // total = I + H + C1 T + C2 T′ with C1 = 0.5, C2 = -0.25
        let total = r[1] + r[2] + 0.5 * r[3] - 0.25 * r[4];
        assert!((r[5] - total).abs() < 1e-12 * r[5].abs());
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let o = run(&["plancherel", "--dim", "3", "--sigma", "2", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["degree"], 2);
}

#[test]
fn expand_emits_an_expansion() {
    let o = run(&["expand", "--manifold", &data("manifold_h3.json"), "--nu", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms[0]["beta"], "-3/2");
    // no t^0 log t term survives
    assert!(!terms.iter().any(|t| t["beta"] == 0 && t["log"] == true));
}

#[test]
fn torsion_report() {
    let o = run(&["torsion", "--spectral", &data("spectral_d3.json"), "--tau", "0,0", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["zeta0"], serde_json::json!([3, 4, 5]));
    assert_eq!(v["zetaPrime0"].as_array().unwrap().len(), 3);
    assert!(v["logT"].as_f64().unwrap().is_finite());
    // wrong number of forms for d = 5
    let o = run(&["torsion", "--spectral", &data("spectral_d3.json"), "--tau", "0,0,0", "--dim", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stationary_phase_with_oracle() {
    let o = run(&[
        "stationary-phase",
        "--f",
        &data("phase_r2.json"),
        "--g",
        &data("amplitude.json"),
        "--order",
        "2",
        "--oracle",
        "100",
        "--oracle",
        "400",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
    let res: Vec<f64> = v["oracle"].as_array().unwrap().iter().map(|r| r["residual"].as_f64().unwrap().abs()).collect();
    // first omitted level is λ^{-5/2}: two doublings give a factor near 32
    assert!(res[0] / res[1] > 20.0, "{res:?}");

    let o = run(&["stationary-phase", "--f", &data("phase_r2.json"), "--g", &data("amplitude.json"), "--order", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("degree"));
}

#[test]
fn version_embeds_default_orders() {
    let o = run(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("default orders"));
}

#[test]
fn explicit_characters_in_dimension_5() {
    let m = data("manifold_d5.json");
    let o = run(&["trace", "--manifold", &m, "--nu", "1,0", "--t", "0.5:1:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!(row[2] > 0.0, "H should be positive here: {text}");
    // compact: T and T′ do not contribute
    assert_eq!(row[5], row[1] + row[2]);
    // ν = (1,1) restricts to σ = (1,±1), which the file does not provide
    let o = run(&["trace", "--manifold", &m, "--nu", "1,1", "--t", "0.5:1:1"]);
    assert_eq!(o.status.code(), Some(1));
}
