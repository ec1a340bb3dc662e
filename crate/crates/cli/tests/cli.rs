use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn urbounds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_urbounds"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn report_on_ground_state() {
    let path = write_tmp(
        "ground.json",
        r#"{"type":"gaussian","mean":[0,0],"cov":[[0.5,0],[0,0.5]]}"#,
    );
    let out = urbounds(&["report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["best_bound"], 0.5);
    assert_eq!(v["report"]["slack"], 0.0);
    assert_eq!(v["report"]["heisenberg"], 0.5);
    assert_eq!(v["moments"]["X"][0][0], 0.5);
    assert_eq!(v["moments"]["Y"][0][1], 0.5);
    assert_eq!(v["moments"]["labels"][1], "p");
    assert_eq!(v["psd"]["passed"], true);
}

#[test]
fn report_respects_hbar() {
    let path = write_tmp(
        "ground_h2.json",
        r#"{"type":"gaussian","mean":[0,0],"cov":[[1,0],[0,1]]}"#,
    );
    let out = urbounds(&["--hbar", "2", "report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["best_bound"], 1.0);
    // The same covariance is unphysical at ħ = 3.
    let out = urbounds(&["report", path.to_str().unwrap(), "--hbar", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_on_entangled_example() {
    let path = write_tmp(
        "entangled.json",
        r#"{"type":"entangled_gaussian","a":1,"c":1,"b_re":0.5,"b_im":0.5,"observables":["x","p","y"]}"#,
    );
    let out = urbounds(&["report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let best = v["report"]["best_bound"].as_f64().unwrap();
    assert!((best - 2.0 / 3.0).abs() < 1e-9);
    assert!(v["report"]["slack"].as_f64().unwrap().abs() < 1e-9);
    assert!((v["report"]["rs"].as_f64().unwrap() - 10f64.sqrt() / 6.0).abs() < 1e-9);

    let out = urbounds(&["report", path.to_str().unwrap(), "--format", "csv"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0].join(","), "seed,product,robertson,rs,new,commuting,best,slack");
    assert_eq!(rows.len(), 2);
}

#[test]
fn report_with_inline_matrices_and_label_override() {
    let path = write_tmp(
        "fock.json",
        r#"{"type":"fock_mixture","probs":[0.7,0.3],
            "observables":[{"label":"a","re":[[0,1,0],[1,0,0],[0,0,0]]},
                           {"re":[[0,0,0],[0,0,0],[0,0,0]],"im":[[0,-1,0],[1,0,0],[0,0,0]]}]}"#,
    );
    let out = urbounds(&["report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["report"]["labels"][0], "a");
    assert_eq!(v["report"]["labels"][1], "z2");
    assert!(v["report"]["heisenberg"].is_null());
    let out = urbounds(&["report", path.to_str().unwrap(), "--obs", "x,p"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["heisenberg"], 0.5);
}

#[test]
fn input_errors_exit_one() {
    let bad = write_tmp("bad.json", r#"{"type":"gaussian","mean":[0,0],"cov":"#);
    let out = urbounds(&["report", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let unphysical = write_tmp(
        "unphysical.json",
        r#"{"type":"gaussian","mean":[0,0],"cov":[[0.1,0],[0,0.1]]}"#,
    );
    let out = urbounds(&["report", unphysical.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma + (i hbar/2) J >= 0"));

    let unknown = write_tmp(
        "unknown.json",
        r#"{"type":"gaussian","mean":[0,0],"cov":[[0.5,0],[0,0.5]]}"#,
    );
    assert_eq!(
        urbounds(&["report", unknown.to_str().unwrap(), "--obs", "q7"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(urbounds(&["report", "/nonexistent/state.json"]).status.code(), Some(1));
    assert_eq!(
        urbounds(&["example", "--a", "1", "--c", "1", "--b-re", "1.2", "--b-im", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        urbounds(&["frontier", "--mu-min", "0", "--mu-max", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(urbounds(&["verify", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(urbounds(&["verify", "--dim", "65"]).status.code(), Some(1));
    assert_eq!(urbounds(&["verify", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(urbounds(&["--hbar", "-1", "frontier"]).status.code(), Some(1));
    assert_eq!(urbounds(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn example_row() {
    let out = urbounds(&["example", "--a", "1", "--c", "1", "--b-re", "0.5", "--b-im", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(
        rows[0].join(","),
        "re_b,im_b,valid,product,rs_bound,eq18_bound,residual,purity"
    );
    assert_eq!(rows[1][2], "ok");
    assert_eq!(rows[1][3], "0.666666666667");
    assert_eq!(rows[1][6].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[1][7], "0.774596669241");

    let out = urbounds(&["example", "--b-re", "-0.5", "--b-im", "0.5", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["residual"], 0.0);
    assert!((v["moments"]["X"][0][1].as_f64().unwrap() + 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn scan_defaults() {
    let out = urbounds(&["scan-example"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1 + 37 * 37);
    for row in &rows[1..] {
        let (re, im): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let res: f64 = row[6].parse().unwrap();
        assert!(res >= -1e-12);
        if (re.abs() - im.abs()).abs() < 1e-9 {
            assert!(res.abs() < 1e-10, "{row:?}");
        }
    }
    let out = urbounds(&[
        "scan-example",
        "--a",
        "0.5",
        "--c",
        "0.5",
        "--re-min",
        "-0.6",
        "--re-max",
        "0.6",
        "--re-step",
        "0.6",
        "--im-min",
        "0",
        "--im-max",
        "0",
        "--im-step",
        "0.1",
    ]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][2], "nonnormalizable");
    assert_eq!(rows[1][3], "");
    assert_eq!(rows[2][2], "ok");
}

#[test]
fn frontier_rows() {
    let out = urbounds(&["frontier", "--mu-min", "1", "--mu-max", "1", "--steps", "1"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(
        rows[0].join(","),
        "mu,phi_exact,phi_tilde,phi_asym,support,abs_diff_lead,scaled_diff_lead"
    );
    assert_eq!((rows[1][1].as_str(), rows[1][2].as_str()), ("1", "1"));

    let out = urbounds(&["frontier", "--mu-min", "0.25", "--mu-max", "0.25", "--steps", "1"]);
    let rows = csv_rows(&stdout(&out));
    let phi: f64 = rows[1][1].parse().unwrap();
    assert!((phi - 3.58579).abs() < 1e-5);
    assert_eq!(rows[1][4], "5");

    let out = urbounds(&["frontier", "--steps", "10", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 10);
    assert_eq!(v[9]["phi_exact"], 1.0);
}

#[test]
fn verify_is_clean_and_deterministic() {
    let out = urbounds(&["verify", "--seed", "0", "--trials", "500", "--dim", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["trials"], 500);

    let a = urbounds(&[
        "verify",
        "--seed",
        "3",
        "--trials",
        "50",
        "--dim",
        "2",
        "--dim-max",
        "8",
        "--format",
        "csv",
    ]);
    let b = Command::new(env!("CARGO_BIN_EXE_urbounds"))
        .args([
            "verify",
            "--seed",
            "3",
            "--trials",
            "50",
            "--dim",
            "2",
            "--dim-max",
            "8",
            "--format",
            "csv",
        ])
        .env("URBOUNDS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let rows = csv_rows(&stdout(&a));
    assert_eq!(rows.len(), 51);
    assert!(rows[1..].iter().all(|r| r[0] == "3"));

    let one = urbounds(&["verify", "--trials", "1"]);
    assert_eq!(json(&one)["trials"], 1);
    assert_eq!(one.stdout, urbounds(&["verify", "--trials", "1"]).stdout);
}

#[test]
fn threads_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_urbounds"))
        .args(["verify", "--trials", "2"])
        .env("URBOUNDS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("frontier.csv");
    let out = urbounds(&["frontier", "--steps", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 4);
}
