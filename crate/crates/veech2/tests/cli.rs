//! End-to-end tests of the command line binary: purity (byte-identical
//! reruns), exit codes, oracle agreement, and well-formed SVG.

use std::process::{Command, Output};

fn veech2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veech2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn veech2_stdin(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_veech2"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

const GOLDEN_L_ARGS: [&str; 14] = [
    "build", "--family", "h2", "--d", "5", "--w", "1,0,1", "1,1,2", "--h", "1,0,1", "1,1,2",
    "--t", "3,-1,2", "0,0,1",
];

fn golden_l_json() -> String {
    let out = veech2(&GOLDEN_L_ARGS);
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn build_is_pure_and_validates() {
    let a = veech2(&GOLDEN_L_ARGS);
    let b = veech2(&GOLDEN_L_ARGS);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same inputs must give identical bytes");

    let surface = golden_l_json();
    let out = veech2_stdin(&["validate", "--input", "-"], &surface);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), r#"{"genus":2,"zero_orders":[2]}"#);
}

#[test]
fn jinv_reports_exact_zeroes() {
    let surface = golden_l_json();
    let out = veech2_stdin(&["jinv", "--input", "-"], &surface);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["jxx"], serde_json::json!(["0", "1"]));
    assert_eq!(v["jyy"], serde_json::json!(["0", "1"]));
}

#[test]
fn veech_verdict_exit_codes() {
    let surface = golden_l_json();
    let out = veech2_stdin(&["veech", "--input", "-", "--bound", "2"], &surface);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "proved");

    // The equation-violating surface is refuted: exit code 2.
    let bad = veech2(&[
        "build", "--family", "h2", "--d", "2", "--w", "1,0,1", "0,1,1", "--h", "1,0,1",
        "1,0,1", "--t", "0,0,1", "0,0,1",
    ]);
    assert!(bad.status.success());
    let bad_json = String::from_utf8(bad.stdout).unwrap();
    let out = veech2_stdin(&["veech", "--input", "-", "--bound", "3"], &bad_json);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["witness"]["type"], "equation-residual");
}

#[test]
fn decompose_prints_cylinders() {
    let surface = golden_l_json();
    let out = veech2_stdin(&["decompose", "--input", "-", "--dir", "0,0,0,0"], &surface);
    // Zero direction is a usage-level error.
    assert_eq!(out.status.code(), Some(1));

    // The horizontal direction (1 + 0√d, 0 + 0√d).
    let out = veech2_stdin(&["decompose", "--input", "-", "--dir", "1,0,0,0"], &surface);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pattern"], "two-cylinder");
    assert_eq!(v["cylinders"].as_array().unwrap().len(), 2);
    // Twist of the narrow cylinder is (3−√5)/2.
    assert_eq!(
        v["cylinders"][0]["twist"],
        serde_json::json!(["3", "2", "-1", "2"])
    );
}

#[test]
fn enumerate_oracle_agreement_and_count() {
    let fast = veech2(&["enumerate", "--d", "2", "--c1", "0", "--c2", "1", "--box", "4"]);
    let slow = veech2(&[
        "enumerate", "--d", "2", "--c1", "0", "--c2", "1", "--box", "4", "--oracle",
    ]);
    assert!(fast.status.success() && slow.status.success());
    assert_eq!(fast.stdout, slow.stdout, "oracle must agree byte for byte");

    let count = veech2(&[
        "enumerate", "--d", "2", "--c1", "0", "--c2", "1", "--box", "4", "--count-only",
    ]);
    let n: usize = String::from_utf8(count.stdout).unwrap().trim().parse().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&fast.stdout).unwrap();
    assert_eq!(v["count"].as_u64().unwrap() as usize, n);
    assert_eq!(v["solutions"].as_array().unwrap().len(), n);
}

#[test]
fn export_svg_is_xml() {
    let surface = golden_l_json();
    let out = veech2_stdin(&["export-svg", "--input", "-"], &surface);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    roxmltree::Document::parse(&svg).expect("well-formed XML");

    let out = veech2_stdin(
        &["export-svg", "--input", "-", "--dir", "1,0,0,1"],
        &surface,
    );
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    roxmltree::Document::parse(&svg).expect("well-formed XML with bands");
    assert!(svg.contains("cylinder-0") && svg.contains("cylinder-1"));
}

#[test]
fn usage_errors_exit_one() {
    let out = veech2(&[
        "build", "--family", "nope", "--d", "5", "--w", "1,0,1", "--h", "1,0,1", "--t",
        "0,0,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = veech2(&["enumerate", "--d", "4", "--c1", "0", "--c2", "1", "--box", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cap_env_var_is_honored() {
    let surface = golden_l_json();
    // A tiny cap makes every direction inconclusive (exit 3).
    use std::process::Stdio;
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_veech2"))
        .args(["decompose", "--input", "-", "--dir", "1,1,1,0"])
        .env("VEECH2_CAP", "0")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(surface.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
