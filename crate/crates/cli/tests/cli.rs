//! End-to-end tests of the adeh binary: output schemas, exit codes, and
//! determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn adeh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adeh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is JSON")
}

#[test]
fn roots_summary_fields() {
    let out = adeh(&["roots", "--type", "A2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["type"], "A2");
    assert_eq!(v["root_count"], 6);
    assert_eq!(v["h"], 3);
    assert_eq!(v["orbit_count"], 2);

    let out = adeh(&["roots", "--type", "E8"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["root_count"], 240);
    assert_eq!(v["h"], 30);
    assert_eq!(
        v["exponents"],
        serde_json::json!([1, 7, 11, 13, 17, 19, 23, 29])
    );
    assert_eq!(v["orbit_count"], 8);

    let out = adeh(&["roots", "--type", "D5", "--format", "table"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("root count    40"), "{text}");
    assert!(text.contains("h             8"), "{text}");
}

#[test]
fn unsupported_type_exits_2_listing_families() {
    let out = adeh(&["roots", "--type", "B3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_str(&out);
    assert!(err.contains("supported families"), "{err}");
    assert!(err.contains('A') && err.contains('D') && err.contains('E'), "{err}");
}

#[test]
fn coeffs_values_and_digits() {
    let out = adeh(&["coeffs", "--type", "D4"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["sum_g"], "14");
    let approx: Vec<f64> = v["g"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["approx"].as_f64().unwrap())
        .collect();
    assert_eq!(approx, vec![0.5, 4.5, 4.5, 4.5]);

    let out = adeh(&["coeffs", "--type", "E7", "--digits", "12"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let g3 = &v["g"].as_array().unwrap()[2];
    assert_eq!(g3["approx"].as_f64().unwrap(), 1.5);
    assert_eq!(g3["exact"]["order"], 18);
    assert_eq!(g3["exact"]["coeffs"][0], "3/2");
    for k in 1..6 {
        assert_eq!(g3["exact"]["coeffs"][k], "0");
    }

    let out = adeh(&["coeffs", "--type", "A6"]);
    assert_eq!(stdout_json(&out)["sum_g"], "28");

    // digits outside 1..50 is a usage error
    let out = adeh(&["coeffs", "--type", "A2", "--digits", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = adeh(&["coeffs", "--type", "A2", "--digits", "51"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hirota_emission_and_determinism() {
    let run1 = adeh(&["hirota", "--type", "A1", "--max-weight", "6"]);
    assert!(run1.status.success());
    let v = stdout_json(&run1);
    assert_eq!(v["type"], "A1");
    assert_eq!(v["variables"], serde_json::json!([[1, 0], [3, 0], [5, 0]]));
    let counts = stderr_str(&run1);
    assert!(counts.contains("weight 0: 1 equations, 0 nonzero"), "{counts}");
    assert!(counts.contains("weight 4:"), "{counts}");

    // byte-identical across runs
    let run2 = adeh(&["hirota", "--type", "A1", "--max-weight", "6"]);
    assert_eq!(run1.stdout, run2.stdout);

    // with --out the JSON goes to the file and the counts to stdout
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.json");
    let run3 = adeh(&[
        "hirota",
        "--type",
        "A1",
        "--max-weight",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(run3.status.success());
    let file_contents = fs::read_to_string(&path).unwrap();
    assert_eq!(file_contents.trim_end(), stdout_str(&run1).trim_end());
    assert!(stdout_str(&run3).contains("weight 0: 1 equations"), "counts on stdout");
    assert!(stderr_str(&run3).is_empty());
}

fn write_tau(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_accepts_the_trivial_tau() {
    let dir = tempfile::tempdir().unwrap();
    let tau = write_tau(
        dir.path(),
        "one.json",
        r#"{"truncation_weight":3,"coeffs":[{"monomial":[],"hbar_poly":[["1",0]]}]}"#,
    );
    let out = adeh(&["check", "--type", "E6", "--max-weight", "3", &tau]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    assert!(stdout_str(&out).contains("all residuals zero"));
}

#[test]
fn check_locates_violations() {
    let dir = tempfile::tempdir().unwrap();
    // 1 + t_1^4/24 violates the weight-4 equations of the A1 system
    let tau = write_tau(
        dir.path(),
        "bad.json",
        r#"{"truncation_weight":4,"coeffs":[
            {"monomial":[],"hbar_poly":[["1",0]]},
            {"monomial":[[1,4]],"hbar_poly":[["1/24",0]]}]}"#,
    );
    let out = adeh(&["check", "--type", "A1", "--max-weight", "4", &tau]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_str(&out);
    assert!(text.contains("residual"), "{text}");
    assert!(text.contains("y_1"), "names the violated equation: {text}");

    // the JSON report carries the same residuals
    let out = adeh(&[
        "check", "--type", "A1", "--max-weight", "4", "--format", "json", &tau,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    let residuals = v["residuals"].as_array().unwrap();
    assert!(!residuals.is_empty());
    for r in residuals {
        assert!(r["equation"].is_array());
        assert!(r["value"]["coeffs"].is_array());
    }
}

#[test]
fn check_rejects_bad_input_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // truncation below the weight bound
    let tau = write_tau(
        dir.path(),
        "small.json",
        r#"{"truncation_weight":2,"coeffs":[{"monomial":[],"hbar_poly":[["1",0]]}]}"#,
    );
    let out = adeh(&["check", "--type", "A1", "--max-weight", "4", &tau]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_str(&out).contains("requires truncation >= 4"),
        "{}",
        stderr_str(&out)
    );

    // malformed JSON
    let bad = write_tau(dir.path(), "broken.json", "{not json");
    let out = adeh(&["check", "--type", "A1", "--max-weight", "2", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("malformed"), "{}", stderr_str(&out));

    // missing file
    let out = adeh(&["check", "--type", "A1", "--max-weight", "2", "/nonexistent/tau.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_filters_by_type() {
    let out = adeh(&["verify", "--type", "A3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("PASS structure-A3"), "{text}");
    assert!(text.contains("PASS tables-A3"), "{text}");
    assert!(text.contains("8 checks, 0 failed"), "{text}");
    // no other type appears
    for other in ["A1", "A2", "D4", "E6", "E8"] {
        assert!(!text.contains(&format!("-{other}\n")), "{text}");
    }
}

#[test]
fn verify_names_a_tampered_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let golden = adeh_core::golden::embedded("E8".parse().unwrap()).unwrap();
    let rendered = golden.render();
    let tampered = rendered.replacen("73/2", "71/2", 1);
    assert_ne!(rendered, tampered, "tamper target present");
    fs::write(dir.path().join("E8.json"), tampered).unwrap();

    let out = adeh(&[
        "verify",
        "--type",
        "E8",
        "--golden-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_str(&out);
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1, "{text}");
    assert!(fails[0].contains("tables-E8"), "{text}");
    assert!(fails[0].contains("g_1"), "{text}");
    assert!(text.contains("8 checks, 1 failed"), "{text}");
}

#[test]
fn thread_cap_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_adeh"))
        .args(["verify", "--type", "A1"])
        .env("ADEH_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    assert!(stdout_str(&out).contains("PASS structure-A1"));
}

#[cfg(unix)]
#[test]
fn closing_the_output_pipe_terminates_quietly() {
    use std::os::unix::process::ExitStatusExt;
    use std::process::Stdio;

    // A2 at weight 10 emits far more than a pipe buffer holds, so the
    // writes hit a closed pipe once the reader is dropped.
    let mut child = Command::new(env!("CARGO_BIN_EXE_adeh"))
        .args(["hirota", "--type", "A2", "--max-weight", "10"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    drop(child.stdout.take());
    let out = child.wait_with_output().expect("child reaped");

    assert_eq!(out.status.signal(), Some(libc::SIGPIPE));
    let err = stderr_str(&out);
    assert!(!err.contains("panicked"), "{err}");
}
