use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ratio_spec() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/ratio257.json")
}

fn qfe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfe"))
        .args(args)
        .output()
        .expect("run qfe")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_doc(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn cyclo_and_qint() {
    let out = qfe(&["cyclo", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "q^2 - q + 1\n");
    assert_eq!(stdout(&qfe(&["cyclo", "1"])), "q - 1\n");
    assert_eq!(stdout(&qfe(&["qint", "3", "2"])), "q^4 + q^2 + 1\n");
    assert_eq!(stdout(&qfe(&["qint", "4"])), "q^3 + q^2 + q + 1\n");
    let out = qfe(&["--json", "cyclo", "12"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], "q^4 - q^2 + 1");
    assert_eq!(v["degree"], 4);
}

#[test]
fn synth_ratio_example() {
    let spec = ratio_spec();
    let out = qfe(&["synth", "--spec", spec.to_str().unwrap(), "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "q^18 - q^17 + q^15 - q^14 + q^12 - q^11 + q^9 - q^7 + q^6 - q^4 + q^3 - q + 1\n"
    );
    let out = qfe(&["--json", "synth", "--spec", spec.to_str().unwrap(), "10"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["numerator_degree"], 18);
    assert_eq!(v["polynomial"], true);
}

#[test]
fn decompose_ratio_example() {
    let spec = ratio_spec();
    let out = qfe(&["decompose", "--spec", spec.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        v,
        serde_json::json!({
            "primes": [2, 5, 7],
            "lambda": {"2": "1", "5": "1", "7": "1"},
            "t0": "0",
            "terms": [{"r": 1, "t": -1}, {"r": 3, "t": 1}],
        })
    );
    let text = stdout(&qfe(&["decompose", "--spec", spec.to_str().unwrap()]));
    assert_eq!(
        text,
        "primes: 2 5 7\nlambda: 2=1 5=1 7=1\nt0: 0\nterms: 1:-1 3:1\nt1: 2\n"
    );
}

#[test]
fn decompose_output_feeds_closed_form() {
    let spec = ratio_spec();
    let doc = qfe(&["--json", "decompose", "--spec", spec.to_str().unwrap()]);
    let file = temp_doc(&stdout(&doc));
    let path = file.path().to_str().unwrap();
    for n in ["2", "10", "35"] {
        let closed = qfe(&["closed-form", "--structure", path, n]);
        let synth = qfe(&["synth", "--spec", spec.to_str().unwrap(), n]);
        assert_eq!(closed.status.code(), Some(0));
        assert_eq!(stdout(&closed), stdout(&synth));
    }
    assert_eq!(stdout(&qfe(&["closed-form", "--structure", path, "3"])), "0\n");
}

#[test]
fn check_and_verify() {
    let spec = ratio_spec();
    let out = qfe(&["check", "--spec", spec.to_str().unwrap()]);
    assert_eq!(
        (out.status.code(), stdout(&out).as_str()),
        (Some(0), "commutativity holds\n")
    );
    let out = qfe(&["verify", "--spec", spec.to_str().unwrap(), "5", "14"]);
    assert_eq!(out.status.code(), Some(0));

    let bad = temp_doc(r#"{"primes": [2, 3], "generators": {"2": "qint(2)", "3": "qint(3,2)"}}"#);
    let path = bad.path().to_str().unwrap();
    let out = qfe(&["check", "--spec", path]);
    assert_eq!(
        (out.status.code(), stdout(&out).as_str()),
        (Some(1), "commutativity fails for (2, 3)\n")
    );
    let out = qfe(&["--json", "check", "--spec", path]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violations"], serde_json::json!([[2, 3]]));
    assert_eq!(qfe(&["verify", "--spec", path, "2", "3"]).status.code(), Some(1));
    assert_eq!(qfe(&["synth", "--spec", path, "6"]).status.code(), Some(1));
    let out = qfe(&["--json", "decompose", "--spec", path]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "not-a-solution");
}

#[test]
fn standard_form() {
    let out = qfe(&["standard-form", "q^3*qint(2)/(2*q-2*q^2)"]);
    assert_eq!(stdout(&out), "lambda: -1/2\ne: 2\nu: q + 1\nv: q - 1\n");
    let out = qfe(&["--json", "standard-form", "qint(5,3)/qint(5,1)"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lambda"], "1");
    assert_eq!(v["e"], 0);
    assert_eq!(v["u"], "q^8 - q^7 + q^5 - q^4 + q^3 - q + 1");
    assert_eq!(v["v"], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(qfe(&["standard-form", "q^(1/2)"]).status.code(), Some(2));
    assert_eq!(qfe(&["standard-form", "0"]).status.code(), Some(1));
    assert_eq!(qfe(&["standard-form", "1/(q-q)"]).status.code(), Some(1));
    assert_eq!(qfe(&["cyclo", "0"]).status.code(), Some(2));
    assert_eq!(qfe(&["cyclo"]).status.code(), Some(2));
    assert_eq!(qfe(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qfe(&["qint", "3000000", "3000000"]).status.code(), Some(2));
    assert_eq!(
        qfe(&["check", "--spec", "/nonexistent/spec.json"]).status.code(),
        Some(2)
    );

    let typo = temp_doc(r#"{"primes": [2, 3], "generator": {"2": "q", "3": "q"}}"#);
    let out = qfe(&["--json", "check", "--spec", typo.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "schema");

    let single = temp_doc(r#"{"primes": [3], "generators": {"3": "qint(3)"}}"#);
    let out = qfe(&["decompose", "--spec", single.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let spec = ratio_spec();
    let args = ["--json", "decompose", "--spec", spec.to_str().unwrap()];
    let first = qfe(&args);
    for _ in 0..3 {
        assert_eq!(qfe(&args).stdout, first.stdout);
    }
    let args = ["synth", "--spec", spec.to_str().unwrap(), "70"];
    assert_eq!(qfe(&args).stdout, qfe(&args).stdout);
}
