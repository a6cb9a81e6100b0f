use std::process::Command;

fn seqspace(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_seqspace")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn norm_of_a_vector() {
    let (code, out, _) = seqspace(&["norm", "--space", r#"{"kind":"lp","p":2}"#, "--x", "[3,4]"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], 5.0);
    assert_eq!(v["method"], "closed_form");
}

#[test]
fn exit_codes() {
    assert_eq!(seqspace(&["fset", "--space", "{not json"]).0, 2);
    assert_eq!(seqspace(&["fset", "--space", r#"{"kind":"nope"}"#]).0, 3);
    assert_eq!(seqspace(&["fset", "--space", r#"{"kind":"lp","p":0.5}"#]).0, 4);
    assert_eq!(seqspace(&["fset", "--config", "/definitely/missing.json"]).0, 5);
    assert_eq!(seqspace(&["witness", "--kind", "zz", "--n", "2"]).0, 3);
}

#[test]
fn config_file_overrides_flags() {
    let dir = std::env::temp_dir().join(format!("seqspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"space":{"kind":"lp","p":4}}"#).unwrap();
    let (code, out, err) =
        seqspace(&["fset", "--space", r#"{"kind":"lp","p":2}"#, "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"), "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["f_interval"], serde_json::json!([4.0, 4.0]));
}

#[test]
fn scan_output_is_deterministic_csv() {
    let args = ["scan", "--p", "2", "--grid", "1:2:5", "--dim", "128", "--seed", "3"];
    let (code, a, _) = seqspace(&args);
    assert_eq!(code, 0);
    assert_eq!(a, seqspace(&args).1);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("schema_version,lambda,residual_estimate,method,dim,seed"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn shift_witness_exact() {
    let (code, out, _) = seqspace(&["witness", "--kind", "shift", "--lambda", "5/3", "--n", "4", "--j", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["identity_holds"], true);
    assert_eq!(v["report"]["lower_bound_holds"], true);
}

#[test]
fn verify_subset_writes_table() {
    let (code, out, err) = seqspace(&["verify", "--suite", "2,4", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert!(err.contains("[PASS]"));
}
