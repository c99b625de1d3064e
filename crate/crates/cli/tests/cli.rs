//! End-to-end behaviour of the command-line front end.

use std::path::PathBuf;

use qtheta_cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qtheta").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("qtheta-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn expand_theta_text() {
    let (code, out, _) = call(&["expand", "theta", "--j", "0", "--m", "1", "--order", "5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "1 + q*(z^1+z^-1) + q^4*(z^2+z^-2)");
}

#[test]
fn expand_eta_is_pentagonal() {
    let (code, out, _) = call(&["expand", "eta", "--order", "3", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let text = v.to_string();
    // q^{1/24}(1 − q − q² + …)
    for exp in ["1/24", "25/24", "49/24"] {
        assert!(text.contains(exp), "{exp} missing in {text}");
    }
}

#[test]
fn expand_character_leads_with_a_phase() {
    let (code, out, _) = call(&["expand", "character", "--m", "2", "--m2", "1", "--order", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("q^(7/48)"), "{out}");
    // i = w²
    assert!(out.starts_with("q^(7/48)*(w^2*z^(1/2)+w^2*z^(-1/2))"), "{out}");
}

#[test]
fn expand_rejects_bad_parameters() {
    assert_eq!(call(&["expand", "theta", "--j", "0", "--m", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["expand", "character", "--m", "3", "--m2", "1"]).0, EXIT_USAGE);
    assert_eq!(call(&["expand", "numerator", "--m", "2", "--s", "1"]).0, EXIT_USAGE);
    assert_eq!(call(&["expand", "eta", "--order", "-1"]).0, EXIT_USAGE);
    assert_eq!(call(&["expand", "eta", "--order", "x"]).0, EXIT_USAGE);
}

#[test]
fn verify_single_and_unknown() {
    let (code, out, _) = call(&["verify", "--id", "S2.mumford.item2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("S2.mumford.item2") && out.contains("pass"), "{out}");
    let (code, _, err) = call(&["verify", "--id", "nonsense"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("nonsense"));
    assert_eq!(call(&["verify"]).0, EXIT_USAGE);
}

#[test]
fn verify_failure_exits_one() {
    let (code, out, _) = call(&["verify", "--id", "S5.R0.zfree", "--format", "json"]);
    assert_eq!(code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["fail"], 1);
    assert_eq!(v["reports"][0]["first_mismatch"], serde_json::json!(["11/48", "-1/2"]));
}

#[test]
fn verify_json_schema() {
    let (code, out, _) = call(&["verify", "--prefix", "S3.char", "--format", "json", "--order", "8"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["certified_order"], "8/1");
        assert!(r["wall_ms"].is_null());
        assert!(r["first_mismatch"].is_null());
    }
}

#[test]
fn verify_markdown_table() {
    let (code, out, _) = call(&["verify", "--id", "S2.squares.item3", "--format", "markdown"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("| id | kind | status |"));
    assert!(out.contains("**1 pass, 0 fail, 0 error**"));
}

#[test]
fn verify_is_byte_identical_across_jobs() {
    let a = call(&["verify", "--prefix", "S3", "--format", "json", "--jobs", "1"]);
    let b = call(&["verify", "--prefix", "S3", "--format", "json", "--jobs", "4"]);
    assert_eq!(a, b);
}

#[test]
fn branch_outputs() {
    let (code, out, _) = call(&["branch", "--left", "1:0", "--right", "1:1", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["decomposition"]["status"], "exact");
    assert_eq!(v["basis"], serde_json::json!(["2:1"]));
    let (code, _, err) = call(&["branch", "--left", "1:0", "--right", "2:0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("basis not available in paper"));
    assert_eq!(call(&["branch", "--left", "1:5", "--right", "1:0"]).0, EXIT_USAGE);
}

#[test]
fn list_filters_by_prefix() {
    let (code, out, _) = call(&["list", "--prefix", "S3.char.K1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn config_files_supply_defaults() {
    let toml = temp_file("a.toml", "default_order = \"3\"\noutput_format = \"json\"\nparallelism = 2\n");
    let (code, out, _) = call(&["--config", toml.to_str().unwrap(), "expand", "eta"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.to_string().contains("\"3/1\""), "{v}");

    // flags override the file
    let (_, out, _) = call(&["--config", toml.to_str().unwrap(), "--format", "text", "expand", "eta"]);
    assert!(!out.trim_start().starts_with('{'));

    let json = temp_file("b.json", r#"{"section_orders": {"S2": "3"}, "output_format": "json"}"#);
    let (code, out, _) = call(&["--config", json.to_str().unwrap(), "verify", "--id", "S2.squares.item3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"certified_order\": \"3/1\""), "{out}");

    let bad = temp_file("c.toml", "colour = \"red\"\n");
    assert_eq!(call(&["--config", bad.to_str().unwrap(), "list"]).0, EXIT_USAGE);
    let missing = std::env::temp_dir().join("qtheta-does-not-exist.toml");
    assert_eq!(call(&["--config", missing.to_str().unwrap(), "list"]).0, EXIT_USAGE);
    for p in [toml, json, bad] {
        let _ = std::fs::remove_file(p);
    }
}
