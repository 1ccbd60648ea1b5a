use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn example(name: &str) -> String {
    root()
        .join("examples")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmirror"))
        .args(args)
        .env_remove("FRACMIRROR_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Compares against `tests/golden/<name>.json`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let path = root().join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let expected = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(text, expected, "golden mismatch for {name}");
    text
}

#[test]
fn golden_quartic() {
    let text = golden("p3_quartic", &["all", &example("p3_quartic"), "-N", "10"]);
    for needle in [
        "38440454795264",
        "\"-60\"",
        "θ^4 - 256z(θ+7/8)(θ+5/8)(θ+3/8)(θ+1/8)",
        "-4046848",
    ] {
        assert!(text.contains(needle.trim_matches('"')), "{needle}");
    }
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["euler"]["chi_y"], -60);
    assert_eq!(v["hodge"]["hodge"]["entries"]["21"], 31);
}

#[test]
fn golden_eight_hyperplanes() {
    let text = golden(
        "p3_eight_hyperplanes",
        &["all", &example("p3_eight_hyperplanes"), "-N", "10"],
    );
    assert!(text.contains("30593496064"));
    assert!(text.contains("θ^4 - z(θ+1/2)^4"));
}

#[test]
fn golden_k3() {
    let text = golden("p2_k3", &["all", &example("p2_k3"), "-N", "10"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["euler"]["chi_y"], 12);
    assert_eq!(v["euler"]["chi_y_dual"], 12);
    assert!(v.get("yukawa").is_none());
}

#[test]
fn golden_transition() {
    let text = golden(
        "transition_polytopes",
        &["transition", &example("transition_polytopes")],
    );
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["index"], "8");
    assert_eq!(
        v["relations"],
        serde_json::json!([["1", "1", "1", "4", "1"]])
    );
}

#[test]
fn euler_k3() {
    let out = run(&["euler", &example("p2_k3")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        (v["chi_y"].as_i64(), v["chi_y_dual"].as_i64()),
        (Some(12), Some(12))
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn repeated_runs_are_identical() {
    let a = run(&["yukawa", &example("p3_quartic"), "-N", "6"]);
    let b = run(&["yukawa", &example("p3_quartic"), "-N", "6"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn missing_file_is_a_validation_failure() {
    assert_eq!(run(&["pf", "does_not_exist.json"]).status.code(), Some(2));
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir().join(format!("fracmirror-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        "{\n  \"delta\": {\"dim\": 2,\n  \"vertices\": [[1, 0]\n}",
    )
    .unwrap();
    let out = run(&["euler", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn invalid_partition_is_a_validation_failure() {
    let dir = std::env::temp_dir().join(format!("fracmirror-cli-part-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("part.json");
    std::fs::write(
        &path,
        r#"{"delta": {"dim": 2, "vertices": [[2, -1], [-1, 2], [-1, -1]]}, "parts": [[0, 1], [1, 2]]}"#,
    )
    .unwrap();
    assert_eq!(
        run(&["dual-nef", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn failed_transition_check_is_an_assertion() {
    let text = std::fs::read_to_string(example("transition_polytopes")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["nu"][0] = serde_json::json!([2, 0, 0, 1]);
    let dir = std::env::temp_dir().join(format!("fracmirror-cli-tr-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("transition.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(
        run(&["transition", path.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn truncation_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_fracmirror"))
        .args(["mirror-map", &example("p3_quartic"), "-N", "20"])
        .env("FRACMIRROR_MAX_N", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        run(&["mirror-map", &example("p3_quartic"), "-N", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table_output() {
    let out = run(&[
        "mirror-map",
        &example("p3_quartic"),
        "-N",
        "3",
        "--format",
        "table",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("z_of_q = [0, 256, -4046848, 18282602496]"),
        "{text}"
    );
}

#[test]
fn explicit_normalization() {
    let out = run(&[
        "yukawa",
        &example("p3_quartic"),
        "-N",
        "2",
        "--normalization",
        "4",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["a_model"],
        serde_json::json!(["4", "59008", "2061417600"])
    );
}
