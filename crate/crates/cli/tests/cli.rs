use std::io::Write;
use std::process::{Command, Output, Stdio};

fn omegabase(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_omegabase"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn field_arithmetic_from_args_and_stdin() {
    let o = omegabase(&["field", "mul", "a0 + 1", "a0 - 1"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1 + a0^2");

    let o = omegabase(&["field", "compare"], "a0\n1/1000000\n");
    assert_eq!(stdout(&o).trim(), "LT");

    let o = omegabase(&["field", "compare", "a0^100", "1/1000", "--max-degree", "128"], "");
    assert_eq!(stdout(&o).trim(), "LT");
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(omegabase(&["field", "invert", "0"], "").status.code(), Some(2));
    assert_eq!(omegabase(&["field", "add", "a0 +"], "").status.code(), Some(2));
    assert_eq!(omegabase(&["frobnicate"], "").status.code(), Some(2));
}

#[test]
fn unknown_suite_lists_the_suites() {
    let o = omegabase(&["suite", "nonexistent"], "");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    for name in ["field-axioms", "rd-lemmas", "uniformity"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn suite_json_is_deterministic_and_lists_empty_failures() {
    let args = ["suite", "abelian-sin", "reduced-power", "--seed", "7", "--scale", "0.05", "--json"];
    let a = omegabase(&args, "");
    let b = omegabase(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports[0]["suite"], "abelian-sin");
    assert_eq!(reports[1]["suite"], "reduced-power");
    assert_eq!(reports[0]["failures"], serde_json::json!([]));
    assert!(reports[0].get("wall_time_ms").is_none());
}

#[test]
fn report_merges_files_into_one_table() {
    let dir = std::env::temp_dir().join(format!("omegabase-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let run = |suite: &str, out: &std::path::Path| {
        let o = omegabase(&["suite", suite, "--scale", "0.05", "--out", out.to_str().unwrap()], "");
        assert_eq!(o.status.code(), Some(0));
    };
    run("rd-lemmas", &a);
    run("abelian-sin", &b);
    let o = omegabase(&["report", a.to_str().unwrap(), b.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    let table = stdout(&o);
    let rows: Vec<&str> = table.lines().filter(|l| l.contains("🟢 pass")).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("| abelian-sin"));

    // a failing report turns the exit status to 1
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    v[0]["failure_count"] = 1.into();
    v[0]["failures"] = serde_json::json!([{"case": 3, "input": "x", "detail": "d", "repro": "omegabase suite rd-lemmas"}]);
    std::fs::write(&a, v.to_string()).unwrap();
    let o = omegabase(&["report", a.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("omegabase suite rd-lemmas"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn group_and_order_verbs_read_json() {
    let o = omegabase(&["group", "sym-member"], r#"{"word": "a b", "sets": [["b"], ["a"]], "horizon": 2}"#);
    assert!(stdout(&o).starts_with("yes"), "{}", stdout(&o));
    let o = omegabase(&["group", "sym-member"], r#"{"word": "a a b", "sets": [["b"], ["a"]], "horizon": 2}"#);
    assert!(stdout(&o).starts_with("no"));

    let poset = r#"{"elements": ["0", "1", "2"], "order": [["0", "1"], ["1", "2"]]}"#;
    let input = format!(r#"{{"domain": {poset}, "codomain": {poset}, "map": {{"0": "0", "1": "2", "2": "2"}}}}"#);
    let o = omegabase(&["order", "check-map", "--json"], &input);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v, serde_json::json!({"monotone": true, "cofinal": true}));

    let o = omegabase(&["order", "diagonal", "--json"], r#"{"family": [{"values": [3, 0]}, {"values": [1, 8]}]}"#);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["z"]["values"], serde_json::json!([4, 9]));
}

#[test]
fn uniformity_verbs_on_the_convergent_sequence() {
    let space = r#"{"kind": "convergent_sequence", "n_max": 10}"#;
    let o = omegabase(
        &["uniformity", "cofinal-search", "--json"],
        &format!(r#"{{"space": {space}, "neighbourhood": {{"radii": ["1/5","1","1","1","1","1","1","1","1","1","1"]}}}}"#),
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"], "found");
    assert_eq!(v["alpha"]["values"], serde_json::json!([3]));
}
