use std::fs;
use std::process::{Command, Output};

fn qdialogue(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdialogue"))
        .args(args)
        .current_dir(dir)
        .env_remove("QDIALOGUE_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

#[test]
fn attack_free_run_exits_zero_and_writes_default_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdialogue(&["run", "--trials", "50"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = fs::read_to_string(dir.path().join("qdialogue-results/results.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema"], "qdialogue.results.v1");
    assert_eq!(doc["all_pass"], true);
}

#[test]
fn env_var_moves_output_and_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("exp.conf"), "# base\ntrials = 40\nformat = json\nc = 0.25\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qdialogue"))
        .args(["run", "--config", "exp.conf", "--format", "csv"])
        .current_dir(dir.path())
        .env("QDIALOGUE_OUTPUT_DIR", "elsewhere")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("elsewhere/results.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("schema,attack,beta2,c,n_pairs,trials"));
    assert!(csv.lines().nth(1).unwrap().contains(",0.25,8,40,"));
}

#[test]
fn failed_comparison_exits_one() {
    // At N = 8 the per-dialogue closed form sits well outside 3 sigma of the
    // simulated rate once enough dialogues are run.
    let dir = tempfile::tempdir().unwrap();
    let out = qdialogue(
        &["run", "--attack", "entangle-measure", "--beta2", "0.25", "--trials", "20000", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL per_dialogue_detection "));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.conf"), "colour = red\n").unwrap();
    fs::write(dir.path().join("blocker"), "").unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["run", "--c", "1.2"], "control probability"),
        (&["run", "--attack", "wiretap"], "unknown attack strategy"),
        (&["run", "--attack", "entangle-measure"], "beta2"),
        (&["run", "--config", "bad.conf"], "unknown configuration key"),
        (&["run", "--trials", "5", "--out", "blocker/x.json"], "cannot write output"),
        (&["sweep", "--vary", "gamma", "--values", "1"], "cannot sweep"),
    ];
    for (args, message) in cases {
        let out = qdialogue(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(message), "{args:?}: {stderr}");
    }
}

#[test]
fn sweep_writes_combined_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdialogue(
        &["sweep", "--vary", "beta2", "--values", "0,0.1,0.25,0.5", "--trials", "200", "--format", "csv"],
        dir.path(),
    );
    assert!(out.status.code().is_some_and(|c| c <= 1));
    let csv = fs::read_to_string(dir.path().join("qdialogue-results/sweep-beta2.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn formulas_and_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdialogue(&["formulas"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("intercept-resend-literal") && text.contains("claimed"));
    let out = qdialogue(&["formulas", "--format", "json"], dir.path());
    let tables: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(tables["schema"], "qdialogue.formulas.v1");
    let out = qdialogue(&["selftest"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).matches("PASS").count(), 5);
}
