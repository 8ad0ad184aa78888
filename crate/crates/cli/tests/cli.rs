use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ipro");

fn ipro(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("IPRO_OUTPUT_DIR").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn dst_config(dir: &Path, budget: u64, out: &str) -> PathBuf {
    write_config(
        dir,
        &format!("{out}.toml"),
        &format!(
            r#"
tolerance = 0.0
budget = {budget}
output_dir = "{out}"
[environment]
kind = "dst"
[oracle]
kind = "exact-approx"
allow_zero_tolerance = true
"#
        ),
    )
}

#[test]
fn dst_run_recovers_the_front() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dst_config(dir.path(), 500, "out");
    let out = ipro(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&out);
    assert_eq!(summary["front_size"], 10);
    assert_eq!(summary["error_bound"], 0.0);
    assert_eq!(summary["termination"], "converged");
    let front = std::fs::read_to_string(dir.path().join("out/front.csv")).unwrap();
    assert!(front.starts_with("o1,o2,solution_id\n"));
    assert!(front.contains("\n124,-19,"));
    assert!(front.contains("\n1,-1,"));
    let on_disk: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/summary.json")).unwrap())
            .unwrap();
    assert_eq!(on_disk, summary);

    let verify = ipro(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    let report = json(&verify);
    assert_eq!(report["epsilon"], 0.0);
    assert_eq!(report["max_utility_loss"], 0.0);
    assert_eq!(report["pass"], true);
}

#[test]
fn log_lines_have_the_fixed_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dst_config(dir.path(), 500, "out");
    ipro(&["run", "--config", cfg.to_str().unwrap()]);
    let log = std::fs::read_to_string(dir.path().join("out/iterations.jsonl")).unwrap();
    let mut saw_failure = false;
    for line in log.lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        let mut keys: Vec<_> = rec.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["error_bound", "front_size", "lower_size", "referent", "success", "t", "upper_size", "value"]
        );
        if rec["success"] == false {
            assert!(rec["value"].is_null());
            saw_failure = true;
        }
    }
    assert!(saw_failure);
}

#[test]
fn budget_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dst_config(dir.path(), 1, "out");
    let out = ipro(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let summary = json(&out);
    assert_eq!(summary["termination"], "budget_exhausted");
    assert!(summary["front_size"].as_u64().unwrap() >= 2);
}

#[test]
fn truncated_run_still_passes_the_audit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dst_config(dir.path(), 3, "out");
    assert_eq!(ipro(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let verify = ipro(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(json(&verify)["epsilon"].as_f64().unwrap() > 0.0);
}

#[test]
fn corrupted_log_fails_the_audit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dst_config(dir.path(), 500, "out");
    ipro(&["run", "--config", cfg.to_str().unwrap()]);
    let path = dir.path().join("out/iterations.jsonl");
    let log = std::fs::read_to_string(&path).unwrap();
    let forged = log.replacen("\"value\":[124.0,-19.0]", "\"value\":[130.0,-10.0]", 1);
    assert_ne!(forged, log);
    std::fs::write(&path, forged).unwrap();
    let verify = ipro(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(3));
    assert_eq!(json(&verify)["pass"], false);
}

#[test]
fn identical_seeds_give_identical_logs() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    std::fs::write(&points, "o1,o2,o3\n0,9,1\n9,0,2\n2,2,9\n5,5,5\n6,3,4\n3,6,4\n4,4,7\n1,1,1\n").unwrap();
    let body = r#"
tolerance = 0.0
budget = 200
seed = 7
[environment]
kind = "vectors"
path = "points.csv"
[oracle]
kind = "noisy"
p_fault = 0.3
[strategy]
kind = "epsilon_mixed"
p = 0.5
"#;
    let cfg = write_config(dir.path(), "r.toml", &format!("output_dir = \"a\"\n{body}"));
    let cfg2 = write_config(dir.path(), "s.toml", &format!("output_dir = \"b\"\n{body}"));
    assert_eq!(ipro(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(ipro(&["run", "--config", cfg2.to_str().unwrap()]).status.code(), Some(0));
    let a = std::fs::read(dir.path().join("a/iterations.jsonl")).unwrap();
    let b = std::fs::read(dir.path().join("b/iterations.jsonl")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn output_dir_can_be_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dst_config(dir.path(), 500, "out");
    let elsewhere = dir.path().join("elsewhere");
    let out = Command::new(BIN)
        .args(["run", "--config", cfg.to_str().unwrap()])
        .env("IPRO_OUTPUT_DIR", &elsewhere)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(elsewhere.join("iterations.jsonl").exists());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn bad_configs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write_config(
        dir.path(),
        "typo.toml",
        "tolerance = 1.0\ntolerence = 2.0\n[environment]\nkind = \"dst\"\n[oracle]\nkind = \"exact-weak\"\n",
    );
    let out = ipro(&["run", "--config", typo.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerence"));

    let zero = write_config(
        dir.path(),
        "zero.toml",
        "budget = 10\n[environment]\nkind = \"dst\"\n[oracle]\nkind = \"exact-approx\"\n",
    );
    assert_eq!(ipro(&["run", "--config", zero.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ipro(&["run", "--config", "/nonexistent.toml"]).status.code(), Some(1));
    let missing_log = dst_config(dir.path(), 10, "never-ran");
    assert_eq!(ipro(&["verify", "--config", missing_log.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn external_oracle_matches_in_process_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dst_config(dir.path(), 500, "out");
    let served = dst_config(dir.path(), 500, "ext");
    assert_eq!(ipro(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(0));
    let flag = format!("external:{BIN} serve-oracle --config {}", cfg.display());
    let out = ipro(&["run", "--config", served.to_str().unwrap(), "--oracle", &flag]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let a = std::fs::read(dir.path().join("out/iterations.jsonl")).unwrap();
    let b = std::fs::read(dir.path().join("ext/iterations.jsonl")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn momdp_file_environment() {
    let dir = tempfile::tempdir().unwrap();
    // Two-step chain: each step either pays (1, 0) or (0, 1).
    std::fs::write(
        dir.path().join("chain.toml"),
        r#"
states = 2
actions = 2
transitions = [[0, 0, 1, 1.0], [0, 1, 1, 1.0], [1, 0, 1, 1.0], [1, 1, 1, 1.0]]
rewards = [[0, 0, 1, [1.0, 0.0]], [0, 1, 1, [0.0, 1.0]], [1, 0, 1, [1.0, 0.0]], [1, 1, 1, [0.0, 1.0]]]
mu = [1.0, 0.0]
gamma = 1.0
horizon = 2
"#,
    )
    .unwrap();
    let cfg = write_config(
        dir.path(),
        "m.toml",
        "tolerance = 0.0\nbudget = 50\nuse_2d = true\n[environment]\nkind = \"momdp\"\npath = \"chain.toml\"\n[oracle]\nkind = \"exact-weak\"\n",
    );
    let out = ipro(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["front_size"], 3);
    assert_eq!(ipro(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn metrics_reports() {
    let dir = tempfile::tempdir().unwrap();
    let front = dir.path().join("front.csv");
    std::fs::write(&front, "o1,o2\n2,1\n1,2\n").unwrap();
    let inflated = dir.path().join("inflated.csv");
    std::fs::write(&inflated, "o1,o2\n2,1\n1,2\n1,1\n0.5,0.5\n").unwrap();
    let f = front.to_str().unwrap();

    let out = ipro(&["metrics", "--front", f, "--ref", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["hypervolume"], 3.0);
    assert!(report.get("epsilon").is_none());

    let out = ipro(&["metrics", "--front", f, "--ref", "0,0", "--truth", f]);
    let report = json(&out);
    assert_eq!(report["epsilon"], 0.0);
    assert_eq!(report["max_utility_loss"], 0.0);

    let out = ipro(&["metrics", "--front", inflated.to_str().unwrap(), "--ref", "0,0"]);
    assert_eq!(json(&out)["hypervolume"], 3.0);

    assert_eq!(ipro(&["metrics", "--front", f, "--ref", "0,x"]).status.code(), Some(1));
    let out = ipro(&["metrics", "--front", f, "--ref", "-1,-1"]);
    assert_eq!(json(&out)["hypervolume"], 8.0);
}
