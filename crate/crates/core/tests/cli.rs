//! Drives the `eonsim` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eonsim::report::RESULTS_HEADER;

fn eonsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eonsim"))
        .args(args)
        .output()
        .expect("failed to launch eonsim")
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    let topo = manifest_dir().join("data/nsfnet.topo");
    let text = format!(
        "topology = {:?}\noutput = \"out/results.csv\"\n{body}",
        topo.display().to_string()
    );
    std::fs::write(&path, text).unwrap();
    path
}

const SMALL: &str = r#"
num_demands = 500
seeds = [1, 2]
erlangs = [200, 400]

[[metrics]]
metric = "LL"

[[metrics]]
metric = "LLU"
merge = "sqrt"
"#;

#[test]
fn run_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = eonsim(&["run", "--config", cfg.to_str().unwrap(), "--audit"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("nsfnet")).count(), 8);

    let csv = std::fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), RESULTS_HEADER.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    assert!(rows[0].starts_with("nsfnet,LL,linear,1,10,0.05,200,1,500,"));
    assert!(rows[7].starts_with("nsfnet,LLU,sqrt,1,10,0.025,400,2,500,"));
}

#[test]
fn seed_override_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let cfg = cfg.to_str().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let out = eonsim(&[
            "run", "--config", cfg, "--seed", "42", "--out", path.to_str().unwrap(), "--jobs", jobs,
        ]);
        assert!(out.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn missing_topology_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "topology = \"nowhere/missing.topo\"\noutput = \"o.csv\"\nseeds = [1]\nerlangs = [10]\n[[metrics]]\nmetric = \"LL\"\n",
    )
    .unwrap();
    let out = eonsim(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.topo"));
    assert!(!dir.path().join("o.csv").exists());
}

#[test]
fn invalid_config_exits_1_with_all_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "seeds = []\nerlangs = [100]\n[[metrics]]\nmetric = \"LLU\"\nalpha = -1\n",
    );
    let out = eonsim(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("alpha must be ≥ 0"), "{err}");
    assert!(err.contains("seeds must not be empty"), "{err}");

    let out = eonsim(&["run", "--config", "/definitely/not/here.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shipped_configs_validate() {
    let dir = manifest_dir().join("configs");
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let out = eonsim(&["validate", "--config", path.to_str().unwrap()]);
            assert!(
                out.status.success(),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
            count += 1;
        }
    }
    assert!(count >= 4);
}

#[test]
fn trace_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let path = dir.path().join("trace.csv");
    let out = eonsim(&[
        "trace",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
        "--load-index",
        "1",
        "--seed",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = eonsim::traffic::load_trace(&path).unwrap();
    assert_eq!(trace.len(), 500);
    let expected = eonsim::traffic::generate_trace_for(
        &eonsim::TrafficConfig::new(10.0, 0.025, 500, 2),
        14,
    );
    assert_eq!(trace, expected);

    let out = eonsim(&[
        "trace",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
        "--load-index",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outcome_logs_written_when_enabled() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "num_demands = 300\nseeds = [3]\nerlangs = [300]\nemit_outcome_log = true\n[[metrics]]\nmetric = \"LLP\"\n",
    );
    let out = eonsim(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let logs: Vec<_> = std::fs::read_dir(dir.path().join("out/results.outcomes"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(logs.len(), 1);
    let text = std::fs::read_to_string(&logs[0]).unwrap();
    assert!(text.starts_with(
        "demand_id,outcome,block_reason,path_nodes,modulation,slot_start,slot_count,path_length_km\n"
    ));
    assert_eq!(text.lines().count(), 301);
}
