//! The `evoset` binary: config files, flag overrides, exit codes, outputs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn evoset(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evoset"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("EVOSET_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn entropy_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = evoset(&["entropy", "--graph", "z", "--nmax", "12"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "entropy.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,entropy_nats,support,entropy_rate"));
    assert_eq!(lines.count(), 13);
    let meta: serde_json::Value = serde_json::from_str(&read(dir.path(), "metadata.json")).unwrap();
    assert!(meta.is_object());
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# small run\ngraph = z\nn_max = 30\nseed = 3\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = evoset(&["entropy", "--config", cfg.to_str().unwrap(), "--nmax", "5"], &out_dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(&out_dir, "entropy.csv").lines().count(), 7);
}

#[test]
fn malformed_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "graph z\n").unwrap();
    let out = evoset(&["entropy", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(evoset(&["entropy", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(1));
}

#[test]
fn invalid_values_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(evoset(&["entropy", "--graph", "nosuchgraph"], dir.path()).status.code(), Some(1));
    assert_eq!(evoset(&["evolve", "--graph", "z", "--c=-1"], dir.path()).status.code(), Some(1));
    assert_eq!(evoset(&["evolve", "--no-such-flag"], dir.path()).status.code(), Some(1));
    assert_eq!(evoset(&["entropy", "--graph", "z", "--x0", "z:1,2"], dir.path()).status.code(), Some(1));
}

#[test]
fn evolve_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["evolve", "--graph", "tree3", "--c", "0.5", "--mmax", "4", "--trials", "200", "--seed", "9"];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(evoset(&args, &a).status.code(), Some(0));
    assert_eq!(evoset(&args, &b).status.code(), Some(0));
    for name in ["trajectories.jsonl", "decay.csv"] {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    let first = read(&a, "trajectories.jsonl");
    let record: serde_json::Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    for key in ["m", "T", "L", "U"] {
        assert!(record.get(key).is_some(), "missing {key} in {record}");
    }
}

#[test]
fn exact_verify_suite_passes_on_the_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = evoset(&["verify", "--graph", "tree3", "--c", "0.2", "--suite", "exact"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let lines = read(dir.path(), "verify.jsonl");
    assert!(lines.lines().count() > 100);
    for line in lines.lines() {
        let r: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(r["pass"].as_bool().unwrap() || r["vacuous"].as_bool().unwrap(), "{line}");
    }
}

#[test]
fn escape_green_and_counterexample_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = evoset(&["escape", "--graph", "tree3", "--nmax", "20", "--radius", "2"], &dir.path().join("e"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(read(&dir.path().join("e"), "escape.csv").lines().count() > 1);

    let out = evoset(&["green", "--graph", "z3", "--horizon", "20"], &dir.path().join("g"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(&dir.path().join("g"), "green.csv").lines().count(), 22);

    let out = evoset(
        &[
            "counterexample",
            "--graph",
            "pendant_tower,hmax=6,nmax=5",
            "--nmax",
            "16",
            "--trials",
            "50",
            "--horizons",
            "100,1000",
        ],
        &dir.path().join("c"),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rates = read(&dir.path().join("c"), "rates.csv");
    assert_eq!(rates.lines().next(), Some("start,window_lo,window_hi,rate,tree_depth"));
}
