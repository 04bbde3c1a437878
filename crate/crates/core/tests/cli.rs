//! Drives the `twopath` binary.

use std::path::Path;
use std::process::{Command, Output};

fn twopath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twopath")).args(args).output().expect("spawn twopath")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn synth_into(dir: &Path, docs: &str, seed: &str) {
    let o = twopath(&["synth", "--docs", docs, "--planted-slurs", "30", "--implicit-patterns", "10", "--seed", seed, "--out", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn estimate_prints_the_weak_lstm_row() {
    let o = twopath(&["evaluate", "estimate", "--n", "419", "--k", "1000", "--tagged", "483298", "--corpus-size", "62000000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for line in ["precision 0.419", "recall 0.544", "f1 0.474"] {
        assert!(out.lines().any(|l| l == line), "missing `{line}` in:\n{out}");
    }
}

#[test]
fn missing_flag_is_a_usage_error() {
    let o = twopath(&["evaluate", "estimate", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = twopath(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"mode": "slur_only", "out": "o"}"#).unwrap();
    let o = twopath(&["bootstrap", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("corpus"));
}

#[test]
fn runtime_failure_exits_one_with_one_line() {
    let o = twopath(&["bootstrap", "--config", "/definitely/not/here.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).trim_end().lines().count(), 1, "{}", stderr(&o));

    let o = twopath(&["evaluate", "estimate", "--n", "5", "--k", "4", "--tagged", "10", "--corpus-size", "100"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"corpus": ["c.jsonl"], "learning_rate": 0.1}"#).unwrap();
    let o = twopath(&["bootstrap", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("learning_rate"), "{}", stderr(&o));
}

#[test]
fn synth_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    synth_into(a.path(), "3000", "7");
    synth_into(b.path(), "3000", "7");
    for f in ["corpus.jsonl", "truth.tsv", "embeddings.txt", "validation.csv", "planted.tsv", "patterns.tsv", "run.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn bootstrap_writes_identical_manifests_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    synth_into(dir.path(), "6000", "4");
    let cfg = dir.path().join("run.json");
    let mut manifests = Vec::new();
    for out in ["run_a", "run_b"] {
        let out = dir.path().join(out);
        let o = twopath(&["bootstrap", "--config", cfg.to_str().unwrap(), "--mode", "two_path", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(out.join("iter_0/pool.jsonl").exists());
        assert!(out.join("iter_1/model.ckpt").exists());
        assert!(out.join("iter_1/lexicon.tsv").exists());
        manifests.push(std::fs::read(out.join("manifest.json")).unwrap());
    }
    assert_eq!(manifests[0], manifests[1]);

    let pool = dir.path().join("run_a/iter_1/pool.jsonl");
    let o = twopath(&["evaluate", "exact", "--pool", pool.to_str().unwrap(), "--truth", dir.path().join("truth.tsv").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("precision"));

    let sample = dir.path().join("sample.csv");
    let o = twopath(&["evaluate", "sample", "--pool", pool.to_str().unwrap(), "--config", cfg.to_str().unwrap(), "--k", "5", "--out", sample.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&sample).unwrap().lines().count(), 6);

    let o = twopath(&["analyze", "temporal", "--pool", pool.to_str().unwrap(), "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("day,hateful,total,ratio\n"));

    let o = twopath(&["analyze", "top", "--pool", pool.to_str().unwrap(), "--corpus", dir.path().join("corpus.jsonl").to_str().unwrap(), "--field", "mentions", "--k", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("rank,item,count\n"));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    synth_into(dir.path(), "4000", "2");
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("o");
    let o = twopath(&["bootstrap", "--config", cfg.to_str().unwrap(), "--mode", "lstm_only", "--seed", "99", "--max-iterations", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["rng_seed"], 99);
    assert_eq!(manifest["config"]["mode"], "lstm_only");
    assert_eq!(manifest["iterations"].as_array().unwrap().len(), 1);
}

#[test]
fn ingest_and_gradcheck() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.jsonl");
    std::fs::write(&input, "{\"id\":\"1\",\"text\":\"Hi @x #y\"}\nbroken\n{\"id\":\"1\",\"text\":\"dup\"}\n").unwrap();
    let o = twopath(&["ingest", input.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("documents 1 dropped 2"), "{}", stdout(&o));

    let o = twopath(&["gradcheck", "--configs", "20", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"));
}
