use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hashmerge"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    let out = bin().current_dir(dir).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "hashmerge {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// synth, ingest, detect, label, fit-lda and featurize into `dir`.
fn pipeline(dir: &Path) -> PathBuf {
    run(
        dir,
        &[
            "synth", "--candidates", "40", "--seed", "3", "--background-per-month", "20", "--corpus", "tweets.jsonl",
            "--manifest", "manifest.tsv", "--resources", "res",
        ],
    );
    run(dir, &["ingest", "--input", "tweets.jsonl", "--output", "index.json"]);
    run(dir, &["detect", "--index", "index.json", "--output", "candidates.tsv"]);
    run(dir, &["label", "--index", "index.json", "--candidates", "candidates.tsv", "--output", "labels.tsv"]);
    run(
        dir,
        &[
            "fit-lda", "--index", "index.json", "--candidates", "labels.tsv", "--output", "lda.json", "--topics", "5",
            "--iterations", "20", "--seed", "3",
        ],
    );
    run(
        dir,
        &[
            "featurize", "--index", "index.json", "--candidates", "labels.tsv", "--lda", "lda.json", "--dictionary",
            "res/dictionary.txt", "--ngrams", "res/ngrams.tsv", "--pos", "res/pos.tsv", "--gazetteer",
            "res/gazetteer.tsv", "--output", "features.csv", "--schema", "features.schema.json",
        ],
    );
    dir.join("features.csv")
}

#[test]
fn label_output_reproduces_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let manifest = fs::read_to_string(dir.path().join("manifest.tsv")).unwrap();
    let labels = fs::read_to_string(dir.path().join("labels.tsv")).unwrap();
    assert_eq!(manifest.lines().count(), 41);
    assert_eq!(labels, manifest);
}

#[test]
fn repeated_cross_validation_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let cv = |name: &str| {
        let out = run(
            dir.path(),
            &["evaluate", "cv", "--features", "features.csv", "--folds", "10", "--seed", "7", "--output", name],
        );
        (fs::read(dir.path().join(name)).unwrap(), out.stdout)
    };
    let (a, out_a) = cv("cv1.json");
    let (b, out_b) = cv("cv2.json");
    assert_eq!(a, b);
    assert_eq!(out_a, out_b);
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["rows"], 40);
}

#[test]
fn downstream_commands_run_on_the_feature_matrix() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let d = dir.path();
    run(d, &["train", "--features", "features.csv", "--kind", "linsvm", "--output", "model.json"]);
    run(d, &["evaluate", "holdout", "--features", "features.csv", "--output", "holdout.json"]);
    run(d, &["rank-features", "--features", "features.csv", "--statistic", "ig", "--output", "rank.tsv"]);
    run(d, &["ablate", "--features", "features.csv", "--folds", "5", "--epochs", "50", "--output", "ablation.json"]);
    let model: serde_json::Value = serde_json::from_slice(&fs::read(d.join("model.json")).unwrap()).unwrap();
    assert_eq!(model["kind"], "linsvm");
    let rank = fs::read_to_string(d.join("rank.tsv")).unwrap();
    assert_eq!(rank.lines().next(), Some("rank\tstatistic\tfeature"));
    assert_eq!(rank.lines().count(), 67);
    let ablation: serde_json::Value = serde_json::from_slice(&fs::read(d.join("ablation.json")).unwrap()).unwrap();
    assert_eq!(ablation["combinations"].as_object().unwrap().len(), 7);
}

#[test]
fn missing_dictionary_is_a_user_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let out = bin()
        .current_dir(dir.path())
        .args([
            "featurize", "--index", "index.json", "--candidates", "labels.tsv", "--lda", "lda.json", "--dictionary",
            "res/nowhere.txt", "--ngrams", "res/ngrams.tsv", "--pos", "res/pos.tsv", "--gazetteer",
            "res/gazetteer.tsv", "--output", "other.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("res/nowhere.txt"));
    assert!(!dir.path().join("other.csv").exists());
}

#[test]
fn config_file_supplies_resources_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let d = dir.path();
    fs::write(
        d.join("pipeline.json"),
        r#"{"dictionary": "res/dictionary.txt", "ngrams": "res/ngrams.tsv", "pos": "res/pos.tsv",
            "gazetteer": "res/gazetteer.tsv", "horizons": [2, 6]}"#,
    )
    .unwrap();
    let base = [
        "--config", "pipeline.json", "featurize", "--index", "index.json", "--candidates", "labels.tsv", "--lda", "lda.json",
    ];
    run(d, &[&base[..], &["--output", "cfg.csv"]].concat());
    assert_eq!(fs::read(d.join("cfg.csv")).unwrap(), fs::read(d.join("features.csv")).unwrap());

    let rejected = bin().current_dir(d).args(base).args(["--horizon", "10", "--output", "t10.csv"]).output().unwrap();
    assert_eq!(rejected.status.code(), Some(1));
    run(d, &[&base[..], &["--horizon", "10", "--any-horizon", "--output", "t10.csv"]].concat());
}

#[test]
fn outputs_are_not_overwritten_without_force() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let args = ["ingest", "--input", "tweets.jsonl", "--output", "index.json"];
    let out = bin().current_dir(dir.path()).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
    run(dir.path(), &[&args[..], &["--force"]].concat());
}

#[test]
fn bad_arguments_exit_with_one() {
    let out = bin().args(["evaluate", "cv", "--features"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
