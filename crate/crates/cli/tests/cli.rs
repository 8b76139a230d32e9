use std::path::Path;
use std::process::{Command, Output};

fn edittag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edittag")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const CLEAN: &str = "The old teacher cleaned the car in the park .\nMy friend quickly opened a door near the station .\n";

#[test]
fn every_subcommand_has_help() {
    for cmd in ["tag", "apply", "noise", "train-toy", "predict", "score", "coverage"] {
        let out = edittag(&[cmd, "--help"]);
        assert!(out.status.success(), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("--"), "{cmd}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(edittag(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(edittag(&["tag"]).status.code(), Some(1));
    assert_eq!(edittag(&["--workers", "0", "coverage", "--src-tgt", "x"]).status.code(), Some(1));
    let out = edittag(&["coverage", "--src-tgt", "/nonexistent/pairs.tsv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/pairs.tsv"));
}

#[test]
fn bad_lines_are_reported_with_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = write(dir.path(), "pairs.tsv", "a b\ta b\nno tab here\n");
    let out = edittag(&["tag", "--src-tgt", s(&pairs), "--out", s(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("{}:2:", s(&pairs))), "{err}");

    let src = write(dir.path(), "src.txt", "a b\nc d\n");
    let edits = write(dir.path(), "edits.txt", "$KEEP $KEEP\n$KEEP\n");
    let out = edittag(&["apply", "--src", s(&src), "--edits", s(&edits), "--out", s(&dir.path().join("h"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));

    let short = write(dir.path(), "short.txt", "$KEEP $KEEP\n");
    let out = edittag(&["apply", "--src", s(&src), "--edits", s(&short), "--out", s(&dir.path().join("h"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line counts"));
}

#[test]
fn all_keep_apply_copies_source() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "src.txt", CLEAN);
    let keeps: String = CLEAN
        .lines()
        .map(|l| vec!["$KEEP"; l.split(' ').count()].join(" ") + "\n")
        .collect();
    let edits = write(dir.path(), "edits.txt", &keeps);
    let hyp = dir.path().join("hyp.txt");
    assert!(edittag(&["apply", "--src", s(&src), "--edits", s(&edits), "--out", s(&hyp)]).status.success());
    assert_eq!(std::fs::read_to_string(hyp).unwrap(), CLEAN);
}

#[test]
fn noise_tag_apply_roundtrip_and_predict_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let clean: String = edittag::sample_corpus::sample_lines(300, 4).join("\n") + "\n";
    let clean_p = write(d, "clean.txt", &clean);
    let profile = edittag::noiser::NoiseProfile::bundled();
    let mut single = profile.clone();
    single.single_edit = true;
    let profile_p = write(d, "p.profile", &single.render());
    let pairs = d.join("pairs.tsv");
    let stats = d.join("stats.json");
    let ok = |args: &[&str]| {
        let out = edittag(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    };
    ok(&["noise", "--in", s(&clean_p), "--profile", s(&profile_p), "--out", s(&pairs), "--stats", s(&stats)]);
    let stats: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(stats["lines"], 300);

    let labels = d.join("labels.jsonl");
    ok(&["tag", "--src-tgt", s(&pairs), "--out", s(&labels)]);
    let text = std::fs::read_to_string(&pairs).unwrap();
    let src: String = text.lines().map(|l| l.split('\t').next().unwrap().to_string() + "\n").collect();
    let tgt: String = text.lines().map(|l| l.split('\t').nth(1).unwrap().to_string() + "\n").collect();
    let src_p = write(d, "src.txt", &src);
    let hyp = d.join("hyp.txt");
    ok(&["apply", "--src", s(&src_p), "--edits", s(&labels), "--out", s(&hyp)]);
    assert_eq!(std::fs::read_to_string(&hyp).unwrap(), tgt);

    let model = d.join("m.bin");
    ok(&["train-toy", "--data", s(&labels), "--out", s(&model), "--epochs", "1", "--dim", "1024", "--heads", "5"]);
    let pred = d.join("pred.txt");
    ok(&["predict", "--model", s(&model), "--in", s(&src_p), "--out", s(&pred), "--min-error-prob", "1.0"]);
    assert_eq!(std::fs::read_to_string(&pred).unwrap(), src);

    let out = edittag(&["score", "--src", s(&src_p), "--hyp", s(&hyp), "--ref", s(&write(d, "ref.txt", &tgt))]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["F0.5"], 1.0);
    assert_eq!(report["sentence_count"], 300);
}
