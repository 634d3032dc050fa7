//! Integration tests for the `ctyper` binary: happy paths, error exits,
//! and the file-based pipeline.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ctyper")
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ctyper-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).args(args).current_dir(dir).output().unwrap()
}

fn write_project(root: &Path, name: &str, source: &str) -> PathBuf {
    let dir = root.join(name);
    fs::create_dir_all(&dir).unwrap();
    fs::write(dir.join("Main.java"), source).unwrap();
    dir
}

const PATH_PROJECT: &str = "\
import java.io.File;\n\
class Main {\n\
    void run(String path, String fileName) {\n\
        new File(path);\n\
        new File(fileName);\n\
    }\n\
}\n";

const MIXED_PROJECT: &str = "\
import java.io.File;\n\
import java.net.ServerSocket;\n\
class Main {\n\
    void run(String filePath, int serverPort) {\n\
        new File(filePath);\n\
        new ServerSocket(serverPort);\n\
    }\n\
}\n";

#[test]
fn extract_two_projects_writes_jsonl_and_counts() {
    let dir = temp_dir("extract");
    write_project(&dir, "one", PATH_PROJECT);
    write_project(&dir, "two", MIXED_PROJECT);
    let out = run_in(&dir, &["extract", "--out", "o", "one=one", "two=two"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("o/one.jsonl").is_file());
    assert!(dir.join("o/two.jsonl").is_file());
    let counts = fs::read_to_string(dir.join("o/counts.tsv")).unwrap();
    assert!(counts.starts_with("project\tPATH\t"));
    assert!(counts.contains("one\t2\t"), "counts were:\n{counts}");
    let jsonl = fs::read_to_string(dir.join("o/one.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 2);
    assert!(jsonl.contains("\"label\":\"PATH\""));
}

#[test]
fn extract_accepts_manifest_files() {
    let dir = temp_dir("manifest");
    write_project(&dir, "one", PATH_PROJECT);
    write_project(&dir, "two", MIXED_PROJECT);
    fs::write(dir.join("projects.tsv"), "one\tone\ntwo\ttwo\n").unwrap();
    let out = run_in(&dir, &["extract", "--out", "o", "projects.tsv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("o/one.jsonl").is_file() && dir.join("o/two.jsonl").is_file());
}

#[test]
fn missing_root_fails_only_that_project() {
    let dir = temp_dir("partial");
    write_project(&dir, "one", PATH_PROJECT);
    let out = run_in(&dir, &["extract", "--out", "o", "one=one", "ghost=missing"]);
    assert!(out.status.success(), "partial failure must not abort");
    assert!(dir.join("o/one.jsonl").is_file());
    assert!(!dir.join("o/ghost.jsonl").exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ghost"));

    let all_bad = run_in(&dir, &["extract", "--out", "o2", "ghost=missing"]);
    assert!(!all_bad.status.success(), "all projects failing must exit nonzero");
}

#[test]
fn unparseable_file_is_skipped_with_diagnostic() {
    let dir = temp_dir("skip");
    let proj = write_project(&dir, "one", PATH_PROJECT);
    fs::write(proj.join("Broken.java"), "class Broken { int i = ; }").unwrap();
    let out = run_in(&dir, &["extract", "--out", "o", "one=one"]);
    assert!(out.status.success());
    let log = fs::read_to_string(dir.join("o/extract.log")).unwrap();
    assert!(log.contains("Broken.java"), "log was:\n{log}");
    let jsonl = fs::read_to_string(dir.join("o/one.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 2, "good file still extracted");
}

#[test]
fn train_then_predict_expression() {
    let dir = temp_dir("train");
    write_project(&dir, "one", PATH_PROJECT);
    write_project(&dir, "two", MIXED_PROJECT);
    assert!(run_in(&dir, &["extract", "--out", "o", "one=one", "two=two"])
        .status
        .success());
    let out = run_in(
        &dir,
        &["train", "--min-items", "1", "--out", "t", "o/one.jsonl", "o/two.jsonl"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("t/tree.json").is_file());
    let rules = fs::read_to_string(dir.join("t/rules.txt")).unwrap();
    assert!(rules.contains("ctype = PATH"), "rules were:\n{rules}");

    let predict = run_in(&dir, &["predict", "--tree", "t/tree.json", "--expr", "configPath"]);
    assert!(predict.status.success());
    assert_eq!(String::from_utf8_lossy(&predict.stdout).trim(), "PATH");

    let port = run_in(&dir, &["predict", "--tree", "t/tree.json", "--expr", "serverPort"]);
    assert_eq!(String::from_utf8_lossy(&port.stdout).trim(), "PORT");
}

#[test]
fn pure_corpus_trains_single_leaf() {
    let dir = temp_dir("leaf");
    write_project(&dir, "one", PATH_PROJECT);
    assert!(run_in(&dir, &["extract", "--out", "o", "one=one"]).status.success());
    assert!(run_in(&dir, &["train", "--out", "t", "o/one.jsonl"]).status.success());
    let rules = fs::read_to_string(dir.join("t/rules.txt")).unwrap();
    assert_eq!(rules.trim(), "ctype = PATH");
}

#[test]
fn predict_rejects_bad_expression() {
    let dir = temp_dir("badexpr");
    write_project(&dir, "one", PATH_PROJECT);
    assert!(run_in(&dir, &["extract", "--out", "o", "one=one"]).status.success());
    assert!(run_in(&dir, &["train", "--out", "t", "o/one.jsonl"]).status.success());
    let out = run_in(&dir, &["predict", "--tree", "t/tree.json", "--expr", "\"not an expr"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot parse"));
}

#[test]
fn predict_occurrence_file_reports_mismatches() {
    let dir = temp_dir("mismatch");
    write_project(&dir, "one", PATH_PROJECT);
    write_project(&dir, "two", MIXED_PROJECT);
    assert!(run_in(&dir, &["extract", "--out", "o", "one=one", "two=two"])
        .status
        .success());
    // train on PATH only, then re-classify the mixed project: the PORT
    // occurrence must be flagged
    assert!(run_in(&dir, &["train", "--out", "t", "o/one.jsonl"]).status.success());
    let out = run_in(&dir, &["predict", "--tree", "t/tree.json", "o/two.jsonl"]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mismatch:"), "stderr was:\n{stderr}");
    assert!(stderr.contains("serverPort"));
}

#[test]
fn evaluate_needs_two_projects() {
    let dir = temp_dir("singleproj");
    write_project(&dir, "one", PATH_PROJECT);
    assert!(run_in(&dir, &["extract", "--out", "o", "one=one"]).status.success());
    let out = run_in(&dir, &["evaluate", "--out", "e", "o/one.jsonl"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("two projects"));
}

#[test]
fn evaluate_writes_metrics_and_confusion() {
    let dir = temp_dir("evaluate");
    for name in ["p1", "p2", "p3"] {
        write_project(&dir, name, MIXED_PROJECT);
    }
    assert!(run_in(
        &dir,
        &["extract", "--out", "o", "p1=p1", "p2=p2", "p3=p3"]
    )
    .status
    .success());
    let out = run_in(
        &dir,
        &["evaluate", "--min-items", "1", "--out", "e", "o/p1.jsonl", "o/p2.jsonl", "o/p3.jsonl"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics = fs::read_to_string(dir.join("e/metrics.tsv")).unwrap();
    // identical projects are perfectly separable across folds
    assert!(metrics.contains("PATH\t3\t1.0000\t1.0000\t1.0000"), "metrics:\n{metrics}");
    assert!(metrics.lines().last().unwrap().starts_with("Average\t"));
    let confusion = fs::read_to_string(dir.join("e/confusion.tsv")).unwrap();
    assert!(confusion.starts_with("truth\\pred\tPATH\t"));
    assert!(dir.join("e/metrics.txt").is_file() && dir.join("e/confusion.txt").is_file());
}

#[test]
fn train_on_empty_data_exits_nonzero() {
    let dir = temp_dir("emptytrain");
    fs::write(dir.join("empty.jsonl"), "").unwrap();
    let out = run_in(&dir, &["train", "--out", "t", "empty.jsonl"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}

#[test]
fn report_writes_all_tables() {
    let dir = temp_dir("report");
    write_project(&dir, "one", MIXED_PROJECT);
    write_project(&dir, "two", MIXED_PROJECT);
    assert!(run_in(&dir, &["extract", "--out", "o", "one=one", "two=two"])
        .status
        .success());
    let out = run_in(&dir, &["report", "--out", "r", "o/one.jsonl", "o/two.jsonl"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let tops = fs::read_to_string(dir.join("r/top_expressions.txt")).unwrap();
    assert!(tops.contains("== PATH ==") && tops.contains("filePath"));
    let words = fs::read_to_string(dir.join("r/top_words.txt")).unwrap();
    assert!(words.contains("== PORT =="));
    // "port" is used by both projects, so its project count is 2
    assert!(words.contains("     2  port"), "words:\n{words}");
    let lengths = fs::read_to_string(dir.join("r/lengths.tsv")).unwrap();
    assert!(lengths.starts_with("ctype\t1\t2\t"));
    assert!(dir.join("r/counts.tsv").is_file());
}

#[test]
fn custom_registry_overrides_bundled() {
    let dir = temp_dir("registry");
    write_project(&dir, "one", MIXED_PROJECT);
    // a registry that only knows ServerSocket: the File call must not match
    fs::write(dir.join("custom.txt"), "java.net.ServerSocket.<init>(I)V 0=PORT\n").unwrap();
    let out = run_in(
        &dir,
        &["extract", "--registry", "custom.txt", "--out", "o", "one=one"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let jsonl = fs::read_to_string(dir.join("o/one.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 1);
    assert!(jsonl.contains("\"label\":\"PORT\""));
}

#[test]
fn camel_segmentation_flag_changes_features() {
    let dir = temp_dir("camel");
    let src = "\
import java.net.URI;\n\
class Main {\n\
    void run(String URLString) {\n\
        new URI(URLString);\n\
    }\n\
}\n";
    write_project(&dir, "one", src);
    assert!(run_in(&dir, &["extract", "--out", "lit", "one=one"]).status.success());
    assert!(run_in(
        &dir,
        &["extract", "--segmentation", "camel", "--out", "cam", "one=one"]
    )
    .status
    .success());
    let literal = fs::read_to_string(dir.join("lit/one.jsonl")).unwrap();
    let camel = fs::read_to_string(dir.join("cam/one.jsonl")).unwrap();
    assert!(literal.contains("urls"), "literal mode splits URLString as urls|tring");
    assert!(camel.contains("\"url\"") && camel.contains("\"string\""));
}

#[test]
fn rejects_bad_flags() {
    let dir = temp_dir("flags");
    write_project(&dir, "one", PATH_PROJECT);
    let out = run_in(
        &dir,
        &["extract", "--segmentation", "nonsense", "--out", "o", "one=one"],
    );
    assert!(!out.status.success());
    let out = run_in(&dir, &["train", "--min-items", "0", "--out", "t", "x.jsonl"]);
    assert!(!out.status.success());
}
