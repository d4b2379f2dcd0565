use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nocode::Code;
use serde_json::Value;

fn nocode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nocode"))
        .args(args)
        .env_remove("NOCODE_CAP")
        .output()
        .unwrap()
}

fn exit(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn without_elapsed(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed_ms");
    }
    v
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.txt", "# q=2\n11000\n11010\n");
    let out = nocode(&["verify", &good]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("non-overlapping"));

    let bad = write(dir.path(), "bad.txt", "# q=2\n1100\n10\n");
    let out = nocode(&["verify", &bad]);
    assert_eq!(exit(&out), 1);
    assert!(stdout(&out).contains("10 subword of 1100 at offset 1"));

    let out = nocode(&["--format", "json", "verify", &bad]);
    assert_eq!(exit(&out), 1);
    let v = json(&out);
    assert_eq!(v["non_overlapping"], false);
    assert_eq!(v["witness"]["kind"], "SubwordContainment");
    assert_eq!(v["witness"]["u"], "10");
    assert_eq!(v["witness"]["offset"], 1);

    let self_overlap = write(dir.path(), "self.txt", "# q=2\n1001\n");
    let v = json(&nocode(&["--format", "json", "verify", &self_overlap]));
    assert_eq!(v["witness"]["kind"], "PrefixSuffixOverlap");
    assert_eq!(v["witness"]["evidence"], "1");

    let symbol = write(dir.path(), "symbol.txt", "# q=2\n0120\n");
    assert_eq!(exit(&nocode(&["verify", &symbol])), 2);
    assert_eq!(exit(&nocode(&["verify", "/nonexistent/code.txt"])), 2);
}

#[test]
fn extend_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.txt", "# q=3\n12\n102\n");
    let output = dir.path().join("t.txt");
    let out = nocode(&["extend", &input, "-o", output.to_str().unwrap()]);
    assert_eq!(exit(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("2 → 2"));
    let text = fs::read_to_string(&output).unwrap();
    let extended = Code::parse(&text).unwrap();
    assert_eq!(extended.render(), text);
    assert_eq!(text, "# q=3\n102\n122\n");

    // to stdout, with the report moved to stderr
    let out = nocode(&["extend", &input]);
    assert_eq!(stdout(&out), "# q=3\n102\n122\n");
    assert!(stderr(&out).contains("2 → 2"));

    let fixed = write(dir.path(), "f.txt", "# q=2\n11000\n11010\n");
    assert_eq!(stdout(&nocode(&["extend", &fixed])), "# q=2\n11000\n11010\n");

    let bad = write(dir.path(), "bad.txt", "# q=2\n01\n001\n");
    assert_eq!(exit(&nocode(&["extend", &bad])), 1);
    let out = nocode(&["extend", &bad, "--force"]);
    assert_eq!(exit(&out), 0);
    assert_eq!(stdout(&out), "# q=2\n001\n011\n");
}

#[test]
fn search_reports() {
    let v = json(&nocode(&["--format", "json", "max-fixed", "-n", "2", "-q", "2"]));
    assert_eq!(v["cardinality"], 1);
    for key in ["n", "q", "cardinality", "code", "nodes_expanded", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let out = nocode(&["--format", "json", "max-variable", "-n", "3", "-q", "2"]);
    assert_eq!(exit(&out), 0);
    let v = json(&out);
    assert!(v["cardinality"].as_u64() <= v["fixed_cardinality"].as_u64());

    let out = nocode(&["--format", "json", "max-fixed", "-n", "3", "-q", "3", "--strategy", "exhaustive"]);
    assert_eq!(json(&out)["cardinality"], 4);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let out = nocode(&["max-fixed", "-n", "4", "-q", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(exit(&out), 0);
    let code = Code::parse(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(code.len(), 8);
}

#[test]
fn caps_and_budgets_exit_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_nocode"))
        .args(["max-fixed", "-n", "5", "-q", "3"])
        .env("NOCODE_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(exit(&out), 3);
    assert!(stderr(&out).contains("lower bound"));

    let out = nocode(&["--format", "json", "max-fixed", "-n", "4", "-q", "4", "--node-budget", "2"]);
    assert_eq!(exit(&out), 3);
    assert!(json(&out)["cardinality"].as_u64().is_some());

    let out = Command::new(env!("CARGO_BIN_EXE_nocode"))
        .args(["max-fixed", "-n", "2", "-q", "2"])
        .env("NOCODE_CAP", "zero")
        .output()
        .unwrap();
    assert_eq!(exit(&out), 2);
}

#[test]
fn bounds_reports() {
    let v = json(&nocode(&["--format", "json", "bounds", "-n", "3", "-q", "2"]));
    assert_eq!(v["levenshtein_real"], "32/27");
    assert_eq!(v["levenshtein_floor"], 1);
    assert_eq!(v["classic_lower"], 1);
    assert_eq!(v["exact_C"], Value::Null);

    let v = json(&nocode(&["--format", "json", "bounds", "-n", "2", "-q", "4", "--exact"]));
    assert_eq!(v["exact_C"], 4);
    assert_eq!(v["levenshtein_floor"], 4);

    let v = json(&nocode(&["--format", "json", "bounds", "-n", "3", "-q", "2", "-m", "2", "--exact"]));
    assert_eq!(v["trivial_sum_upper"]["value"], 2);
    assert_eq!(v["trivial_sum_upper"]["source"], "exact");

    let v = json(&nocode(&["--format", "json", "bounds", "-n", "40", "-q", "64"]));
    assert!(v["levenshtein_floor"].is_u64() || v["levenshtein_floor"].is_number());
    assert!(v["levenshtein_real"].as_str().unwrap().contains('/'));
}

#[test]
fn stats_reports() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.txt", "# q=3\n12\n102\n");
    let v = json(&nocode(&["--format", "json", "stats", &s]));
    assert_eq!(v["avg_length"], "5/2");
    assert_eq!(v["entropy_floor"], 1);

    let f = write(dir.path(), "f.txt", "# q=2\n11000\n11010\n");
    let v = json(&nocode(&["--format", "json", "stats", &f]));
    assert_eq!(v["avg_length"], "5");
    assert_eq!(v["entropy_floor"], 1);

    let empty = write(dir.path(), "e.txt", "");
    assert_eq!(exit(&nocode(&["stats", &empty])), 2);
    let header_only = write(dir.path(), "h.txt", "# q=2\n");
    assert_eq!(exit(&nocode(&["stats", &header_only])), 2);
    let bad = write(dir.path(), "bad.txt", "# q=2\n1100\n10\n");
    assert_eq!(exit(&nocode(&["stats", &bad])), 1);
}

#[test]
fn maximal_and_classic() {
    let v = json(&nocode(&["--format", "json", "maximal", "-n", "3", "-q", "3", "--seed", "0"]));
    assert_eq!(v["maximal"], true);
    assert_eq!(v["code"], serde_json::json!(["01", "02"]));

    let dir = tempfile::tempdir().unwrap();
    let not_max = write(dir.path(), "m.txt", "# q=2\n");
    let out = nocode(&["maximal", "--input", &not_max, "-n", "2"]);
    assert_eq!(exit(&out), 1);
    assert!(stdout(&out).contains("01"));
    let max = write(dir.path(), "x.txt", "# q=2\n01\n");
    assert_eq!(exit(&nocode(&["maximal", "--input", &max])), 0);

    let out = nocode(&["classic", "-n", "3", "-q", "3"]);
    assert_eq!(stdout(&out), "# q=3\n011\n012\n021\n022\n");
}

#[test]
fn stdin_and_stdout_dashes() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_nocode"))
        .args(["extend", "-", "-o", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"# q=3\n012\n0112\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(exit(&out), 0);
    assert_eq!(stdout(&out), "# q=3\n0112\n0122\n");
}

#[test]
fn outputs_repeat_apart_from_elapsed_time() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.txt", "# q=3\n12\n102\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["--format", "json", "max-fixed", "-n", "4", "-q", "3"],
        vec!["--format", "json", "max-variable", "-n", "4", "-q", "3"],
        vec!["--format", "json", "max-variable", "-n", "4", "-q", "2", "--strategy", "exhaustive"],
        vec!["--format", "json", "maximal", "-n", "4", "-q", "3", "--seed", "17"],
        vec!["--format", "json", "classic", "-n", "4", "-q", "3"],
        vec!["--format", "json", "bounds", "-n", "4", "-q", "3", "-m", "2", "--exact"],
        vec!["--format", "json", "stats", &input],
        vec!["--format", "json", "verify", &input],
        vec!["extend", &input],
    ];
    for args in runs {
        let a = nocode(&args);
        let b = nocode(&args);
        assert_eq!(exit(&a), exit(&b));
        if args[0] == "--format" {
            assert_eq!(without_elapsed(json(&a)), without_elapsed(json(&b)), "{args:?}");
        } else {
            assert_eq!(a.stdout, b.stdout, "{args:?}");
        }
    }
}
