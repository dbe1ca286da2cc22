use std::path::Path;
use std::process::{Command, Output};

fn pavls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pavls"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = pavls(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_certify() {
    let dir = tempfile::tempdir().unwrap();
    let warm = dir.path().join("warm.txt");
    ok(&["construct", "warmup", "--k", "8", "-o", arg(&warm)]);
    let seq = dir.path().join("warm.txt.seq");
    assert!(dir.path().join("warm.txt.labels").exists());
    let report = ok(&[
        "certify",
        "--election",
        arg(&warm),
        "--sequence",
        arg(&seq),
        "--epsilon",
        "threshold",
    ]);
    assert!(report.contains("certified"));
    assert!(report.contains("swaps: 21 replayed: 21"), "{report}");

    let layered = dir.path().join("l.txt");
    ok(&[
        "construct",
        "layered",
        "--levels",
        "2",
        "--k",
        "20",
        "-o",
        arg(&layered),
    ]);
    let out = pavls(&[
        "certify",
        "--election",
        arg(&layered),
        "--sequence",
        arg(&dir.path().join("l.txt.seq")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not good"));
}

#[test]
fn sample_run_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("ic.txt");
    ok(&[
        "sample",
        "--model",
        "ic:0.4",
        "--voters",
        "30",
        "--candidates",
        "9",
        "--k",
        "3",
        "--seed",
        "5",
        "-o",
        arg(&e),
    ]);
    assert_eq!(std::fs::read_to_string(&e).unwrap(), {
        let again = dir.path().join("again.txt");
        ok(&[
            "sample",
            "--model",
            "ic:0.4",
            "--voters",
            "30",
            "--candidates",
            "9",
            "--k",
            "3",
            "--seed",
            "5",
            "-o",
            arg(&again),
        ]);
        std::fs::read_to_string(&again).unwrap()
    });
    let trace = dir.path().join("trace.csv");
    let run = ok(&[
        "run",
        "--election",
        arg(&e),
        "--rule",
        "best",
        "--trace",
        arg(&trace),
    ]);
    let fin = run
        .lines()
        .find_map(|l| l.strip_prefix("final committee: "))
        .unwrap();
    let members = fin.trim_matches(|c| c == '{' || c == '}');
    let check = ok(&[
        "oracle",
        "--mode",
        "local-opt",
        "--election",
        arg(&e),
        "--committee",
        members,
    ]);
    assert!(check.contains("locally optimal: true"), "{check}");
    assert!(std::fs::read_to_string(&trace)
        .unwrap()
        .starts_with("step,out,in,delta,delta_float,cumulative_comparisons\r\n"));
    let opt = ok(&["oracle", "--mode", "optimum", "--election", arg(&e)]);
    assert!(opt.contains("optimum score: "));
}

#[test]
fn experiment_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp");
    let agg = ok(&[
        "experiment",
        "--k",
        "3,4",
        "--repetitions",
        "4",
        "--seed",
        "9",
        "--out-dir",
        arg(&out),
    ]);
    let file = std::fs::read_to_string(out.join("aggregate.csv")).unwrap();
    assert_eq!(agg, file);
    assert_eq!(file.lines().count(), 1 + 2 * 2);
    let runs = std::fs::read_to_string(out.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 1 + 2 * 2 * 4);
}

#[test]
fn gain_search_and_bad_input() {
    let report = ok(&[
        "oracle",
        "--mode",
        "gain-search",
        "--levels",
        "2",
        "--k-min",
        "19",
        "--k-max",
        "21",
    ]);
    assert!(report.contains("first pass: k = 21"), "{report}");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "pavls 1 2 1\ncand 0 a\ncand 1 b\nballot 1: 0 7\n").unwrap();
    let out = pavls(&["run", "--election", arg(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    assert!(!pavls(&["bogus"]).status.success());
}
