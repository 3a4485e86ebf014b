mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chainpair::pdb_io::{load_chain, parse_pdb};
use chainpair::{discrete_frechet, euclidean_distance};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainpair")).current_dir(dir).args(args).output().unwrap()
}

fn run(args: &[&str]) -> Output {
    run_in(&fixtures(), args)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key).map(str::trim)).unwrap_or_else(|| panic!("no `{key}` in {text}"))
}

#[test]
fn frechet_matches_library_bit_for_bit() {
    let out = run(&["frechet", "a.csv", "b.json"]);
    assert!(out.status.success());
    let printed: f64 = stdout(&out).trim().parse().unwrap();
    let a = load_chain(&fixtures().join("a.csv"), None).unwrap();
    let b = load_chain(&fixtures().join("b.json"), None).unwrap();
    assert_eq!(printed.to_bits(), discrete_frechet(&a, &b).unwrap().value.to_bits());
}

#[test]
fn frechet_witness_is_a_coupling() {
    let out = run(&["frechet", "a.csv", "b.json", "--witness"]);
    let text = stdout(&out);
    let pairs: Vec<(usize, usize)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (i, j) = l.split_once(' ').unwrap();
            (i.parse().unwrap(), j.parse().unwrap())
        })
        .collect();
    assert_eq!(pairs.first(), Some(&(0, 0)));
    assert_eq!(pairs.last(), Some(&(6, 4)));
    for w in pairs.windows(2) {
        let (di, dj) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        assert!(di <= 1 && dj <= 1 && di + dj >= 1);
    }
}

#[test]
fn cps3f_json_matches_golden() {
    let out =
        run(&["cps3f", "a.csv", "b.json", "--d1", "1.5", "--d2", "1.6", "--d3", "0.8", "--reconstruct", "--json", "-"]);
    assert!(out.status.success());
    let mut doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["timing"]["elapsed_seconds"].as_f64().unwrap() >= 0.0);
    doc.as_object_mut().unwrap().remove("timing");
    let golden: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixtures().join("cps3f_golden.json")).unwrap()).unwrap();
    assert_eq!(doc, golden);
}

#[test]
fn cps3f_text_and_decision() {
    let args = ["cps3f", "a.csv", "b.json", "--d1", "1.5", "--d2", "1.6", "--d3", "0.8"];
    let out = run(&[&args[..], &["--k", "3"]].concat());
    assert!(out.status.success());
    assert_eq!(field(&stdout(&out), "k_star"), "3");
    assert_eq!(field(&stdout(&out), "decision"), "yes");
    let out = run(&[&args[..], &["--k", "2"]].concat());
    assert_eq!(field(&stdout(&out), "decision"), "no");

    let capped = run(&[&args[..], &["--r-cap", "2"]].concat());
    assert_eq!(capped.status.code(), Some(1));
    let warm = run(&[&args[..], &["--r-cap", "1", "--warm-cap"]].concat());
    assert!(warm.status.success());
    assert_eq!(field(&stdout(&warm), "k_star"), "3");
}

#[test]
fn json_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out =
        run(&["cps3f", "a.csv", "b.json", "--d1", "2", "--d2", "2", "--d3", "1", "--json", report.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(field(&stdout(&out), "k_star"), "2");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["result"]["k_star"], 2);
}

#[test]
fn usage_and_input_errors_exit_2() {
    for args in [
        &["cps3f", "a.csv", "b.json", "--d1", "1", "--d2", "1", "--d3", "1", "--k", "0"][..],
        &["cps3f", "a.csv", "b.json", "--d1", "-1", "--d2", "1", "--d3", "1"],
        &["cps3f", "a.csv", "missing.csv", "--d1", "1", "--d2", "1", "--d3", "1"],
        &["cps3f", "a.csv", "b.json", "--d1", "1", "--d2", "1", "--d3", "1", "--endpoint-mode", "loose"],
        &["frechet", "a.csv", "b.txtx"],
        &["bench", "--table", "4"],
        &["no-such-command"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn infeasible_exits_1() {
    let out =
        run(&["cps3f", "a.csv", "b.json", "--d1", "0", "--d2", "0", "--d3", "0.1", "--endpoint-mode", "anchored"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no feasible"));
}

#[test]
fn simplify_min_k_at_zero_keeps_every_vertex() {
    let out = run(&["simplify-min-k", "a.csv", "a.csv", "--delta", "0"]);
    assert!(out.status.success());
    assert_eq!(field(&stdout(&out), "length"), "7");
}

#[test]
fn simplify_min_delta_reports_a_distance() {
    let out = run(&["simplify-min-delta", "a.csv", "b.json", "--k", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let delta: f64 = field(&text, "delta").parse().unwrap();
    let a = load_chain(&fixtures().join("a.csv"), None).unwrap();
    let b = load_chain(&fixtures().join("b.json"), None).unwrap();
    assert!(a.points().iter().any(|p| b.points().iter().any(|q| euclidean_distance(p, q).unwrap() == delta)));
    assert!(field(&text, "length").parse::<usize>().unwrap() <= 2);
}

#[test]
fn reduction_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["reduction", "--set", "1,2,3", "--write", "inst"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(field(&text, "partition"), "yes");
    assert_eq!(field(&text, "decision"), "yes");
    let (d1, d3, budget) = (field(&text, "d1"), field(&text, "d3"), field(&text, "budget"));
    let solve = |k: &str| {
        let out = run_in(
            dir.path(),
            &[
                "wcps3f",
                "inst/a.csv",
                "inst/b.csv",
                "--d1",
                d1,
                "--d2",
                d1,
                "--d3",
                d3,
                "--endpoint-mode",
                "anchored",
                "--k",
                k,
            ],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        field(&stdout(&out), "decision").to_owned()
    };
    assert_eq!(solve(budget), "yes");

    let out = run(&["reduction", "--set", "1,1,3"]);
    assert_eq!(field(&stdout(&out), "partition"), "no");
    assert_eq!(field(&stdout(&out), "decision"), "no");
}

#[test]
fn pdb_selector_reads_ca_trace() {
    let dir = tempfile::tempdir().unwrap();
    let entry = common::pdb_entry(&[('A', common::helix(12, [0.0; 3])), ('B', common::helix(9, [0.4, 0.0, 0.0]))]);
    std::fs::write(dir.path().join("toy.pdb"), &entry).unwrap();

    let record = parse_pdb(&entry, 'A').unwrap();
    assert_eq!(record.chain.len(), 12);
    for w in record.chain.points().windows(2) {
        let d = euclidean_distance(&w[0], &w[1]).unwrap();
        assert!((2.8..=4.5).contains(&d), "CA spacing {d}");
    }

    let out = run_in(dir.path(), &["frechet", "toy.pdb:A", "toy.pdb:B"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let b = parse_pdb(&entry, 'B').unwrap();
    let expected = discrete_frechet(&record.chain, &b.chain).unwrap().value;
    assert_eq!(stdout(&out).trim().parse::<f64>().unwrap(), expected);

    let out = run_in(dir.path(), &["frechet", "toy.pdb:A", "toy.pdb:Z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_without_cache_reports_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let out = run(&["bench", "--table", "2", "--rows", "1hfj.c", "--cache-dir", cache, "--out", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["status"], "ERROR");
    assert_eq!(rows[0]["expected_k"], 15);
}
