mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture;
use sjstream::engine::EmittedMatch;
use sjstream::stream::read_emissions;
use sjstream::GraphStatistics;

fn sjstream(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sjstream"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn query(name: &str) -> String {
    fixture(&format!("queries/{name}.json"))
        .display()
        .to_string()
}

fn stream(name: &str) -> String {
    fixture(&format!("streams/{name}.ndjson"))
        .display()
        .to_string()
}

fn read_sorted(p: &Path) -> Vec<EmittedMatch> {
    let mut v = read_emissions(&std::fs::read_to_string(p).unwrap()).unwrap();
    EmittedMatch::sort_canonical(&mut v);
    v
}

#[test]
fn run_matches_oracle_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("cyber_lateral_movement", "cyber"),
        ("cyber_exfiltration", "cyber"),
        ("news_common_keyword_location", "news"),
        ("chain_xy", "boundary"),
    ];
    for (q, s) in cases {
        let run = dir.path().join(format!("{q}.run"));
        let oracle = dir.path().join(format!("{q}.oracle"));
        let out = sjstream(&[
            "run",
            "--query",
            &query(q),
            "--stream",
            &stream(s),
            "--out",
            path(&run),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let out = sjstream(&[
            "oracle",
            "--query",
            &query(q),
            "--stream",
            &stream(s),
            "--out",
            path(&oracle),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let expected = read_sorted(&oracle);
        assert!(!expected.is_empty(), "{q} has no matches");
        assert_eq!(read_sorted(&run), expected, "{q}");
    }
}

#[test]
fn run_summary_goes_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out");
    let out = sjstream(&[
        "run",
        "--query",
        &query("cyber_lateral_movement"),
        "--query",
        &query("cyber_exfiltration"),
        "--stream",
        &stream("cyber"),
        "--out",
        path(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let summary: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(summary["edges_processed"], 166);
    assert_eq!(summary["dropped_late"], 0);
    assert_eq!(summary["queries"].as_array().unwrap().len(), 2);
    assert!(summary["edges_per_sec"].as_f64().unwrap() > 0.0);
    let lines = std::fs::read_to_string(&out_path).unwrap().lines().count() as u64;
    assert_eq!(summary["emitted"], lines);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let p = dir.path().join(format!("out{i}"));
            let o = sjstream(&[
                "run",
                "--query",
                &query("corpus_triangle"),
                "--query",
                &query("corpus_path3"),
                "--seed",
                "9",
                "--window-ms",
                "40",
                "--out",
                path(&p),
            ]);
            assert!(o.status.success());
            std::fs::read(p).unwrap()
        })
        .collect();
    assert!(!outs[0].is_empty());
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn malformed_stream_exits_2_with_partial_marker() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out");
    let o = sjstream(&[
        "run",
        "--query",
        &query("chain_xy"),
        "--stream",
        &stream("malformed"),
        "--out",
        path(&out_path),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text
        .lines()
        .last()
        .unwrap()
        .contains("\"partial_output\":true"));
}

#[test]
fn type_conflict_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out");
    let o = sjstream(&[
        "run",
        "--query",
        &query("chain_xy"),
        "--stream",
        &stream("type_conflict"),
        "--out",
        path(&out_path),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("already typed"));
}

#[test]
fn invalid_query_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"q","vertices":[{"qid":"a","type":"*"}],"edges":[]}"#,
    )
    .unwrap();
    let o = sjstream(&["plan", "--query", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let o = sjstream(&[
        "plan",
        "--query",
        &query("chain_xy"),
        "--max-leaf-size",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let o = sjstream(&[
        "run",
        "--query",
        &query("chain_xy"),
        "--stream",
        &stream("boundary"),
        "--out",
        "/nonexistent-dir/out",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stats_then_plan() {
    let dir = tempfile::tempdir().unwrap();
    let stats_path = dir.path().join("stats.json");
    let o = sjstream(&[
        "stats",
        "--stream",
        &stream("cyber"),
        "--out",
        path(&stats_path),
    ]);
    assert!(o.status.success());
    let stats = GraphStatistics::from_json(&std::fs::read_to_string(&stats_path).unwrap()).unwrap();
    assert_eq!(stats.total_edges, 166);
    assert_eq!(stats.edge_type_counts.values().sum::<u64>(), 166);

    let o = sjstream(&[
        "plan",
        "--query",
        &query("cyber_lateral_movement"),
        "--stats",
        path(&stats_path),
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("[root]") && text.contains("score"), "{text}");
    assert!(o.stderr.is_empty());
}

#[test]
fn plan_without_stats_warns_and_cold_starts() {
    let o = sjstream(&[
        "plan",
        "--query",
        &query("corpus_diamond"),
        "--stats",
        "/nonexistent/stats.json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cold-start"));
}

#[test]
fn dump_tree_reports_tables() {
    let o = sjstream(&[
        "dump-tree",
        "--query",
        &query("cyber_lateral_movement"),
        "--stream",
        &stream("cyber"),
        "--expiry-stride",
        "8",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dump: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tree = &dump[0]["tree"];
    assert_eq!(dump[0]["query"], "lateral-movement");
    assert_eq!(tree["completions"], 3);
    let evicted: u64 = tree["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["counters"]["evicted"].as_u64().unwrap())
        .sum();
    assert!(evicted > 0);
}
