#![allow(dead_code)]

use std::path::PathBuf;

use sjstream::engine::EmittedMatch;
use sjstream::graph::{TimestampedEdge, VertexRef};
use sjstream::query::{Label, QueryGraph};
use sjstream::synth::{generate, GeneratorConfig};
use sjstream::{parse_query, Engine, EngineConfig, GraphStatistics};

pub const CORPUS: [&str; 8] = [
    "path2",
    "path3",
    "star3",
    "triangle",
    "cycle4",
    "diamond",
    "fork_join",
    "tree5",
];

/// Tight, loose and effectively infinite windows for synthetic streams
/// (timestamps advance 1.5 ms per edge on average).
pub const WINDOWS: [(&str, i64); 3] = [("tight", 6), ("loose", 40), ("infinite", 1 << 40)];

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn load_query(name: &str) -> QueryGraph {
    let text = std::fs::read_to_string(fixture(&format!("queries/{name}.json"))).unwrap();
    parse_query(&text).unwrap()
}

pub fn corpus() -> Vec<QueryGraph> {
    CORPUS
        .iter()
        .map(|n| load_query(&format!("corpus_{n}")))
        .collect()
}

pub fn trial_stream(seed: u64, plant: &[QueryGraph]) -> Vec<TimestampedEdge> {
    generate(&GeneratorConfig::default(), plant, seed)
}

/// Same pattern with every vertex and edge type replaced by `*`.
pub fn wildcard_variant(q: &QueryGraph) -> QueryGraph {
    let qid = |i: usize| q.vertices()[i].qid.clone();
    QueryGraph::new(
        format!("{}-wild", q.name()),
        q.window_ms(),
        q.vertices()
            .iter()
            .map(|v| (v.qid.clone(), "*".to_string())),
        q.edges()
            .iter()
            .map(|e| (qid(e.source), qid(e.target), "*".to_string())),
    )
    .unwrap()
}

pub fn has_edge_type(q: &QueryGraph, t: &str) -> bool {
    q.edges()
        .iter()
        .any(|e| e.edge_type == Label::Exact(t.into()))
}

/// Statistics with exactly the given number of edges per type.
pub fn stats_with_counts(counts: &[(&str, usize)]) -> GraphStatistics {
    let mut edges = Vec::new();
    for (t, n) in counts {
        for _ in 0..*n {
            let i = edges.len();
            edges.push(TimestampedEdge::new(
                i as u64,
                VertexRef::new(format!("s{i}"), "Host"),
                VertexRef::new(format!("d{i}"), "Host"),
                *t,
                i as i64,
            ));
        }
    }
    GraphStatistics::from_edges(edges).unwrap()
}

/// Emissions per input edge, in stream order.
pub fn run_engine(
    stream: &[TimestampedEdge],
    queries: &[QueryGraph],
    stats: &GraphStatistics,
    max_leaf_size: usize,
) -> Vec<Vec<EmittedMatch>> {
    let mut engine = Engine::new(EngineConfig {
        max_leaf_size,
        expiry_stride: 16,
        ..EngineConfig::default()
    });
    for q in queries {
        engine.register_query(q.clone(), stats).unwrap();
    }
    stream
        .iter()
        .map(|e| engine.process_edge(e.clone()).unwrap())
        .collect()
}

pub fn sorted(mut v: Vec<EmittedMatch>) -> Vec<EmittedMatch> {
    EmittedMatch::sort_canonical(&mut v);
    v
}
