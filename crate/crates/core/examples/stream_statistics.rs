//! Collect edge-type frequencies, degree histogram and typed triad census
//! from an edge stream file.
//!
//! `cargo run --example stream_statistics [-- path/to/stream.ndjson]`

use std::path::PathBuf;

use sjstream::graph::DynamicGraph;
use sjstream::stream::open_edges;
use sjstream::GraphStatistics;

fn main() {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/streams/cyber.ndjson")
        });

    let mut graph = DynamicGraph::unbounded();
    let mut stats = GraphStatistics::new();
    for edge in open_edges(&path).expect("open stream") {
        let edge = edge.expect("valid edge");
        graph.insert_edge(edge.clone()).expect("consistent types");
        stats.update(&graph, &edge);
    }

    println!(
        "{} edges over {} vertices",
        stats.total_edges,
        stats.distinct_vertices()
    );
    for (t, n) in &stats.edge_type_counts {
        println!(
            "  {t:<10} {n:>5}  ({:.3})",
            *n as f64 / stats.total_edges as f64
        );
    }
    println!("degree histogram: {:?}", stats.degree_histogram);

    let mut triads: Vec<(&String, &u64)> = stats.triad_census.iter().collect();
    triads.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    println!("most common triads:");
    for (sig, n) in triads.iter().take(8) {
        let kind = if sig.matches('|').count() == 2 {
            "triangle"
        } else {
            "wedge"
        };
        println!("  {kind:<8} {sig:<32} {n}");
    }
}
