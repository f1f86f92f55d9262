//! Maintain a time-bounded multigraph and query vertex neighborhoods.
//!
//! `cargo run --example sliding_window_graph`

use sjstream::graph::{Direction, DynamicGraph, InsertOutcome, TimestampedEdge, VertexRef};

fn main() {
    let host = |id: &str| VertexRef::new(id, "Host");
    let mut graph = DynamicGraph::with_retention(100);

    let edges = [
        (0, "h1", "h2", "connects", 10),
        (1, "h2", "h3", "connects", 40),
        (2, "h1", "h3", "login", 90),
        (3, "h3", "h1", "connects", 180),
        // arrives after the watermark has moved past its retention
        (4, "h2", "h1", "connects", 60),
    ];
    for (key, src, dst, etype, t) in edges {
        let outcome = graph
            .insert_edge(TimestampedEdge::new(key, host(src), host(dst), etype, t))
            .unwrap();
        if outcome == InsertOutcome::DroppedLate {
            println!(
                "edge {key} at t={t} dropped: watermark {:?}",
                graph.watermark()
            );
        }
    }

    println!(
        "cutoff {} (watermark {:?})",
        graph.cutoff(),
        graph.watermark()
    );
    for (dir, label) in [
        (Direction::Out, "out"),
        (Direction::In, "in"),
        (Direction::Both, "both"),
    ] {
        let keys: Vec<String> = graph
            .neighborhood("h1", dir, None)
            .iter()
            .map(|e| format!("{}->{}@{}", e.source.id, e.target.id, e.timestamp))
            .collect();
        println!("h1 {label:>4}: {}", keys.join(" "));
    }
    println!(
        "h1 logins: {}",
        graph
            .neighborhood("h1", Direction::Out, Some("login"))
            .len()
    );
    println!("dropped late: {}", graph.dropped_late());

    let conflict = TimestampedEdge::new(
        5,
        VertexRef::new("h1", "Server"),
        host("h4"),
        "connects",
        181,
    );
    println!(
        "type conflict: {}",
        graph.insert_edge(conflict).unwrap_err()
    );
}
