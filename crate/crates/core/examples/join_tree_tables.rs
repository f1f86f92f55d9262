//! Inspect partial-match tables of a join tree while a stream runs, and
//! watch expiry keep them bounded.
//!
//! `cargo run --release --example join_tree_tables`

use sjstream::synth::{generate, GeneratorConfig};
use sjstream::{parse_query, Engine, EngineConfig, GraphStatistics};

fn main() {
    let q = parse_query(
        &std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/fixtures/queries/corpus_path3.json"
        ))
        .unwrap(),
    )
    .unwrap();
    let config = GeneratorConfig {
        vertices: 200,
        edges: 20_000,
        instances_per_pattern: 20,
        ..GeneratorConfig::default()
    };
    let stream = generate(&config, std::slice::from_ref(&q), 3);

    let mut engine = Engine::new(EngineConfig {
        expiry_stride: 256,
        ..EngineConfig::default()
    });
    engine.register_query(q, &GraphStatistics::new()).unwrap();

    println!(
        "{:>7} {:>8} {:>8} {:>8} {:>8}",
        "edges", "stored", "evicted", "emitted", "retained"
    );
    for (i, edge) in stream.into_iter().enumerate() {
        engine.process_edge(edge).unwrap();
        if (i + 1) % 2_000 == 0 {
            let s = engine.summary();
            let rt = &s.queries[0];
            println!(
                "{:>7} {:>8} {:>8} {:>8} {:>8}",
                i + 1,
                rt.stored_partials,
                rt.evicted,
                rt.emitted,
                s.retained_edges
            );
        }
    }

    let (_, dump) = &engine.dump_trees()[0];
    for node in &dump.nodes {
        println!(
            "node {} {:?} edges {:?}: {} stored under {} keys, {} joins tried, {} rejected by window",
            node.id, node.role, node.query_edges, node.stored, node.join_keys, node.counters.join_attempts, node.counters.rejected_window
        );
    }
}
