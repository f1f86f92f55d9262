//! Measure ingest rate on a large generated stream.
//!
//! `cargo run --release --example synthetic_throughput [-- edges]`

use std::time::Instant;

use sjstream::synth::{generate, GeneratorConfig};
use sjstream::{parse_query, Engine, EngineConfig, GraphStatistics};

fn main() {
    let edges: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200_000);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/queries");
    let mut engine = Engine::new(EngineConfig::default());
    let mut queries = Vec::new();
    for name in ["path3", "triangle", "star3"] {
        let q = parse_query(&std::fs::read_to_string(format!("{dir}/corpus_{name}.json")).unwrap())
            .unwrap();
        queries.push(q.with_window(50).unwrap());
    }
    let config = GeneratorConfig {
        vertices: 5_000,
        edges,
        instances_per_pattern: 100,
        ..GeneratorConfig::default()
    };
    let stream = generate(&config, &queries, 1);
    let stats = GraphStatistics::from_edges(stream[..stream.len().min(10_000)].to_vec()).unwrap();
    for q in queries {
        engine.register_query(q, &stats).unwrap();
    }

    let started = Instant::now();
    let mut matches = 0;
    for e in stream {
        matches += engine.process_edge(e).unwrap().len();
    }
    let secs = started.elapsed().as_secs_f64();
    println!(
        "{edges} edges in {secs:.2}s: {:.0} edges/s, {matches} matches",
        edges as f64 / secs
    );
    for q in engine.summary().queries {
        println!(
            "  {:<10} emitted {:>6} stored {:>5} evicted {:>8}",
            q.name, q.emitted, q.stored_partials, q.evicted
        );
    }
}
