//! Check the incremental engine against brute-force enumeration on
//! generated streams.
//!
//! `cargo run --release --example verify_against_oracle [-- seeds]`

use sjstream::engine::EmittedMatch;
use sjstream::oracle::{oracle_windowed_matches, to_emissions};
use sjstream::synth::{generate, GeneratorConfig};
use sjstream::{parse_query, Engine, EngineConfig, GraphStatistics, QueryGraph};

fn main() {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/queries");
    let queries: Vec<QueryGraph> = ["path3", "triangle", "cycle4", "fork_join"]
        .iter()
        .map(|n| {
            parse_query(&std::fs::read_to_string(format!("{dir}/corpus_{n}.json")).unwrap())
                .unwrap()
        })
        .collect();

    for seed in 0..seeds {
        let stream = generate(&GeneratorConfig::default(), &queries, seed);
        let mut engine = Engine::new(EngineConfig::default());
        for q in &queries {
            engine
                .register_query(q.clone(), &GraphStatistics::new())
                .unwrap();
        }
        let mut found = engine.process_batch(stream.clone()).unwrap();
        EmittedMatch::sort_canonical(&mut found);

        let mut line = format!("seed {seed:>3}:");
        for q in &queries {
            let mine: Vec<EmittedMatch> = found
                .iter()
                .filter(|m| m.query == q.name())
                .cloned()
                .collect();
            let expected = to_emissions(&stream, q, &oracle_windowed_matches(&stream, q).unwrap());
            let verdict = if mine == expected { "ok" } else { "MISMATCH" };
            line += &format!(" {}={} {verdict}", q.name(), expected.len());
        }
        println!("{line}");
    }
}
