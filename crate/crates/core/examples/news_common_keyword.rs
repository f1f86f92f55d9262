//! Find three articles within an hour that share a keyword and a location.
//!
//! `cargo run --example news_common_keyword`

use std::collections::BTreeSet;

use sjstream::stream::load_edges;
use sjstream::{parse_query, Engine, EngineConfig, GraphStatistics};

fn main() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let q = parse_query(
        &std::fs::read_to_string(format!(
            "{dir}/fixtures/queries/news_common_keyword_location.json"
        ))
        .unwrap(),
    )
    .unwrap();
    let stream = load_edges(format!("{dir}/fixtures/streams/news.ndjson").as_ref()).unwrap();
    let stats = GraphStatistics::from_edges(stream.clone()).unwrap();

    let mut engine = Engine::new(EngineConfig::default());
    engine.register_query(q, &stats).unwrap();

    // the three article slots are interchangeable, so each story shows up
    // once per ordering; group by the article set
    let mut stories = BTreeSet::new();
    for edge in stream {
        for m in engine.process_edge(edge).unwrap() {
            let articles: BTreeSet<&String> =
                ["a1", "a2", "a3"].iter().map(|a| &m.bindings[*a]).collect();
            let key = format!("{} in {}: {:?}", m.bindings["k"], m.bindings["l"], articles);
            if stories.insert(key.clone()) {
                println!("t={} {key}", m.completed_at);
            }
        }
    }
    let s = engine.summary();
    println!(
        "{} emissions, {} distinct stories",
        s.queries[0].emitted,
        stories.len()
    );
}
