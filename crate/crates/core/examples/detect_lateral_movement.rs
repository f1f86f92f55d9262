//! Watch a network event stream for lateral movement and data exfiltration.
//!
//! `cargo run --example detect_lateral_movement`

use sjstream::stream::load_edges;
use sjstream::{parse_query, Engine, EngineConfig, GraphStatistics};

fn fixture(rel: &str) -> String {
    format!("{}/fixtures/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn main() {
    let stream = load_edges(fixture("streams/cyber.ndjson").as_ref()).unwrap();
    // plan with frequencies from the first part of the stream
    let warmup = GraphStatistics::from_edges(stream[..50].to_vec()).unwrap();

    let mut engine = Engine::new(EngineConfig::default());
    for name in ["cyber_lateral_movement", "cyber_exfiltration"] {
        let q = parse_query(
            &std::fs::read_to_string(fixture(&format!("queries/{name}.json"))).unwrap(),
        )
        .unwrap();
        let rt = engine.register_query(q, &warmup).unwrap();
        print!("{}", rt.plan().render(rt.query()));
    }

    for edge in stream {
        for m in engine.process_edge(edge).unwrap() {
            let who: Vec<String> = m.bindings.iter().map(|(q, v)| format!("{q}={v}")).collect();
            println!("t={:>6} {:<17} {}", m.completed_at, m.query, who.join(" "));
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&engine.summary()).unwrap()
    );
}
