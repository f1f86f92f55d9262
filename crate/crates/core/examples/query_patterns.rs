//! Parse query patterns from JSON and see how invalid ones are reported.
//!
//! `cargo run --example query_patterns`

use sjstream::parse_query;

fn main() {
    let text = r#"{
        "name": "smurf", "window_ms": 5000,
        "vertices": [
            {"qid": "attacker", "type": "Host"},
            {"qid": "amp", "type": "*"},
            {"qid": "victim", "type": "Host"}
        ],
        "edges": [
            {"src": "attacker", "dst": "amp", "etype": "icmp_echo"},
            {"src": "amp", "dst": "victim", "etype": "icmp_reply"},
            {"src": "attacker", "dst": "victim", "etype": "*"}
        ]
    }"#;
    let q = parse_query(text).unwrap();
    println!("{} ({} ms window)", q.name(), q.window_ms());
    for e in q.edges() {
        println!("  e{}: {}", e.qeid, q.describe_edge(e.qeid));
    }
    println!("canonical form: {}", q.to_json());

    let broken = [
        r#"{"name": "q", "window_ms": 10, "vertices": [{"qid": "a", "type": "*"}], "edges": [{"src": "a", "dst": "b", "etype": "x"}]}"#,
        r#"{"name": "q", "window_ms": 0, "vertices": [{"qid": "a", "type": "*"}, {"qid": "b", "type": "*"}], "edges": [{"src": "a", "dst": "b", "etype": "x"}]}"#,
        r#"{"name": "q", "window_ms": 10,
            "vertices": [{"qid": "a", "type": "*"}, {"qid": "b", "type": "*"}, {"qid": "c", "type": "*"}, {"qid": "d", "type": "*"}],
            "edges": [{"src": "a", "dst": "b", "etype": "x"}, {"src": "c", "dst": "d", "etype": "x"}]}"#,
        r#"{"name": "q", "window_ms": 10, "vertices": [{"qid": "a"}]"#,
    ];
    for text in broken {
        println!("rejected: {}", parse_query(text).unwrap_err());
    }
}
