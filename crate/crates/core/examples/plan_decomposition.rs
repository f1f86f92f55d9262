//! Compare join trees chosen for one query under different edge-type
//! frequencies and leaf sizes.
//!
//! `cargo run --example plan_decomposition`

use sjstream::graph::{TimestampedEdge, VertexRef};
use sjstream::planner::decompose;
use sjstream::{parse_query, GraphStatistics};

fn stats(counts: &[(&str, usize)]) -> GraphStatistics {
    let mut edges = Vec::new();
    for (t, n) in counts {
        for _ in 0..*n {
            let i = edges.len();
            let v = |p: &str| VertexRef::new(format!("{p}{i}"), "Host");
            edges.push(TimestampedEdge::new(i as u64, v("s"), v("d"), *t, i as i64));
        }
    }
    GraphStatistics::from_edges(edges).unwrap()
}

fn main() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/queries/corpus_diamond.json"
    ))
    .unwrap();
    let q = parse_query(&text).unwrap();

    let profiles = [
        ("no statistics", GraphStatistics::new()),
        ("y rare", stats(&[("x", 100), ("y", 1)])),
        ("x rare", stats(&[("x", 1), ("y", 100)])),
    ];
    for (name, s) in &profiles {
        for max_leaf in [1, 2] {
            let plan = decompose(&q, s, max_leaf).unwrap();
            println!("--- {name}, leaves of at most {max_leaf} edges");
            print!("{}", plan.render(&q));
        }
    }
}
