//! Seeded synthetic edge streams with planted pattern instances.
//!
//! Background edges connect uniformly random distinct vertices with uniformly
//! random edge types. Each planted instance binds a pattern's vertices to
//! random distinct vertices of acceptable type and drops the pattern's edges
//! close together into the stream, so windows of a few milliseconds still
//! catch complete instances. Timestamps never decrease.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Timestamp, TimestampedEdge, VertexRef};
use crate::query::{Label, QueryGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub vertices: usize,
    pub edges: usize,
    pub edge_types: Vec<String>,
    /// Vertex `v{i}` gets `vertex_types[i % len]`.
    pub vertex_types: Vec<String>,
    /// Gap between consecutive timestamps is drawn from `0..=max_gap`.
    pub max_gap: Timestamp,
    /// Planted instances per pattern.
    pub instances_per_pattern: usize,
    /// Planted edges of one instance spread over at most this many stream slots.
    pub instance_spread: usize,
    pub start_time: Timestamp,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            vertices: 40,
            edges: 300,
            edge_types: vec!["x".into(), "y".into(), "z".into()],
            vertex_types: vec!["Host".into(), "Server".into()],
            max_gap: 3,
            instances_per_pattern: 2,
            instance_spread: 8,
            start_time: 0,
        }
    }
}

fn vertex(config: &GeneratorConfig, i: usize) -> VertexRef {
    VertexRef::new(
        format!("v{i}"),
        config.vertex_types[i % config.vertex_types.len()].clone(),
    )
}

fn pick_label(rng: &mut ChaCha8Rng, label: &Label, pool: &[String]) -> String {
    match label {
        Label::Exact(s) => s.clone(),
        Label::Any => pool.choose(rng).expect("non-empty pool").clone(),
    }
}

/// Binds the pattern to random distinct vertices; `None` if types make it impossible.
fn plant(
    rng: &mut ChaCha8Rng,
    config: &GeneratorConfig,
    q: &QueryGraph,
) -> Option<Vec<(usize, usize, String)>> {
    let mut chosen: Vec<usize> = Vec::new();
    for v in q.vertices() {
        let options: Vec<usize> = (0..config.vertices)
            .filter(|i| !chosen.contains(i) && v.type_label.accepts(&vertex(config, *i).type_label))
            .collect();
        chosen.push(*options.choose(rng)?);
    }
    Some(
        q.edges()
            .iter()
            .map(|e| {
                (
                    chosen[e.source],
                    chosen[e.target],
                    pick_label(rng, &e.edge_type, &config.edge_types),
                )
            })
            .collect(),
    )
}

pub fn generate(
    config: &GeneratorConfig,
    patterns: &[QueryGraph],
    seed: u64,
) -> Vec<TimestampedEdge> {
    assert!(config.vertices >= 2, "need at least two vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // (position, vertex pair, type); planted edges get fractional positions
    let mut items: Vec<(f64, usize, usize, String)> = Vec::new();
    for q in patterns {
        for _ in 0..config.instances_per_pattern {
            let Some(edges) = plant(&mut rng, config, q) else {
                continue;
            };
            let at = rng.gen_range(0.0..config.edges.max(1) as f64);
            for (s, d, t) in edges {
                let offset = rng.gen_range(0.0..config.instance_spread.max(1) as f64);
                items.push((at + offset, s, d, t));
            }
        }
    }
    items.truncate(config.edges);
    let background = config.edges - items.len();
    for i in 0..background {
        let s = rng.gen_range(0..config.vertices);
        let mut d = rng.gen_range(0..config.vertices - 1);
        if d >= s {
            d += 1;
        }
        let t = config
            .edge_types
            .choose(&mut rng)
            .expect("edge types")
            .clone();
        let pos = i as f64 * config.edges as f64 / background.max(1) as f64;
        items.push((pos, s, d, t));
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut now = config.start_time;
    items
        .into_iter()
        .enumerate()
        .map(|(key, (_, s, d, t))| {
            now += rng.gen_range(0..=config.max_gap);
            TimestampedEdge::new(key as u64, vertex(config, s), vertex(config, d), t, now)
        })
        .collect()
}
