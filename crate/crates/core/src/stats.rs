//! Summary statistics over an edge stream: edge and vertex type
//! distributions, degree distribution, and a typed triad census.
//!
//! The planner consumes only the edge type distribution. The census counts
//! every connected three-vertex substructure: wedges (two edges sharing one
//! vertex, three distinct vertices) keyed `"a|b"` and triangles (one edge on
//! each side of a vertex triple) keyed `"a|b|c"`, types sorted.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Direction, DynamicGraph, GraphError, TimestampedEdge};
use crate::query::{Label, QueryGraph};

/// Degrees up to this value get their own histogram bucket.
pub const EXACT_DEGREE_BUCKETS: u64 = 16;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GraphStatistics {
    pub total_edges: u64,
    pub edge_type_counts: BTreeMap<String, u64>,
    pub vertex_type_counts: BTreeMap<String, u64>,
    pub degree_histogram: BTreeMap<u64, u64>,
    pub triad_census: BTreeMap<String, u64>,
    #[serde(skip)]
    degrees: HashMap<String, u64>,
}

impl PartialEq for GraphStatistics {
    fn eq(&self, other: &Self) -> bool {
        self.total_edges == other.total_edges
            && self.edge_type_counts == other.edge_type_counts
            && self.vertex_type_counts == other.vertex_type_counts
            && self.degree_histogram == other.degree_histogram
            && self.triad_census == other.triad_census
    }
}

/// Histogram bucket of a degree: exact up to 16, then the next power of two.
pub fn degree_bucket(degree: u64) -> u64 {
    if degree <= EXACT_DEGREE_BUCKETS {
        degree
    } else {
        degree.next_power_of_two()
    }
}

pub fn wedge_signature(a: &str, b: &str) -> String {
    let mut t = [a, b];
    t.sort_unstable();
    t.join("|")
}

pub fn triangle_signature(a: &str, b: &str, c: &str) -> String {
    let mut t = [a, b, c];
    t.sort_unstable();
    t.join("|")
}

fn other_end<'a>(e: &'a TimestampedEdge, v: &str) -> &'a str {
    if e.source.id == v {
        &e.target.id
    } else {
        &e.source.id
    }
}

impl GraphStatistics {
    pub fn new() -> Self {
        Self::default()
    }

    /// Full pass over a stream with infinite retention.
    pub fn from_edges(
        edges: impl IntoIterator<Item = TimestampedEdge>,
    ) -> Result<Self, GraphError> {
        let mut graph = DynamicGraph::unbounded();
        let mut stats = Self::new();
        for e in edges {
            graph.insert_edge(e.clone())?;
            stats.update(&graph, &e);
        }
        Ok(stats)
    }

    /// Folds in an edge that was just accepted into `graph`.
    pub fn update(&mut self, graph: &DynamicGraph, edge: &TimestampedEdge) {
        self.total_edges += 1;
        *self
            .edge_type_counts
            .entry(edge.edge_type.clone())
            .or_default() += 1;

        let mut endpoints = vec![&edge.source];
        if edge.target.id != edge.source.id {
            endpoints.push(&edge.target);
        }
        for v in endpoints {
            let step = if edge.source.id == edge.target.id {
                2
            } else {
                1
            };
            let degree = self.degrees.entry(v.id.clone()).or_insert(0);
            if *degree == 0 {
                *self
                    .vertex_type_counts
                    .entry(v.type_label.clone())
                    .or_default() += 1;
            } else {
                let old = degree_bucket(*degree);
                if let Some(c) = self.degree_histogram.get_mut(&old) {
                    *c -= 1;
                    if *c == 0 {
                        self.degree_histogram.remove(&old);
                    }
                }
            }
            *degree += step;
            *self
                .degree_histogram
                .entry(degree_bucket(*degree))
                .or_default() += 1;
        }

        self.update_triads(graph, edge);
    }

    fn update_triads(&mut self, graph: &DynamicGraph, edge: &TimestampedEdge) {
        let (u, v) = (edge.source.id.as_str(), edge.target.id.as_str());
        if u == v {
            return;
        }
        let incident = |x: &str| -> Vec<&TimestampedEdge> {
            graph
                .neighborhood(x, Direction::Both, None)
                .into_iter()
                .filter(|f| f.edge_key != edge.edge_key)
                .collect()
        };
        let around_u = incident(u);
        let around_v = incident(v);

        let mut by_far_end: HashMap<&str, Vec<&str>> = HashMap::new();
        for f in &around_v {
            let w = other_end(f, v);
            if w != u && w != v {
                by_far_end.entry(w).or_default().push(&f.edge_type);
                *self
                    .triad_census
                    .entry(wedge_signature(&edge.edge_type, &f.edge_type))
                    .or_default() += 1;
            }
        }
        for f in &around_u {
            let w = other_end(f, u);
            if w == u || w == v {
                continue;
            }
            *self
                .triad_census
                .entry(wedge_signature(&edge.edge_type, &f.edge_type))
                .or_default() += 1;
            if let Some(closing) = by_far_end.get(w) {
                for g in closing {
                    *self
                        .triad_census
                        .entry(triangle_signature(&edge.edge_type, &f.edge_type, g))
                        .or_default() += 1;
                }
            }
        }
    }

    /// Share of the stream carrying `label`; wildcards count as 1.0 and
    /// unseen types are floored at `1 / (total_edges + 1)`.
    pub fn relative_frequency(&self, label: &Label) -> f64 {
        match label {
            Label::Any => 1.0,
            Label::Exact(t) => match self.edge_type_counts.get(t) {
                Some(&c) if c > 0 && self.total_edges > 0 => c as f64 / self.total_edges as f64,
                _ => 1.0 / (self.total_edges as f64 + 1.0),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("statistics serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Counters unused by a stats-file round trip, exposed for invariant checks.
    pub fn degree_of(&self, vertex_id: &str) -> u64 {
        self.degrees.get(vertex_id).copied().unwrap_or(0)
    }

    pub fn distinct_vertices(&self) -> usize {
        self.degrees.len()
    }

    /// Distinct edge types seen.
    pub fn edge_types(&self) -> HashSet<&str> {
        self.edge_type_counts.keys().map(String::as_str).collect()
    }
}

/// Estimated selectivity of a query subgraph: the product of the relative
/// frequencies of its edge types. Lower is more selective.
pub fn selectivity_score(stats: &GraphStatistics, q: &QueryGraph, edges: &[usize]) -> f64 {
    let mut factors: Vec<f64> = edges
        .iter()
        .map(|&e| stats.relative_frequency(&q.edge(e).edge_type))
        .collect();
    // same multiset of factors must give bit-identical scores
    factors.sort_by(f64::total_cmp);
    factors.into_iter().product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexRef;

    fn e(key: u64, s: &str, d: &str, t: &str) -> TimestampedEdge {
        TimestampedEdge::new(
            key,
            VertexRef::new(s, "V"),
            VertexRef::new(d, "V"),
            t,
            key as i64,
        )
    }

    #[test]
    fn single_insertion() {
        let s = GraphStatistics::from_edges([e(0, "a", "b", "connects")]).unwrap();
        assert_eq!(s.total_edges, 1);
        assert_eq!(s.edge_type_counts.get("connects"), Some(&1));
        assert_eq!(s.vertex_type_counts.get("V"), Some(&2));
        assert_eq!(s.degree_histogram.get(&1), Some(&2));
        assert!(s.triad_census.is_empty());
    }

    #[test]
    fn two_edges_form_one_wedge() {
        let s = GraphStatistics::from_edges([e(0, "a", "b", "x"), e(1, "b", "c", "y")]).unwrap();
        assert_eq!(s.triad_census, BTreeMap::from([("x|y".to_string(), 1)]));
    }

    #[test]
    fn closing_triangle() {
        // frozen from brute-force enumeration of edge pairs / triples
        let s = GraphStatistics::from_edges([
            e(0, "a", "b", "x"),
            e(1, "b", "c", "y"),
            e(2, "c", "a", "z"),
        ])
        .unwrap();
        let expected = BTreeMap::from([
            ("x|y".to_string(), 1),
            ("x|z".to_string(), 1),
            ("y|z".to_string(), 1),
            ("x|y|z".to_string(), 1),
        ]);
        assert_eq!(s.triad_census, expected);
    }

    #[test]
    fn parallel_edges_and_loops_are_not_triads() {
        let s = GraphStatistics::from_edges([
            e(0, "a", "b", "x"),
            e(1, "b", "a", "x"),
            e(2, "a", "a", "x"),
        ])
        .unwrap();
        assert!(s.triad_census.is_empty());
        assert_eq!(s.degree_of("a"), 4);
        assert_eq!(s.degree_histogram, BTreeMap::from([(2, 1), (4, 1)]));
    }

    #[test]
    fn degree_buckets() {
        assert_eq!(degree_bucket(0), 0);
        assert_eq!(degree_bucket(16), 16);
        assert_eq!(degree_bucket(17), 32);
        assert_eq!(degree_bucket(32), 32);
        assert_eq!(degree_bucket(33), 64);
    }

    fn one_edge_query(etype: &str) -> QueryGraph {
        QueryGraph::new(
            "q",
            10,
            [("a".to_string(), "*".to_string()), ("b".into(), "*".into())],
            [("a".to_string(), "b".to_string(), etype.to_string())],
        )
        .unwrap()
    }

    #[test]
    fn selectivity_examples() {
        let mut s = GraphStatistics::new();
        s.total_edges = 101;
        s.edge_type_counts.insert("x".into(), 100);
        s.edge_type_counts.insert("y".into(), 1);
        assert!((selectivity_score(&s, &one_edge_query("y"), &[0]) - 1.0 / 101.0).abs() < 1e-12);
        assert!((selectivity_score(&s, &one_edge_query("x"), &[0]) - 100.0 / 101.0).abs() < 1e-12);
        assert!((selectivity_score(&s, &one_edge_query("w"), &[0]) - 1.0 / 102.0).abs() < 1e-12);

        let cold = GraphStatistics::new();
        assert_eq!(selectivity_score(&cold, &one_edge_query("x"), &[0]), 1.0);
        assert_eq!(selectivity_score(&cold, &one_edge_query("*"), &[0]), 1.0);
    }

    #[test]
    fn json_round_trip() {
        let s = GraphStatistics::from_edges([e(0, "a", "b", "x"), e(1, "b", "c", "y")]).unwrap();
        let back = GraphStatistics::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(s.to_json().contains("\"x|y\": 1"));
    }
}
