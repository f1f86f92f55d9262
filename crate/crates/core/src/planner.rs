//! Query decomposition into search primitives and a left-deep join order.
//!
//! Greedy: the first leaf is the lowest-scoring connected edge set of at
//! most `max_leaf_size` edges over the whole query; every later leaf is the
//! lowest-scoring such set among the remaining edges that touches a vertex
//! already covered. Ties go to the lexicographically smallest sorted list of
//! `(etype, src_type, dst_type)` tuples, then the smallest qeid list.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::query::QueryGraph;
use crate::sjtree::{NodeRole, SjTree};
use crate::stats::{selectivity_score, GraphStatistics};

pub const DEFAULT_MAX_LEAF_SIZE: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("max_leaf_size must be at least 1")]
    LeafSize,
    #[error("query `{0}` cannot be decomposed into connected primitives (disconnected pattern)")]
    Disconnected(String),
}

/// One search primitive.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    /// Query edge ids, ascending.
    pub edges: Vec<usize>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionPlan {
    leaves: Vec<Leaf>,
    max_leaf_size: usize,
}

impl DecompositionPlan {
    /// Wraps an explicit leaf order; use [`DecompositionPlan::validate`] to check it.
    pub fn from_leaves(leaves: Vec<Leaf>, max_leaf_size: usize) -> Self {
        Self {
            leaves,
            max_leaf_size,
        }
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn max_leaf_size(&self) -> usize {
        self.max_leaf_size
    }

    /// Checks the partition, size, connectivity and nonempty-cut invariants.
    pub fn validate(&self, q: &QueryGraph) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        let mut covered_vertices = BTreeSet::new();
        for (i, leaf) in self.leaves.iter().enumerate() {
            if leaf.edges.is_empty() || leaf.edges.len() > self.max_leaf_size {
                return Err(format!("leaf {i} has {} edges", leaf.edges.len()));
            }
            if !is_connected(q, &leaf.edges) {
                return Err(format!("leaf {i} is not connected"));
            }
            for &e in &leaf.edges {
                if !seen.insert(e) {
                    return Err(format!("edge {e} appears in two leaves"));
                }
            }
            let vs: BTreeSet<usize> = leaf
                .edges
                .iter()
                .flat_map(|&e| [q.edge(e).source, q.edge(e).target])
                .collect();
            if i > 0 && vs.is_disjoint(&covered_vertices) {
                return Err(format!("leaf {i} shares no vertex with earlier leaves"));
            }
            covered_vertices.extend(vs);
        }
        if seen.len() != q.edges().len() {
            return Err("leaves do not cover every query edge".into());
        }
        Ok(())
    }

    /// Indented rendering of the join tree built from this plan.
    pub fn render(&self, q: &QueryGraph) -> String {
        let tree = SjTree::from_plan(self, q);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "query {} (window_ms={}, {} leaves)",
            q.name(),
            q.window_ms(),
            self.leaves.len()
        );
        render_node(&tree, q, tree.root(), 0, &mut out);
        out
    }
}

fn render_node(tree: &SjTree, q: &QueryGraph, id: usize, depth: usize, out: &mut String) {
    let n = tree.node(id);
    let pad = "  ".repeat(depth);
    let role = match n.role(tree.root()) {
        NodeRole::Leaf => "leaf",
        NodeRole::Internal => "join",
        NodeRole::Root => "root",
    };
    let edges: Vec<String> = n.query_edges.iter().map(|&e| format!("e{e}")).collect();
    let _ = write!(out, "{pad}node {id} [{role}] edges {{{}}}", edges.join(","));
    if !n.cut.is_empty() {
        let cut: Vec<&str> = n.cut.iter().map(|&v| q.vertex(v).qid.as_str()).collect();
        let _ = write!(out, " cut {{{}}}", cut.join(","));
    }
    if let Some(score) = n.leaf_score {
        let _ = write!(out, " score {score:.6}");
    }
    out.push('\n');
    if n.children.is_none() {
        for &e in &n.query_edges {
            let _ = writeln!(out, "{pad}    e{e}: {}", q.describe_edge(e));
        }
    }
    if let Some((l, r)) = n.children {
        render_node(tree, q, l, depth + 1, out);
        render_node(tree, q, r, depth + 1, out);
    }
}

fn is_connected(q: &QueryGraph, edges: &[usize]) -> bool {
    let Some(&first) = edges.first() else {
        return false;
    };
    let mut reached: BTreeSet<usize> = [q.edge(first).source, q.edge(first).target].into();
    let mut todo: Vec<usize> = edges[1..].to_vec();
    loop {
        let before = todo.len();
        todo.retain(|&e| {
            let qe = q.edge(e);
            if reached.contains(&qe.source) || reached.contains(&qe.target) {
                reached.insert(qe.source);
                reached.insert(qe.target);
                false
            } else {
                true
            }
        });
        if todo.is_empty() {
            return true;
        }
        if todo.len() == before {
            return false;
        }
    }
}

struct Candidate<'q> {
    edges: Vec<usize>,
    score: f64,
    tuples: Vec<(&'q str, &'q str, &'q str)>,
}

impl Candidate<'_> {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| self.tuples.cmp(&other.tuples))
            .then_with(|| self.edges.cmp(&other.edges))
    }
}

fn subsets(
    pool: &[usize],
    max: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for i in start..pool.len() {
        current.push(pool[i]);
        out.push(current.clone());
        if current.len() < max {
            subsets(pool, max, i + 1, current, out);
        }
        current.pop();
    }
}

/// Decomposes `q` into connected primitives ordered by ascending selectivity.
pub fn decompose(
    q: &QueryGraph,
    stats: &GraphStatistics,
    max_leaf_size: usize,
) -> Result<DecompositionPlan, PlanError> {
    if max_leaf_size == 0 {
        return Err(PlanError::LeafSize);
    }
    let mut remaining: Vec<usize> = (0..q.edges().len()).collect();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut leaves = Vec::new();
    while !remaining.is_empty() {
        let mut sets = Vec::new();
        subsets(&remaining, max_leaf_size, 0, &mut Vec::new(), &mut sets);
        let best = sets
            .into_iter()
            .filter(|s| is_connected(q, s))
            .filter(|s| {
                covered.is_empty()
                    || s.iter().any(|&e| {
                        covered.contains(&q.edge(e).source) || covered.contains(&q.edge(e).target)
                    })
            })
            .map(|edges| {
                let mut tuples: Vec<_> = edges.iter().map(|&e| q.edge_signature(e)).collect();
                tuples.sort();
                Candidate {
                    score: selectivity_score(stats, q, &edges),
                    tuples,
                    edges,
                }
            })
            .min_by(|a, b| a.cmp_key(b))
            .ok_or_else(|| PlanError::Disconnected(q.name().to_owned()))?;
        for &e in &best.edges {
            covered.insert(q.edge(e).source);
            covered.insert(q.edge(e).target);
        }
        remaining.retain(|e| !best.edges.contains(e));
        leaves.push(Leaf {
            edges: best.edges,
            score: best.score,
        });
    }
    Ok(DecompositionPlan {
        leaves,
        max_leaf_size,
    })
}

/// Left-deep SJ-tree for a plan.
pub fn build_sj_tree(plan: &DecompositionPlan, q: &QueryGraph) -> SjTree {
    SjTree::from_plan(plan, q)
}
