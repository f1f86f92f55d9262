//! Subgraph join tree: a binary tree over a query decomposition where every
//! node owns a query subgraph and a table of data subgraphs matching it.
//!
//! Leaves hold the small search primitives. An internal node's subgraph is
//! the union of its children's, and its cut is the set of query vertices the
//! children share; partial matches at the children are joined on the data
//! vertices bound to that cut. The root's subgraph is the whole query, so a
//! successful join into the root is a complete match. Root matches are
//! returned to the caller and never stored.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DynamicGraph, EdgeKey, Symbol, TimeInterval, Timestamp, VertexId};
use crate::planner::DecompositionPlan;
use crate::query::QueryGraph;

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("unknown SJ-tree node {0}")]
    UnknownNode(NodeId),
    #[error("match binds query edges {got:?} but node {node} covers {expected:?}")]
    ShapeMismatch {
        node: NodeId,
        expected: Vec<usize>,
        got: Vec<usize>,
    },
}

/// A data edge bound to a query edge. Endpoints are implied by the vertex
/// bindings of the query edge's endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeBinding {
    pub key: EdgeKey,
    pub timestamp: Timestamp,
    pub edge_type: Symbol,
}

/// Injective binding of (part of) a query to the data graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    vertices: Box<[Option<VertexId>]>,
    edges: Box<[Option<EdgeBinding>]>,
    interval: TimeInterval,
}

/// Canonical identity of a match: its sorted `qeid -> edge_key` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchSignature(pub Vec<(usize, EdgeKey)>);

impl fmt::Display for MatchSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (qe, key)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{qe}:{key}")?;
        }
        Ok(())
    }
}

impl Match {
    /// Builds a match from per-query-vertex and per-query-edge bindings.
    /// Returns `None` when no edge is bound.
    pub fn from_bindings(
        vertices: Vec<Option<VertexId>>,
        edges: Vec<Option<EdgeBinding>>,
    ) -> Option<Match> {
        let interval = TimeInterval::covering(edges.iter().flatten().map(|b| b.timestamp))?;
        Some(Match {
            vertices: vertices.into_boxed_slice(),
            edges: edges.into_boxed_slice(),
            interval,
        })
    }

    pub fn vertex(&self, qv: usize) -> Option<VertexId> {
        self.vertices[qv]
    }

    pub fn edge(&self, qe: usize) -> Option<&EdgeBinding> {
        self.edges[qe].as_ref()
    }

    pub fn interval(&self) -> TimeInterval {
        self.interval
    }

    pub fn bound_vertices(&self) -> impl Iterator<Item = (usize, VertexId)> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
    }

    pub fn bound_edges(&self) -> impl Iterator<Item = (usize, &EdgeBinding)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.as_ref().map(|e| (i, e)))
    }

    pub fn query_edges(&self) -> Vec<usize> {
        self.bound_edges().map(|(i, _)| i).collect()
    }

    pub fn signature(&self) -> MatchSignature {
        MatchSignature(self.bound_edges().map(|(i, b)| (i, b.key)).collect())
    }

    fn is_injective(&self) -> bool {
        let mut vs: Vec<VertexId> = self.vertices.iter().flatten().copied().collect();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        let mut es: Vec<EdgeKey> = self.edges.iter().flatten().map(|b| b.key).collect();
        es.sort_unstable();
        !es.windows(2).any(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinReject {
    CutMismatch,
    Injectivity,
    Window,
}

/// Joins two sibling matches: vertex and edge bindings are unioned.
///
/// Rejected when the cut vertices disagree, when the union maps two query
/// vertices (or query edges) to the same data vertex (or edge), or when the
/// merged interval spans `window_ms` or more.
pub fn join_matches(
    left: &Match,
    right: &Match,
    cut: &[usize],
    window_ms: i64,
) -> Result<Match, JoinReject> {
    for &c in cut {
        match (left.vertices[c], right.vertices[c]) {
            (Some(a), Some(b)) if a == b => {}
            _ => return Err(JoinReject::CutMismatch),
        }
    }
    let mut vertices = Vec::with_capacity(left.vertices.len());
    for (l, r) in left.vertices.iter().zip(right.vertices.iter()) {
        vertices.push(match (l, r) {
            (Some(a), Some(b)) if a != b => return Err(JoinReject::CutMismatch),
            (a, b) => a.or(*b),
        });
    }
    let mut edges = Vec::with_capacity(left.edges.len());
    for (l, r) in left.edges.iter().zip(right.edges.iter()) {
        edges.push(match (l, r) {
            (Some(_), Some(_)) => return Err(JoinReject::Injectivity),
            (a, b) => a.or(*b),
        });
    }
    let joined = Match {
        vertices: vertices.into_boxed_slice(),
        edges: edges.into_boxed_slice(),
        interval: left.interval.merge(&right.interval),
    };
    if !joined.is_injective() {
        return Err(JoinReject::Injectivity);
    }
    if joined.interval.span() >= window_ms {
        return Err(JoinReject::Window);
    }
    Ok(joined)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRole {
    Leaf,
    Internal,
    Root,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NodeCounters {
    pub inserted: u64,
    pub duplicates: u64,
    pub evicted: u64,
    pub join_attempts: u64,
    pub rejected_cut: u64,
    pub rejected_injectivity: u64,
    pub rejected_window: u64,
}

#[derive(Debug, Clone)]
pub struct SjNode {
    pub id: NodeId,
    /// Query edges of this node's subgraph, ascending.
    pub query_edges: Vec<usize>,
    /// Query vertices touched by `query_edges`, ascending.
    pub vertices: Vec<usize>,
    /// Vertices shared by the two children; empty at leaves.
    pub cut: Vec<usize>,
    pub parent: Option<NodeId>,
    pub children: Option<(NodeId, NodeId)>,
    pub leaf_score: Option<f64>,
    pub counters: NodeCounters,
    // keyed by the data vertices bound to the parent's cut, in qid order
    table: HashMap<Box<[VertexId]>, Vec<Match>>,
    dedup: HashSet<MatchSignature>,
}

impl SjNode {
    pub fn role(&self, root: NodeId) -> NodeRole {
        if self.id == root {
            NodeRole::Root
        } else if self.children.is_some() {
            NodeRole::Internal
        } else {
            NodeRole::Leaf
        }
    }

    pub fn stored(&self) -> usize {
        self.dedup.len()
    }

    pub fn matches(&self) -> impl Iterator<Item = &Match> + '_ {
        self.table.values().flatten()
    }
}

#[derive(Debug, Clone)]
pub struct SjTree {
    nodes: Vec<SjNode>,
    root: NodeId,
    leaves: Vec<NodeId>,
    window_ms: i64,
    completions: u64,
}

fn vertices_of(q: &QueryGraph, edges: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = edges
        .iter()
        .flat_map(|&e| [q.edge(e).source, q.edge(e).target])
        .collect();
    set.into_iter().collect()
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    set.into_iter().collect()
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|x| b.contains(x)).copied().collect()
}

impl SjTree {
    /// Left-deep tree: leaves in plan order, then one internal node per
    /// further leaf joining everything so far with that leaf.
    pub fn from_plan(plan: &DecompositionPlan, q: &QueryGraph) -> SjTree {
        let mut nodes = Vec::new();
        for leaf in plan.leaves() {
            let id = nodes.len();
            nodes.push(SjNode {
                id,
                query_edges: leaf.edges.clone(),
                vertices: vertices_of(q, &leaf.edges),
                cut: Vec::new(),
                parent: None,
                children: None,
                leaf_score: Some(leaf.score),
                counters: NodeCounters::default(),
                table: HashMap::new(),
                dedup: HashSet::new(),
            });
        }
        let leaves: Vec<NodeId> = (0..nodes.len()).collect();
        let mut current = 0;
        for &right in &leaves[1..] {
            let id = nodes.len();
            let (l, r) = (&nodes[current], &nodes[right]);
            let node = SjNode {
                id,
                query_edges: sorted_union(&l.query_edges, &r.query_edges),
                vertices: sorted_union(&l.vertices, &r.vertices),
                cut: sorted_intersection(&l.vertices, &r.vertices),
                parent: None,
                children: Some((current, right)),
                leaf_score: None,
                counters: NodeCounters::default(),
                table: HashMap::new(),
                dedup: HashSet::new(),
            };
            nodes[current].parent = Some(id);
            nodes[right].parent = Some(id);
            nodes.push(node);
            current = id;
        }
        SjTree {
            root: current,
            nodes,
            leaves,
            window_ms: q.window_ms(),
            completions: 0,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    pub fn nodes(&self) -> &[SjNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SjNode {
        &self.nodes[id]
    }

    pub fn window_ms(&self) -> i64 {
        self.window_ms
    }

    pub fn completions(&self) -> u64 {
        self.completions
    }

    /// Partial matches currently held across all nodes.
    pub fn stored_matches(&self) -> usize {
        self.nodes.iter().map(SjNode::stored).sum()
    }

    pub fn total_evicted(&self) -> u64 {
        self.nodes.iter().map(|n| n.counters.evicted).sum()
    }

    pub fn total_duplicates(&self) -> u64 {
        self.nodes.iter().map(|n| n.counters.duplicates).sum()
    }

    fn sibling(&self, node: NodeId) -> Option<(NodeId, NodeId)> {
        let parent = self.nodes[node].parent?;
        let (l, r) = self.nodes[parent].children?;
        Some((parent, if l == node { r } else { l }))
    }

    /// Stores `m` at `node`, joins it against the sibling's table and pushes
    /// every successful join one level up, repeating until no larger match
    /// forms. Matches completing the root are returned.
    pub fn insert_and_propagate(
        &mut self,
        node: NodeId,
        m: Match,
    ) -> Result<Vec<Match>, TreeError> {
        let n = self.nodes.get(node).ok_or(TreeError::UnknownNode(node))?;
        let got = m.query_edges();
        if got != n.query_edges {
            return Err(TreeError::ShapeMismatch {
                node,
                expected: n.query_edges.clone(),
                got,
            });
        }
        let mut completed = Vec::new();
        self.insert(node, m, &mut completed);
        Ok(completed)
    }

    fn insert(&mut self, node: NodeId, m: Match, completed: &mut Vec<Match>) {
        if node == self.root {
            self.completions += 1;
            completed.push(m);
            return;
        }
        if !self.nodes[node].dedup.insert(m.signature()) {
            self.nodes[node].counters.duplicates += 1;
            return;
        }
        let (parent, sibling) = self.sibling(node).expect("non-root node has a parent");
        let key: Box<[VertexId]> = self.nodes[parent]
            .cut
            .iter()
            .map(|&v| m.vertex(v).expect("cut vertex bound in child match"))
            .collect();

        let mut joined = Vec::new();
        let mut counters = NodeCounters::default();
        if let Some(candidates) = self.nodes[sibling].table.get(&key) {
            let cut = &self.nodes[parent].cut;
            for other in candidates {
                counters.join_attempts += 1;
                match join_matches(&m, other, cut, self.window_ms) {
                    Ok(j) => joined.push(j),
                    Err(JoinReject::CutMismatch) => counters.rejected_cut += 1,
                    Err(JoinReject::Injectivity) => counters.rejected_injectivity += 1,
                    Err(JoinReject::Window) => counters.rejected_window += 1,
                }
            }
        }
        let pc = &mut self.nodes[parent].counters;
        pc.join_attempts += counters.join_attempts;
        pc.rejected_cut += counters.rejected_cut;
        pc.rejected_injectivity += counters.rejected_injectivity;
        pc.rejected_window += counters.rejected_window;

        let n = &mut self.nodes[node];
        n.counters.inserted += 1;
        n.table.entry(key).or_default().push(m);

        for j in joined {
            self.insert(parent, j, completed);
        }
    }

    /// Drops every partial match whose earliest edge is at or before
    /// `watermark - window_ms`; none of them can still complete in-window.
    pub fn expire(&mut self, watermark: Timestamp) -> usize {
        let cutoff = watermark.saturating_sub(self.window_ms);
        let mut total = 0;
        for node in &mut self.nodes {
            let mut evicted = 0;
            let dedup = &mut node.dedup;
            node.table.retain(|_, bucket| {
                bucket.retain(|m| {
                    let keep = m.interval.earliest > cutoff;
                    if !keep {
                        dedup.remove(&m.signature());
                        evicted += 1;
                    }
                    keep
                });
                !bucket.is_empty()
            });
            node.counters.evicted += evicted as u64;
            total += evicted;
        }
        total
    }

    /// Checks that the root is the whole query, every internal node is the
    /// disjoint union of its children with the shared vertices as its cut,
    /// and the leaves partition the query edges.
    pub fn check_structure(&self, q: &QueryGraph) -> Result<(), String> {
        let all: Vec<usize> = (0..q.edges().len()).collect();
        if self.nodes[self.root].query_edges != all {
            return Err("root subgraph is not the query graph".into());
        }
        if self.nodes[self.root].parent.is_some() {
            return Err("root has a parent".into());
        }
        let mut covered = BTreeSet::new();
        for &leaf in &self.leaves {
            let n = &self.nodes[leaf];
            if n.children.is_some() || !n.cut.is_empty() {
                return Err(format!("leaf {leaf} has children or a cut"));
            }
            for &e in &n.query_edges {
                if !covered.insert(e) {
                    return Err(format!("query edge {e} is in two leaves"));
                }
            }
        }
        if covered.into_iter().collect::<Vec<_>>() != all {
            return Err("leaves do not cover the query".into());
        }
        for n in &self.nodes {
            if n.vertices != vertices_of(q, &n.query_edges) {
                return Err(format!(
                    "node {} vertex set is not its edges' endpoints",
                    n.id
                ));
            }
            let Some((l, r)) = n.children else { continue };
            let (l, r) = (&self.nodes[l], &self.nodes[r]);
            if l.parent != Some(n.id) || r.parent != Some(n.id) {
                return Err(format!("node {} children do not point back", n.id));
            }
            if !sorted_intersection(&l.query_edges, &r.query_edges).is_empty() {
                return Err(format!("children of node {} share edges", n.id));
            }
            if n.query_edges != sorted_union(&l.query_edges, &r.query_edges)
                || n.vertices != sorted_union(&l.vertices, &r.vertices)
            {
                return Err(format!("node {} is not the union of its children", n.id));
            }
            if n.cut != sorted_intersection(&l.vertices, &r.vertices) {
                return Err(format!(
                    "node {} cut is not the children's intersection",
                    n.id
                ));
            }
            if n.cut.is_empty() {
                return Err(format!("node {} has an empty cut", n.id));
            }
        }
        Ok(())
    }

    /// Walks every table and checks the stored-match invariants. When a
    /// graph is given, bound edges still stored there must connect the
    /// bound vertices with accepted types.
    pub fn validate(&self, q: &QueryGraph, graph: Option<&DynamicGraph>) -> Result<(), String> {
        for n in &self.nodes {
            if n.id == self.root && n.stored() > 0 {
                return Err("root stores matches".into());
            }
            let mut seen = HashSet::new();
            let mut count = 0;
            for (key, bucket) in &n.table {
                for m in bucket {
                    count += 1;
                    self.validate_match(q, graph, n, m)?;
                    if let Some(parent) = n.parent {
                        let expect: Vec<VertexId> = self.nodes[parent]
                            .cut
                            .iter()
                            .filter_map(|&c| m.vertex(c))
                            .collect();
                        if *expect != **key {
                            return Err(format!("node {}: match filed under wrong key", n.id));
                        }
                    }
                    let sig = m.signature();
                    if !n.dedup.contains(&sig) || !seen.insert(sig.clone()) {
                        return Err(format!(
                            "node {}: signature {sig} duplicated or unindexed",
                            n.id
                        ));
                    }
                    if let Some((l, r)) = n.children {
                        for child in [l, r] {
                            let c = &self.nodes[child];
                            let bound: Vec<usize> = c
                                .query_edges
                                .iter()
                                .filter(|&&e| m.edge(e).is_some())
                                .copied()
                                .collect();
                            if bound != c.query_edges
                                || c.vertices.iter().any(|&v| m.vertex(v).is_none())
                            {
                                return Err(format!(
                                    "node {}: match does not decompose into child {child}",
                                    n.id
                                ));
                            }
                        }
                    }
                }
            }
            if count != n.dedup.len() {
                return Err(format!("node {}: dedup index out of sync", n.id));
            }
        }
        Ok(())
    }

    fn validate_match(
        &self,
        q: &QueryGraph,
        graph: Option<&DynamicGraph>,
        n: &SjNode,
        m: &Match,
    ) -> Result<(), String> {
        let fail = |what: &str| Err(format!("node {}: match {}: {what}", n.id, m.signature()));
        if m.query_edges() != n.query_edges {
            return fail("bound edges differ from node subgraph");
        }
        let bound: Vec<usize> = m.bound_vertices().map(|(i, _)| i).collect();
        if bound != n.vertices {
            return fail("bound vertices differ from node subgraph");
        }
        if !m.is_injective() {
            return fail("not injective");
        }
        if TimeInterval::covering(m.bound_edges().map(|(_, b)| b.timestamp)) != Some(m.interval) {
            return fail("interval does not cover bound edges");
        }
        if m.interval.span() >= self.window_ms {
            return fail("span reaches the window");
        }
        if let Some(g) = graph {
            for (qe, b) in m.bound_edges() {
                let e = q.edge(qe);
                if let Some((s, d)) = g.edge_endpoints(b.key) {
                    if Some(s) != m.vertex(e.source) || Some(d) != m.vertex(e.target) {
                        return fail("edge endpoints disagree with vertex bindings");
                    }
                    let label = |v: VertexId| g.symbols().resolve(g.vertex_type(v));
                    if !e.edge_type.accepts(g.symbols().resolve(b.edge_type))
                        || !q.vertex(e.source).type_label.accepts(label(s))
                        || !q.vertex(e.target).type_label.accepts(label(d))
                    {
                        return fail("types incompatible");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dump(&self) -> TreeDump {
        TreeDump {
            window_ms: self.window_ms,
            root: self.root,
            completions: self.completions,
            stored: self.stored_matches(),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDump {
                    id: n.id,
                    role: n.role(self.root),
                    query_edges: n.query_edges.clone(),
                    cut: n.cut.clone(),
                    children: n.children.map(|(l, r)| [l, r]),
                    leaf_score: n.leaf_score,
                    stored: n.stored(),
                    join_keys: n.table.len(),
                    counters: n.counters.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeDump {
    pub id: NodeId,
    pub role: NodeRole,
    pub query_edges: Vec<usize>,
    pub cut: Vec<usize>,
    pub children: Option<[NodeId; 2]>,
    pub leaf_score: Option<f64>,
    pub stored: usize,
    pub join_keys: usize,
    pub counters: NodeCounters,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeDump {
    pub window_ms: i64,
    pub root: NodeId,
    pub completions: u64,
    pub stored: usize,
    pub nodes: Vec<NodeDump>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SymbolTable;
    use crate::planner::{DecompositionPlan, Leaf};

    // query A -e0-> B -e1-> C
    fn path_query(window: i64) -> QueryGraph {
        QueryGraph::new(
            "path",
            window,
            [
                ("A".to_string(), "*".to_string()),
                ("B".into(), "*".into()),
                ("C".into(), "*".into()),
            ],
            [
                ("A".to_string(), "B".to_string(), "x".to_string()),
                ("B".into(), "C".into(), "y".into()),
            ],
        )
        .unwrap()
    }

    fn v(i: u32) -> Option<VertexId> {
        Some(VertexId(i))
    }

    fn bind(syms: &mut SymbolTable, key: u64, t: Timestamp) -> Option<EdgeBinding> {
        Some(EdgeBinding {
            key: EdgeKey(key),
            timestamp: t,
            edge_type: syms.intern("x"),
        })
    }

    fn left(s: &mut SymbolTable, a: u32, b: u32, t: Timestamp) -> Match {
        Match::from_bindings(
            vec![v(a), v(b), None],
            vec![bind(s, 100 + t as u64, t), None],
        )
        .unwrap()
    }

    fn right(s: &mut SymbolTable, b: u32, c: u32, t: Timestamp) -> Match {
        Match::from_bindings(
            vec![None, v(b), v(c)],
            vec![None, bind(s, 200 + t as u64, t)],
        )
        .unwrap()
    }

    #[test]
    fn join_examples() {
        let s = &mut SymbolTable::default();
        let cut = [1];
        let j = join_matches(&left(s, 1, 2, 0), &right(s, 2, 3, 1), &cut, 100).unwrap();
        assert_eq!(
            j.bound_vertices().collect::<Vec<_>>(),
            vec![(0, VertexId(1)), (1, VertexId(2)), (2, VertexId(3))]
        );
        assert_eq!(
            join_matches(&left(s, 1, 2, 0), &right(s, 4, 3, 1), &cut, 100),
            Err(JoinReject::CutMismatch)
        );
        assert_eq!(
            join_matches(&left(s, 1, 2, 0), &right(s, 2, 1, 1), &cut, 100),
            Err(JoinReject::Injectivity)
        );
    }

    #[test]
    fn join_window_boundary_is_exclusive() {
        let s = &mut SymbolTable::default();
        let l = Match::from_bindings(vec![v(1), v(2), None], vec![bind(s, 1, 0), None]);
        let mut l = l.unwrap();
        l.interval = TimeInterval::new(0, 50);
        let mut r = right(s, 2, 3, 100);
        r.interval = TimeInterval::new(90, 100);
        assert_eq!(join_matches(&l, &r, &[1], 100), Err(JoinReject::Window));
        assert!(join_matches(&l, &r, &[1], 101).is_ok());
    }

    #[test]
    fn join_rejects_shared_edge() {
        let s = &mut SymbolTable::default();
        let l = Match::from_bindings(vec![v(1), v(2), None], vec![bind(s, 7, 0), None]).unwrap();
        let r = Match::from_bindings(vec![None, v(2), v(3)], vec![None, bind(s, 7, 0)]).unwrap();
        assert_eq!(join_matches(&l, &r, &[1], 10), Err(JoinReject::Injectivity));
    }

    fn two_leaf_tree(window: i64) -> (QueryGraph, SjTree) {
        let q = path_query(window);
        let plan = DecompositionPlan::from_leaves(
            vec![
                Leaf {
                    edges: vec![0],
                    score: 1.0,
                },
                Leaf {
                    edges: vec![1],
                    score: 1.0,
                },
            ],
            1,
        );
        let tree = SjTree::from_plan(&plan, &q);
        (q, tree)
    }

    #[test]
    fn minimal_propagation() {
        let s = &mut SymbolTable::default();
        let (q, mut tree) = two_leaf_tree(100);
        tree.check_structure(&q).unwrap();
        assert_eq!(tree.node(tree.root()).cut, vec![1]);
        assert!(tree
            .insert_and_propagate(0, left(s, 1, 2, 0))
            .unwrap()
            .is_empty());
        let done = tree.insert_and_propagate(1, right(s, 2, 3, 1)).unwrap();
        assert_eq!(done.len(), 1);
        assert_eq!(done[0].vertex(2), Some(VertexId(3)));
        assert_eq!(tree.completions(), 1);
        assert_eq!(tree.stored_matches(), 2);
        tree.validate(&q, None).unwrap();
    }

    #[test]
    fn duplicates_are_dropped() {
        let s = &mut SymbolTable::default();
        let (_, mut tree) = two_leaf_tree(100);
        tree.insert_and_propagate(0, left(s, 1, 2, 0)).unwrap();
        tree.insert_and_propagate(0, left(s, 1, 2, 0)).unwrap();
        assert_eq!(tree.node(0).stored(), 1);
        assert_eq!(tree.total_duplicates(), 1);
    }

    #[test]
    fn shape_and_node_errors() {
        let s = &mut SymbolTable::default();
        let (_, mut tree) = two_leaf_tree(100);
        assert_eq!(
            tree.insert_and_propagate(9, left(s, 1, 2, 0)),
            Err(TreeError::UnknownNode(9))
        );
        assert!(matches!(
            tree.insert_and_propagate(1, left(s, 1, 2, 0)),
            Err(TreeError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn expire_boundary() {
        let s = &mut SymbolTable::default();
        let (q, mut tree) = two_leaf_tree(100);
        assert_eq!(tree.expire(1000), 0);
        tree.insert_and_propagate(0, left(s, 1, 2, 899)).unwrap();
        tree.insert_and_propagate(0, left(s, 5, 6, 901)).unwrap();
        assert_eq!(tree.expire(1000), 1);
        assert_eq!(tree.node(0).stored(), 1);
        assert!(tree.node(0).matches().all(|m| m.interval().earliest > 900));
        tree.validate(&q, None).unwrap();
        // the evicted signature may be stored again
        tree.insert_and_propagate(0, left(s, 1, 2, 899)).unwrap();
        assert_eq!(tree.node(0).stored(), 2);
    }

    #[test]
    fn single_leaf_tree_is_root() {
        let q = path_query(10);
        let plan = DecompositionPlan::from_leaves(
            vec![Leaf {
                edges: vec![0, 1],
                score: 1.0,
            }],
            2,
        );
        let tree = SjTree::from_plan(&plan, &q);
        assert_eq!(tree.nodes().len(), 1);
        assert_eq!(tree.root(), 0);
        tree.check_structure(&q).unwrap();
    }

    #[test]
    fn three_leaf_shape() {
        let q = QueryGraph::new(
            "p3",
            10,
            [
                ("a".to_string(), "*".to_string()),
                ("b".into(), "*".into()),
                ("c".into(), "*".into()),
                ("d".into(), "*".into()),
            ],
            [
                ("a".to_string(), "b".to_string(), "x".to_string()),
                ("b".into(), "c".into(), "x".into()),
                ("c".into(), "d".into(), "x".into()),
            ],
        )
        .unwrap();
        let plan = DecompositionPlan::from_leaves(
            vec![
                Leaf {
                    edges: vec![1],
                    score: 0.1,
                },
                Leaf {
                    edges: vec![0],
                    score: 0.5,
                },
                Leaf {
                    edges: vec![2],
                    score: 0.5,
                },
            ],
            1,
        );
        let tree = SjTree::from_plan(&plan, &q);
        assert_eq!(tree.nodes().len(), 5);
        assert_eq!(tree.node(3).query_edges, vec![0, 1]);
        assert_eq!(tree.node(3).cut, vec![1]);
        assert_eq!(tree.node(4).cut, vec![2]);
        assert_eq!(tree.root(), 4);
        tree.check_structure(&q).unwrap();
    }
}
