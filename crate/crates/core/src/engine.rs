//! Continuous query execution.
//!
//! Every arriving edge is inserted into the shared [`DynamicGraph`] and then,
//! for every registered query and every leaf of its SJ-tree, used as the
//! anchor of a local search for that leaf's primitive. Leaf matches are fed
//! into the tree, which joins them upward; matches completing the root are
//! the new results for this edge.
//!
//! Anchoring every leaf search on the new edge means each complete match is
//! assembled exactly once, when its last edge arrives: its other leaf
//! matches are already stored, and the leaf holding the new edge finds its
//! part through the anchor.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    Adjacent, DynamicGraph, EdgeKey, GraphError, InsertOutcome, Symbol, SymbolTable, TimeInterval,
    Timestamp, TimestampedEdge, VertexId, DEFAULT_SWEEP_INTERVAL,
};
use crate::planner::{
    build_sj_tree, decompose, DecompositionPlan, PlanError, DEFAULT_MAX_LEAF_SIZE,
};
use crate::query::{Label, QueryGraph};
use crate::sjtree::{EdgeBinding, Match, MatchSignature, SjTree, TreeDump, TreeError};
use crate::stats::GraphStatistics;

pub const DEFAULT_EXPIRY_STRIDE: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("queries must be registered before the first edge is processed")]
    RegistrationAfterStart,
    #[error("a query named `{0}` is already registered")]
    DuplicateQuery(String),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub max_leaf_size: usize,
    /// Partial matches are expired every this many processed edges.
    pub expiry_stride: u64,
    /// Retained edges are swept every this many insertions.
    pub sweep_interval: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            max_leaf_size: DEFAULT_MAX_LEAF_SIZE,
            expiry_stride: DEFAULT_EXPIRY_STRIDE,
            sweep_interval: DEFAULT_SWEEP_INTERVAL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Constraint {
    Any,
    Is(Symbol),
    // label never seen in the graph, so nothing can match it
    Never,
}

impl Constraint {
    fn compile(label: &Label, symbols: &SymbolTable) -> Self {
        match label {
            Label::Any => Constraint::Any,
            Label::Exact(s) => symbols.get(s).map_or(Constraint::Never, Constraint::Is),
        }
    }

    #[inline]
    fn accepts(self, sym: Symbol) -> bool {
        match self {
            Constraint::Any => true,
            Constraint::Is(s) => s == sym,
            Constraint::Never => false,
        }
    }
}

#[derive(Debug, Clone)]
struct CompiledEdge {
    source: usize,
    target: usize,
    edge_type: Constraint,
}

/// Query labels resolved against a graph's symbol table.
#[derive(Debug, Clone)]
struct CompiledQuery {
    vertex_types: Vec<Constraint>,
    edges: Vec<CompiledEdge>,
    window_ms: i64,
}

impl CompiledQuery {
    fn new(q: &QueryGraph, symbols: &SymbolTable) -> Self {
        Self {
            vertex_types: q
                .vertices()
                .iter()
                .map(|v| Constraint::compile(&v.type_label, symbols))
                .collect(),
            edges: q
                .edges()
                .iter()
                .map(|e| CompiledEdge {
                    source: e.source,
                    target: e.target,
                    edge_type: Constraint::compile(&e.edge_type, symbols),
                })
                .collect(),
            window_ms: q.window_ms(),
        }
    }
}

/// Backtracking state for one anchored leaf search.
struct LeafSearch<'a> {
    graph: &'a DynamicGraph,
    q: &'a CompiledQuery,
    leaf: &'a [usize],
    cutoff: Timestamp,
    vertices: Vec<Option<VertexId>>,
    edges: Vec<Option<EdgeBinding>>,
    found: Vec<Match>,
}

impl LeafSearch<'_> {
    fn vertex_ok(&self, qv: usize, v: VertexId) -> bool {
        match self.vertices[qv] {
            Some(bound) => bound == v,
            None => {
                self.q.vertex_types[qv].accepts(self.graph.vertex_type(v))
                    && !self.vertices.contains(&Some(v))
            }
        }
    }

    fn interval(&self) -> TimeInterval {
        TimeInterval::covering(self.edges.iter().flatten().map(|b| b.timestamp))
            .expect("anchor is bound")
    }

    fn extend(&mut self, pending: u32) {
        if pending == 0 {
            let m = Match::from_bindings(self.vertices.clone(), self.edges.clone())
                .expect("non-empty match");
            self.found.push(m);
            return;
        }
        // next pending query edge with a bound endpoint; leaves are connected
        let Some(slot) = (0..self.leaf.len()).find(|&i| {
            let e = &self.q.edges[self.leaf[i]];
            pending & (1 << i) != 0
                && (self.vertices[e.source].is_some() || self.vertices[e.target].is_some())
        }) else {
            return;
        };
        let qe = self.leaf[slot];
        let e = self.q.edges[qe].clone();
        let rest = pending & !(1 << slot);

        let span = self.interval();
        let lo = (span.latest - self.q.window_ms + 1).max(self.cutoff);
        let hi = span.earliest + self.q.window_ms - 1;
        let (anchor, outgoing) = match self.vertices[e.source] {
            Some(s) => (s, true),
            None => (self.vertices[e.target].expect("endpoint bound"), false),
        };
        let list = if outgoing {
            self.graph.out_adjacency(anchor)
        } else {
            self.graph.in_adjacency(anchor)
        };
        let start = list.partition_point(|a| a.timestamp < lo);
        let candidates: Vec<Adjacent> = list
            .range(start..)
            .take_while(|a| a.timestamp <= hi)
            .filter(|a| e.edge_type.accepts(a.edge_type))
            .copied()
            .collect();
        let far = if outgoing { e.target } else { e.source };
        for a in candidates {
            if self.edges.iter().flatten().any(|b| b.key == a.key) || !self.vertex_ok(far, a.other)
            {
                continue;
            }
            let fresh = self.vertices[far].is_none();
            self.vertices[far] = Some(a.other);
            self.edges[qe] = Some(EdgeBinding {
                key: a.key,
                timestamp: a.timestamp,
                edge_type: a.edge_type,
            });
            self.extend(rest);
            self.edges[qe] = None;
            if fresh {
                self.vertices[far] = None;
            }
        }
    }
}

fn search_leaf(
    graph: &DynamicGraph,
    q: &CompiledQuery,
    leaf: &[usize],
    seed: EdgeKey,
) -> Vec<Match> {
    let Some((src, dst, seed_type, seed_time)) = graph.edge_entry(seed) else {
        return Vec::new();
    };
    let mut search = LeafSearch {
        graph,
        q,
        leaf,
        cutoff: graph.cutoff(),
        vertices: vec![None; q.vertex_types.len()],
        edges: vec![None; q.edges.len()],
        found: Vec::new(),
    };
    if src == dst {
        return Vec::new();
    }
    let all = (1u32 << leaf.len()) - 1;
    for (slot, &qe) in leaf.iter().enumerate() {
        let e = &q.edges[qe];
        if !e.edge_type.accepts(seed_type)
            || !q.vertex_types[e.source].accepts(graph.vertex_type(src))
            || !q.vertex_types[e.target].accepts(graph.vertex_type(dst))
        {
            continue;
        }
        search.vertices[e.source] = Some(src);
        search.vertices[e.target] = Some(dst);
        search.edges[qe] = Some(EdgeBinding {
            key: seed,
            timestamp: seed_time,
            edge_type: seed_type,
        });
        search.extend(all & !(1 << slot));
        search.edges[qe] = None;
        search.vertices[e.source] = None;
        search.vertices[e.target] = None;
    }
    search.found
}

/// Every match of the primitive `leaf_edges` in which some query edge is
/// bound to the retained edge `seed`, with span below the query window.
pub fn local_search(
    graph: &DynamicGraph,
    q: &QueryGraph,
    leaf_edges: &[usize],
    seed: EdgeKey,
) -> Vec<Match> {
    assert!(
        leaf_edges.len() <= 32,
        "primitive too large for local search"
    );
    let compiled = CompiledQuery::new(q, graph.symbols());
    search_leaf(graph, &compiled, leaf_edges, seed)
}

/// A registered query with its plan and live SJ-tree.
#[derive(Debug, Clone)]
pub struct QueryRuntime {
    query: QueryGraph,
    plan: DecompositionPlan,
    tree: SjTree,
    compiled: CompiledQuery,
    emitted: u64,
}

impl QueryRuntime {
    pub fn query(&self) -> &QueryGraph {
        &self.query
    }

    pub fn plan(&self) -> &DecompositionPlan {
        &self.plan
    }

    pub fn tree(&self) -> &SjTree {
        &self.tree
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn summary(&self) -> QuerySummary {
        QuerySummary {
            name: self.query.name().to_owned(),
            emitted: self.emitted,
            stored_partials: self.tree.stored_matches(),
            evicted: self.tree.total_evicted(),
            duplicates: self.tree.total_duplicates(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EmittedEdge {
    pub src: String,
    pub dst: String,
    pub etype: String,
    pub t: Timestamp,
    pub edge_key: EdgeKey,
    /// Query edge this data edge is bound to.
    pub qeid: usize,
}

/// One reported match.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmittedMatch {
    pub query: String,
    /// Timestamp of the latest edge in the match.
    pub completed_at: Timestamp,
    pub bindings: BTreeMap<String, String>,
    /// Sorted by `(t, edge_key)`.
    pub edges: Vec<EmittedEdge>,
}

impl EmittedMatch {
    pub fn interval(&self) -> TimeInterval {
        TimeInterval::covering(self.edges.iter().map(|e| e.t)).expect("matches have edges")
    }

    pub fn signature(&self) -> MatchSignature {
        let mut pairs: Vec<(usize, EdgeKey)> =
            self.edges.iter().map(|e| (e.qeid, e.edge_key)).collect();
        pairs.sort_unstable();
        MatchSignature(pairs)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("emission serializes")
    }

    /// Canonical ordering used for output files.
    pub fn sort_canonical(matches: &mut [EmittedMatch]) {
        matches.sort_by_cached_key(|m| (m.completed_at, m.query.clone(), m.signature()));
    }

    fn from_match(q: &QueryGraph, graph: &DynamicGraph, m: &Match) -> EmittedMatch {
        let name = |v: Option<VertexId>| graph.vertex_name(v.expect("complete match")).to_owned();
        let bindings = q
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.qid.clone(), name(m.vertex(i))))
            .collect();
        let mut edges: Vec<EmittedEdge> = m
            .bound_edges()
            .map(|(qe, b)| {
                let e = q.edge(qe);
                EmittedEdge {
                    src: name(m.vertex(e.source)),
                    dst: name(m.vertex(e.target)),
                    etype: graph.symbols().resolve(b.edge_type).to_owned(),
                    t: b.timestamp,
                    edge_key: b.key,
                    qeid: qe,
                }
            })
            .collect();
        edges.sort_by_key(|e| (e.t, e.edge_key));
        EmittedMatch {
            query: q.name().to_owned(),
            completed_at: m.interval().latest,
            bindings,
            edges,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuerySummary {
    pub name: String,
    pub emitted: u64,
    pub stored_partials: usize,
    pub evicted: u64,
    pub duplicates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EngineSummary {
    pub edges_processed: u64,
    pub dropped_late: u64,
    pub retained_edges: usize,
    pub queries: Vec<QuerySummary>,
}

/// Continuous-query driver over one shared dynamic graph.
#[derive(Debug, Clone)]
pub struct Engine {
    graph: DynamicGraph,
    runtimes: Vec<QueryRuntime>,
    config: EngineConfig,
    processed: u64,
    started: bool,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        let mut graph = DynamicGraph::with_retention(0);
        graph.set_sweep_interval(config.sweep_interval);
        Self {
            graph,
            runtimes: Vec::new(),
            config,
            processed: 0,
            started: false,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn queries(&self) -> &[QueryRuntime] {
        &self.runtimes
    }

    /// Plans `q` against `stats` and adds it. Only allowed before streaming.
    pub fn register_query(
        &mut self,
        q: QueryGraph,
        stats: &GraphStatistics,
    ) -> Result<&QueryRuntime, EngineError> {
        if self.started {
            return Err(EngineError::RegistrationAfterStart);
        }
        if self.runtimes.iter().any(|r| r.query.name() == q.name()) {
            return Err(EngineError::DuplicateQuery(q.name().to_owned()));
        }
        let plan = decompose(&q, stats, self.config.max_leaf_size)?;
        let tree = build_sj_tree(&plan, &q);
        let symbols = self.graph.symbols_mut();
        for v in q.vertices() {
            if let Label::Exact(s) = &v.type_label {
                symbols.intern(s);
            }
        }
        for e in q.edges() {
            if let Label::Exact(s) = &e.edge_type {
                symbols.intern(s);
            }
        }
        let compiled = CompiledQuery::new(&q, self.graph.symbols());
        let retention = self.graph.retention().unwrap_or(0).max(q.window_ms());
        self.graph.set_retention(Some(retention));
        self.runtimes.push(QueryRuntime {
            query: q,
            plan,
            tree,
            compiled,
            emitted: 0,
        });
        Ok(self.runtimes.last().expect("just pushed"))
    }

    /// Ingests one edge and returns the matches it completes, ordered by
    /// completion time, query and signature.
    pub fn process_edge(
        &mut self,
        edge: TimestampedEdge,
    ) -> Result<Vec<EmittedMatch>, EngineError> {
        self.started = true;
        let key = edge.edge_key;
        if self.graph.insert_edge(edge)? == InsertOutcome::DroppedLate {
            return Ok(Vec::new());
        }
        self.processed += 1;
        if self
            .processed
            .is_multiple_of(self.config.expiry_stride.max(1))
        {
            self.expire();
        }

        let mut out = Vec::new();
        for (qi, rt) in self.runtimes.iter_mut().enumerate() {
            let leaves = rt.tree.leaves().to_vec();
            for leaf in leaves {
                let found = search_leaf(
                    &self.graph,
                    &rt.compiled,
                    &rt.tree.node(leaf).query_edges,
                    key,
                );
                for m in found {
                    for done in rt.tree.insert_and_propagate(leaf, m)? {
                        out.push((qi, done));
                    }
                }
            }
        }
        let mut emitted: Vec<(usize, EmittedMatch)> = out
            .into_iter()
            .map(|(qi, m)| {
                (
                    qi,
                    EmittedMatch::from_match(&self.runtimes[qi].query, &self.graph, &m),
                )
            })
            .collect();
        emitted.sort_by_cached_key(|(qi, m)| (m.completed_at, *qi, m.signature()));
        for (qi, _) in &emitted {
            self.runtimes[*qi].emitted += 1;
        }
        Ok(emitted.into_iter().map(|(_, m)| m).collect())
    }

    /// Per-edge results concatenated in input order.
    pub fn process_batch(
        &mut self,
        edges: impl IntoIterator<Item = TimestampedEdge>,
    ) -> Result<Vec<EmittedMatch>, EngineError> {
        let mut all = Vec::new();
        for e in edges {
            all.extend(self.process_edge(e)?);
        }
        Ok(all)
    }

    /// Expires dead partial matches in every tree. Returns the number evicted.
    pub fn expire(&mut self) -> usize {
        let Some(w) = self.graph.watermark() else {
            return 0;
        };
        self.runtimes.iter_mut().map(|rt| rt.tree.expire(w)).sum()
    }

    pub fn edges_processed(&self) -> u64 {
        self.processed
    }

    pub fn summary(&self) -> EngineSummary {
        EngineSummary {
            edges_processed: self.processed,
            dropped_late: self.graph.dropped_late(),
            retained_edges: self.graph.stored_edge_count(),
            queries: self.runtimes.iter().map(QueryRuntime::summary).collect(),
        }
    }

    pub fn dump_trees(&self) -> Vec<(String, TreeDump)> {
        self.runtimes
            .iter()
            .map(|rt| (rt.query.name().to_owned(), rt.tree.dump()))
            .collect()
    }

    /// Runs the structural and stored-match validators over every query.
    pub fn validate(&self) -> Result<(), String> {
        self.graph.check_consistency()?;
        for rt in &self.runtimes {
            rt.plan.validate(&rt.query)?;
            rt.tree.check_structure(&rt.query)?;
            rt.tree.validate(&rt.query, Some(&self.graph))?;
        }
        Ok(())
    }
}

/// Distinct signatures in a run's emissions; equals the emission count iff
/// no match was reported twice.
pub fn distinct_signatures(emitted: &[EmittedMatch]) -> usize {
    emitted
        .iter()
        .map(|m| (m.query.clone(), m.signature()))
        .collect::<HashSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexRef;

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

    fn e(key: u64, s: &str, d: &str, t: &str, ts: Timestamp) -> TimestampedEdge {
        TimestampedEdge::new(
            key,
            VertexRef::new(s, "Host"),
            VertexRef::new(d, "Host"),
            t,
            ts,
        )
    }

    #[test]
    fn retention_follows_largest_window() {
        let mut eng = Engine::default();
        eng.register_query(path_query(100), &GraphStatistics::new())
            .unwrap();
        assert_eq!(eng.graph().retention(), Some(100));
        let q2 = QueryGraph::new(
            "wide",
            5000,
            [("a".to_string(), "*".to_string()), ("b".into(), "*".into())],
            [("a".to_string(), "b".to_string(), "x".to_string())],
        )
        .unwrap();
        eng.register_query(q2, &GraphStatistics::new()).unwrap();
        assert_eq!(eng.graph().retention(), Some(5000));
        assert!(matches!(
            eng.register_query(path_query(1), &GraphStatistics::new()),
            Err(EngineError::DuplicateQuery(_))
        ));
    }

    #[test]
    fn registration_closed_after_first_edge() {
        let mut eng = Engine::default();
        eng.register_query(path_query(60000), &GraphStatistics::new())
            .unwrap();
        eng.process_edge(e(0, "n1", "n2", "x", 1)).unwrap();
        let again = QueryGraph::new(
            "late",
            10,
            [("a".to_string(), "*".to_string()), ("b".into(), "*".into())],
            [("a".to_string(), "b".to_string(), "x".to_string())],
        )
        .unwrap();
        assert_eq!(
            eng.register_query(again, &GraphStatistics::new())
                .unwrap_err(),
            EngineError::RegistrationAfterStart
        );
    }

    #[test]
    fn two_edge_path_completes_once() {
        let mut eng = Engine::default();
        eng.register_query(path_query(10), &GraphStatistics::new())
            .unwrap();
        assert!(eng
            .process_edge(e(0, "n1", "n2", "x", 1))
            .unwrap()
            .is_empty());
        let out = eng.process_edge(e(1, "n2", "n3", "y", 2)).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].completed_at, 2);
        let b: Vec<_> = out[0]
            .bindings
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        assert_eq!(b, vec![("A", "n1"), ("B", "n2"), ("C", "n3")]);
        eng.validate().unwrap();
    }

    #[test]
    fn span_at_window_is_not_reported() {
        let mut eng = Engine::default();
        eng.register_query(path_query(10), &GraphStatistics::new())
            .unwrap();
        eng.process_edge(e(0, "n1", "n2", "x", 1)).unwrap();
        assert!(eng
            .process_edge(e(1, "n2", "n3", "y", 20))
            .unwrap()
            .is_empty());
        assert!(eng
            .process_edge(e(2, "n2", "n4", "y", 11))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn local_search_two_edge_leaf() {
        // (A)-[x]->(B)-[y]->(C); seed n2-y->n3, with x-edges n1->n2 and n4->n2
        let q = path_query(100);
        let mut g = DynamicGraph::unbounded();
        g.insert_edge(e(0, "n1", "n2", "x", 1)).unwrap();
        g.insert_edge(e(1, "n4", "n2", "x", 2)).unwrap();
        g.insert_edge(e(2, "n2", "n5", "z", 3)).unwrap();
        g.insert_edge(e(3, "n2", "n3", "y", 4)).unwrap();
        let found = local_search(&g, &q, &[0, 1], EdgeKey(3));
        let mut heads: Vec<_> = found
            .iter()
            .map(|m| g.vertex_name(m.vertex(0).unwrap()).to_owned())
            .collect();
        heads.sort();
        assert_eq!(heads, vec!["n1", "n4"]);

        let single = local_search(&g, &q, &[1], EdgeKey(3));
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].edge(1).unwrap().key, EdgeKey(3));

        assert!(local_search(&g, &q, &[1], EdgeKey(2)).is_empty());
    }

    #[test]
    fn local_search_respects_window_and_injectivity() {
        let q = path_query(5);
        let mut g = DynamicGraph::unbounded();
        g.insert_edge(e(0, "n1", "n2", "x", 1)).unwrap();
        g.insert_edge(e(1, "n3", "n2", "x", 8)).unwrap();
        g.insert_edge(e(2, "n2", "n3", "y", 10)).unwrap();
        // n1 is too old, n3 would bind A and C to the same vertex
        assert!(local_search(&g, &q, &[0, 1], EdgeKey(2)).is_empty());
    }

    #[test]
    fn parallel_edges_give_distinct_matches() {
        let mut eng = Engine::default();
        eng.register_query(path_query(100), &GraphStatistics::new())
            .unwrap();
        eng.process_edge(e(0, "n1", "n2", "x", 1)).unwrap();
        eng.process_edge(e(1, "n1", "n2", "x", 2)).unwrap();
        let out = eng.process_edge(e(2, "n2", "n3", "y", 3)).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(distinct_signatures(&out), 2);
    }

    #[test]
    fn late_edges_are_counted_not_matched() {
        let mut eng = Engine::default();
        eng.register_query(path_query(10), &GraphStatistics::new())
            .unwrap();
        eng.process_edge(e(0, "n1", "n2", "x", 100)).unwrap();
        assert!(eng
            .process_edge(e(1, "n2", "n3", "y", 50))
            .unwrap()
            .is_empty());
        assert_eq!(eng.summary().dropped_late, 1);
        assert_eq!(eng.summary().edges_processed, 1);
    }
}
