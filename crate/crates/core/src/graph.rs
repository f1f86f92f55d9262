//! Dynamic multi-relational graph built from a timestamped edge stream.
//!
//! Edges are directed, typed and may be parallel. The graph keeps only the
//! edges that can still take part in a within-window match: anything older
//! than `watermark - retention_window` is logically gone the moment the
//! watermark passes it, and is physically removed by a periodic sweep.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Milliseconds since epoch.
pub type Timestamp = i64;

/// Default number of insertions between physical eviction sweeps.
pub const DEFAULT_SWEEP_INTERVAL: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex `{vertex}` is already typed `{existing}`, edge declares it as `{declared}`")]
    TypeConflict {
        vertex: String,
        existing: String,
        declared: String,
    },
    #[error("vertex id must be non-empty")]
    EmptyVertexId,
    #[error("negative timestamp {0}")]
    NegativeTimestamp(Timestamp),
    #[error("edge key {key} is not greater than previously ingested key {last}")]
    EdgeKeyOrder { key: EdgeKey, last: EdgeKey },
    #[error("interval of an empty edge set is undefined")]
    EmptyInterval,
}

/// Unique identifier of a stream record: its ordinal position in the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeKey(pub u64);

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    pub id: String,
    pub type_label: String,
}

impl VertexRef {
    pub fn new(id: impl Into<String>, type_label: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            type_label: type_label.into(),
        }
    }
}

/// One record of the edge stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimestampedEdge {
    pub source: VertexRef,
    pub target: VertexRef,
    pub edge_type: String,
    pub timestamp: Timestamp,
    pub attributes: BTreeMap<String, String>,
    pub edge_key: EdgeKey,
}

impl TimestampedEdge {
    pub fn new(
        edge_key: u64,
        source: VertexRef,
        target: VertexRef,
        edge_type: impl Into<String>,
        timestamp: Timestamp,
    ) -> Self {
        Self {
            source,
            target,
            edge_type: edge_type.into(),
            timestamp,
            attributes: BTreeMap::new(),
            edge_key: EdgeKey(edge_key),
        }
    }

    pub fn with_attribute(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.source.id.is_empty() || self.target.id.is_empty() {
            return Err(GraphError::EmptyVertexId);
        }
        if self.timestamp < 0 {
            return Err(GraphError::NegativeTimestamp(self.timestamp));
        }
        if self.source.id == self.target.id && self.source.type_label != self.target.type_label {
            return Err(GraphError::TypeConflict {
                vertex: self.source.id.clone(),
                existing: self.source.type_label.clone(),
                declared: self.target.type_label.clone(),
            });
        }
        Ok(())
    }
}

/// Closed interval between the earliest and latest edge of a subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimeInterval {
    pub earliest: Timestamp,
    pub latest: Timestamp,
}

impl TimeInterval {
    pub fn new(earliest: Timestamp, latest: Timestamp) -> Self {
        assert!(
            earliest <= latest,
            "interval must satisfy earliest <= latest"
        );
        Self { earliest, latest }
    }

    pub fn point(t: Timestamp) -> Self {
        Self {
            earliest: t,
            latest: t,
        }
    }

    pub fn span(&self) -> i64 {
        self.latest - self.earliest
    }

    pub fn include(&mut self, t: Timestamp) {
        self.earliest = self.earliest.min(t);
        self.latest = self.latest.max(t);
    }

    pub fn merge(&self, other: &TimeInterval) -> TimeInterval {
        TimeInterval {
            earliest: self.earliest.min(other.earliest),
            latest: self.latest.max(other.latest),
        }
    }

    /// Smallest interval covering every timestamp, or `None` for no timestamps.
    pub fn covering(timestamps: impl IntoIterator<Item = Timestamp>) -> Option<TimeInterval> {
        let mut it = timestamps.into_iter();
        let mut interval = TimeInterval::point(it.next()?);
        for t in it {
            interval.include(t);
        }
        Some(interval)
    }
}

/// Interval between the earliest and latest edge of a non-empty edge set.
pub fn interval_of<'a>(
    edges: impl IntoIterator<Item = &'a TimestampedEdge>,
) -> Result<TimeInterval, GraphError> {
    TimeInterval::covering(edges.into_iter().map(|e| e.timestamp)).ok_or(GraphError::EmptyInterval)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Accepted,
    DroppedLate,
}

/// Interned label (vertex or edge type).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

#[derive(Debug, Default, Clone)]
pub struct SymbolTable {
    index: HashMap<String, Symbol>,
    names: Vec<String>,
}

impl SymbolTable {
    pub fn intern(&mut self, name: &str) -> Symbol {
        if let Some(&sym) = self.index.get(name) {
            return sym;
        }
        let sym = Symbol(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), sym);
        sym
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn resolve(&self, sym: Symbol) -> &str {
        &self.names[sym.0 as usize]
    }
}

/// Dense index of a data vertex inside one [`DynamicGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

/// Adjacency entry; mirrors the stored edge so local search never touches
/// the edge map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacent {
    pub timestamp: Timestamp,
    pub key: EdgeKey,
    pub other: VertexId,
    pub edge_type: Symbol,
}

impl Adjacent {
    fn order(&self) -> (Timestamp, EdgeKey) {
        (self.timestamp, self.key)
    }
}

#[derive(Debug, Clone)]
struct VertexEntry {
    id: String,
    type_label: Symbol,
    out: VecDeque<Adjacent>,
    inc: VecDeque<Adjacent>,
}

#[derive(Debug, Clone)]
struct StoredEdge {
    edge: TimestampedEdge,
    src: VertexId,
    dst: VertexId,
    edge_type: Symbol,
}

fn insert_sorted(list: &mut VecDeque<Adjacent>, adj: Adjacent) {
    // Near-monotone streams append at the back almost always.
    if list.back().is_none_or(|last| last.order() <= adj.order()) {
        list.push_back(adj);
    } else {
        let at = list.partition_point(|a| a.order() < adj.order());
        list.insert(at, adj);
    }
}

fn remove_entry(list: &mut VecDeque<Adjacent>, key: EdgeKey) {
    if list.front().map(|a| a.key) == Some(key) {
        list.pop_front();
    } else if let Some(pos) = list.iter().position(|a| a.key == key) {
        list.remove(pos);
    }
}

/// Windowed adjacency store of recent edges.
#[derive(Debug, Clone)]
pub struct DynamicGraph {
    symbols: SymbolTable,
    vertex_index: HashMap<String, VertexId>,
    vertices: Vec<VertexEntry>,
    edges: HashMap<EdgeKey, StoredEdge>,
    by_time: BTreeSet<(Timestamp, EdgeKey)>,
    watermark: Option<Timestamp>,
    retention: Option<i64>,
    last_key: Option<EdgeKey>,
    sweep_interval: usize,
    since_sweep: usize,
    dropped_late: u64,
    evicted: u64,
}

impl Default for DynamicGraph {
    fn default() -> Self {
        Self::unbounded()
    }
}

impl DynamicGraph {
    /// Graph that never evicts.
    pub fn unbounded() -> Self {
        Self {
            symbols: SymbolTable::default(),
            vertex_index: HashMap::new(),
            vertices: Vec::new(),
            edges: HashMap::new(),
            by_time: BTreeSet::new(),
            watermark: None,
            retention: None,
            last_key: None,
            sweep_interval: DEFAULT_SWEEP_INTERVAL,
            since_sweep: 0,
            dropped_late: 0,
            evicted: 0,
        }
    }

    pub fn with_retention(retention_ms: i64) -> Self {
        let mut g = Self::unbounded();
        g.set_retention(Some(retention_ms));
        g
    }

    /// `None` means infinite retention.
    pub fn set_retention(&mut self, retention_ms: Option<i64>) {
        self.retention = retention_ms;
    }

    pub fn set_sweep_interval(&mut self, every: usize) {
        self.sweep_interval = every.max(1);
    }

    pub fn retention(&self) -> Option<i64> {
        self.retention
    }

    pub fn watermark(&self) -> Option<Timestamp> {
        self.watermark
    }

    /// Edges strictly older than this are no longer part of the graph.
    pub fn cutoff(&self) -> Timestamp {
        match (self.watermark, self.retention) {
            (Some(w), Some(r)) => w.saturating_sub(r),
            _ => Timestamp::MIN,
        }
    }

    pub fn dropped_late(&self) -> u64 {
        self.dropped_late
    }

    pub fn evicted(&self) -> u64 {
        self.evicted
    }

    /// Physically stored edges, including ones awaiting the next sweep.
    pub fn stored_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn symbols_mut(&mut self) -> &mut SymbolTable {
        &mut self.symbols
    }

    pub fn insert_edge(&mut self, edge: TimestampedEdge) -> Result<InsertOutcome, GraphError> {
        edge.validate()?;
        if let Some(last) = self.last_key {
            if edge.edge_key <= last {
                return Err(GraphError::EdgeKeyOrder {
                    key: edge.edge_key,
                    last,
                });
            }
        }
        self.check_type(&edge.source)?;
        self.check_type(&edge.target)?;
        self.last_key = Some(edge.edge_key);

        if edge.timestamp < self.cutoff() {
            self.dropped_late += 1;
            return Ok(InsertOutcome::DroppedLate);
        }

        let src = self.vertex(&edge.source);
        let dst = self.vertex(&edge.target);
        let edge_type = self.symbols.intern(&edge.edge_type);
        let (timestamp, key) = (edge.timestamp, edge.edge_key);
        insert_sorted(
            &mut self.vertices[src.0 as usize].out,
            Adjacent {
                timestamp,
                key,
                other: dst,
                edge_type,
            },
        );
        insert_sorted(
            &mut self.vertices[dst.0 as usize].inc,
            Adjacent {
                timestamp,
                key,
                other: src,
                edge_type,
            },
        );
        self.by_time.insert((timestamp, key));
        self.edges.insert(
            key,
            StoredEdge {
                edge,
                src,
                dst,
                edge_type,
            },
        );
        self.watermark = Some(self.watermark.map_or(timestamp, |w| w.max(timestamp)));

        self.since_sweep += 1;
        if self.since_sweep >= self.sweep_interval {
            self.sweep();
        }
        Ok(InsertOutcome::Accepted)
    }

    fn check_type(&self, v: &VertexRef) -> Result<(), GraphError> {
        if let Some(&id) = self.vertex_index.get(&v.id) {
            let existing = self
                .symbols
                .resolve(self.vertices[id.0 as usize].type_label);
            if existing != v.type_label {
                return Err(GraphError::TypeConflict {
                    vertex: v.id.clone(),
                    existing: existing.to_owned(),
                    declared: v.type_label.clone(),
                });
            }
        }
        Ok(())
    }

    fn vertex(&mut self, v: &VertexRef) -> VertexId {
        if let Some(&id) = self.vertex_index.get(&v.id) {
            return id;
        }
        let id = VertexId(self.vertices.len() as u32);
        let type_label = self.symbols.intern(&v.type_label);
        self.vertices.push(VertexEntry {
            id: v.id.clone(),
            type_label,
            out: VecDeque::new(),
            inc: VecDeque::new(),
        });
        self.vertex_index.insert(v.id.clone(), id);
        id
    }

    /// Removes every edge older than the cutoff. Returns the number removed.
    pub fn sweep(&mut self) -> usize {
        self.since_sweep = 0;
        let cutoff = self.cutoff();
        let mut removed = 0;
        while let Some(&(t, key)) = self.by_time.first() {
            if t >= cutoff {
                break;
            }
            self.by_time.pop_first();
            if let Some(stored) = self.edges.remove(&key) {
                remove_entry(&mut self.vertices[stored.src.0 as usize].out, key);
                remove_entry(&mut self.vertices[stored.dst.0 as usize].inc, key);
                removed += 1;
            }
        }
        self.evicted += removed as u64;
        removed
    }

    pub fn vertex_id(&self, id: &str) -> Option<VertexId> {
        self.vertex_index.get(id).copied()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize].id
    }

    pub fn vertex_type(&self, v: VertexId) -> Symbol {
        self.vertices[v.0 as usize].type_label
    }

    /// Type label a vertex id is bound to, if it has been seen.
    pub fn vertex_label(&self, id: &str) -> Option<&str> {
        self.vertex_id(id)
            .map(|v| self.symbols.resolve(self.vertex_type(v)))
    }

    /// Raw outgoing adjacency (may include edges below the cutoff until the
    /// next sweep; callers filter with [`DynamicGraph::cutoff`]).
    pub fn out_adjacency(&self, v: VertexId) -> &VecDeque<Adjacent> {
        &self.vertices[v.0 as usize].out
    }

    pub fn in_adjacency(&self, v: VertexId) -> &VecDeque<Adjacent> {
        &self.vertices[v.0 as usize].inc
    }

    pub fn edge(&self, key: EdgeKey) -> Option<&TimestampedEdge> {
        self.edges
            .get(&key)
            .filter(|s| s.edge.timestamp >= self.cutoff())
            .map(|s| &s.edge)
    }

    /// Interned view of a stored edge: `(src, dst, edge_type, timestamp)`.
    pub fn edge_entry(&self, key: EdgeKey) -> Option<(VertexId, VertexId, Symbol, Timestamp)> {
        self.edges
            .get(&key)
            .map(|s| (s.src, s.dst, s.edge_type, s.edge.timestamp))
    }

    /// Endpoints of a retained edge.
    pub fn edge_endpoints(&self, key: EdgeKey) -> Option<(VertexId, VertexId)> {
        self.edges.get(&key).map(|s| (s.src, s.dst))
    }

    /// Retained edges incident to `vertex_id`, ordered by timestamp then
    /// edge key. Unknown vertices have an empty neighborhood.
    pub fn neighborhood(
        &self,
        vertex_id: &str,
        direction: Direction,
        edge_type: Option<&str>,
    ) -> Vec<&TimestampedEdge> {
        let Some(v) = self.vertex_id(vertex_id) else {
            return Vec::new();
        };
        let wanted = match edge_type {
            Some(name) => match self.symbols.get(name) {
                Some(sym) => Some(sym),
                None => return Vec::new(),
            },
            None => None,
        };
        let cutoff = self.cutoff();
        let keep = |a: &&Adjacent| a.timestamp >= cutoff && wanted.is_none_or(|t| t == a.edge_type);
        let entry = &self.vertices[v.0 as usize];
        let mut picked: Vec<&Adjacent> = match direction {
            Direction::Out => entry.out.iter().filter(keep).collect(),
            Direction::In => entry.inc.iter().filter(keep).collect(),
            Direction::Both => {
                let mut all: Vec<&Adjacent> = entry.out.iter().filter(keep).collect();
                // a self-loop sits in both lists but is one edge
                all.extend(entry.inc.iter().filter(keep).filter(|a| a.other != v));
                all.sort_by_key(|a| a.order());
                all
            }
        };
        picked.dedup_by_key(|a| a.key);
        picked
            .into_iter()
            .filter_map(|a| self.edges.get(&a.key).map(|s| &s.edge))
            .collect()
    }

    /// Total (in + out) degree over retained edges.
    pub fn degree(&self, vertex_id: &str) -> usize {
        let Some(v) = self.vertex_id(vertex_id) else {
            return 0;
        };
        let cutoff = self.cutoff();
        let entry = &self.vertices[v.0 as usize];
        entry.out.iter().filter(|a| a.timestamp >= cutoff).count()
            + entry.inc.iter().filter(|a| a.timestamp >= cutoff).count()
    }

    /// All retained edges in (timestamp, key) order.
    pub fn edges(&self) -> impl Iterator<Item = &TimestampedEdge> + '_ {
        let cutoff = self.cutoff();
        self.by_time
            .range((cutoff, EdgeKey(0))..)
            .filter_map(|(_, key)| self.edges.get(key).map(|s| &s.edge))
    }

    /// Checks that in- and out-indices list the same edge set and are sorted.
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut out_keys = BTreeSet::new();
        let mut in_keys = BTreeSet::new();
        for (i, v) in self.vertices.iter().enumerate() {
            for list in [&v.out, &v.inc] {
                if !list
                    .iter()
                    .zip(list.iter().skip(1))
                    .all(|(a, b)| a.order() <= b.order())
                {
                    return Err(format!("adjacency of `{}` is not time ordered", v.id));
                }
            }
            for a in &v.out {
                let s = self.edges.get(&a.key).ok_or("dangling out entry")?;
                if s.src.0 as usize != i || s.dst != a.other {
                    return Err(format!("out entry {} disagrees with edge store", a.key));
                }
                out_keys.insert(a.key);
            }
            for a in &v.inc {
                let s = self.edges.get(&a.key).ok_or("dangling in entry")?;
                if s.dst.0 as usize != i || s.src != a.other {
                    return Err(format!("in entry {} disagrees with edge store", a.key));
                }
                in_keys.insert(a.key);
            }
        }
        let stored: BTreeSet<EdgeKey> = self.edges.keys().copied().collect();
        if out_keys != in_keys || out_keys != stored {
            return Err("in/out indices disagree".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(key: u64, src: &str, dst: &str, etype: &str, t: Timestamp) -> TimestampedEdge {
        TimestampedEdge::new(
            key,
            VertexRef::new(src, "Host"),
            VertexRef::new(dst, "Host"),
            etype,
            t,
        )
    }

    #[test]
    fn first_edge_sets_watermark() {
        let mut g = DynamicGraph::with_retention(100);
        assert_eq!(
            g.insert_edge(edge(0, "a", "b", "x", 10)),
            Ok(InsertOutcome::Accepted)
        );
        assert_eq!(g.watermark(), Some(10));
    }

    #[test]
    fn late_edges_dropped_at_retention_boundary() {
        let mut g = DynamicGraph::with_retention(100);
        g.insert_edge(edge(0, "a", "b", "x", 1000)).unwrap();
        assert_eq!(
            g.insert_edge(edge(1, "a", "b", "x", 850)),
            Ok(InsertOutcome::DroppedLate)
        );
        assert_eq!(g.dropped_late(), 1);
        assert_eq!(
            g.insert_edge(edge(2, "a", "b", "x", 900)),
            Ok(InsertOutcome::Accepted)
        );
        assert_eq!(g.neighborhood("a", Direction::Out, None).len(), 2);
    }

    #[test]
    fn type_conflict_is_rejected_without_side_effects() {
        let mut g = DynamicGraph::unbounded();
        g.insert_edge(edge(0, "a", "b", "x", 1)).unwrap();
        let bad = TimestampedEdge::new(
            1,
            VertexRef::new("c", "Host"),
            VertexRef::new("a", "User"),
            "x",
            2,
        );
        assert!(matches!(
            g.insert_edge(bad),
            Err(GraphError::TypeConflict { .. })
        ));
        assert_eq!(g.vertex_id("c"), None);
        assert_eq!(g.stored_edge_count(), 1);
    }

    #[test]
    fn edge_keys_must_increase() {
        let mut g = DynamicGraph::unbounded();
        g.insert_edge(edge(3, "a", "b", "x", 1)).unwrap();
        assert!(matches!(
            g.insert_edge(edge(3, "a", "b", "x", 2)),
            Err(GraphError::EdgeKeyOrder { .. })
        ));
    }

    #[test]
    fn invalid_records() {
        let mut g = DynamicGraph::unbounded();
        assert_eq!(
            g.insert_edge(edge(0, "", "b", "x", 1)),
            Err(GraphError::EmptyVertexId)
        );
        assert_eq!(
            g.insert_edge(edge(1, "a", "b", "x", -1)),
            Err(GraphError::NegativeTimestamp(-1))
        );
    }

    #[test]
    fn neighborhood_ordering_and_filter() {
        let mut g = DynamicGraph::unbounded();
        assert!(g.neighborhood("v", Direction::Both, None).is_empty());
        g.insert_edge(edge(0, "v", "a", "login", 3)).unwrap();
        g.insert_edge(edge(1, "b", "v", "login", 5)).unwrap();
        g.insert_edge(edge(2, "v", "c", "connects", 7)).unwrap();
        let both: Vec<_> = g
            .neighborhood("v", Direction::Both, None)
            .iter()
            .map(|e| e.timestamp)
            .collect();
        assert_eq!(both, vec![3, 5, 7]);
        let out: Vec<_> = g
            .neighborhood("v", Direction::Out, Some("connects"))
            .iter()
            .map(|e| e.timestamp)
            .collect();
        assert_eq!(out, vec![7]);
        assert!(g
            .neighborhood("v", Direction::Out, Some("unknown"))
            .is_empty());
    }

    #[test]
    fn ties_broken_by_edge_key() {
        let mut g = DynamicGraph::unbounded();
        g.insert_edge(edge(0, "v", "a", "x", 5)).unwrap();
        g.insert_edge(edge(1, "b", "v", "x", 5)).unwrap();
        g.insert_edge(edge(2, "v", "c", "x", 4)).unwrap();
        let keys: Vec<_> = g
            .neighborhood("v", Direction::Both, None)
            .iter()
            .map(|e| e.edge_key.0)
            .collect();
        assert_eq!(keys, vec![2, 0, 1]);
    }

    #[test]
    fn self_loop_listed_once() {
        let mut g = DynamicGraph::unbounded();
        g.insert_edge(edge(0, "v", "v", "x", 1)).unwrap();
        assert_eq!(g.neighborhood("v", Direction::Both, None).len(), 1);
        assert_eq!(g.degree("v"), 2);
    }

    #[test]
    fn sweep_evicts_old_edges() {
        let mut g = DynamicGraph::with_retention(10);
        g.set_sweep_interval(1000);
        for i in 0..50 {
            g.insert_edge(edge(i, "a", &format!("n{}", i % 5), "x", i as i64))
                .unwrap();
        }
        // lazily hidden before the sweep
        assert_eq!(g.neighborhood("a", Direction::Out, None).len(), 11);
        assert_eq!(g.stored_edge_count(), 50);
        assert_eq!(g.sweep(), 39);
        assert_eq!(g.stored_edge_count(), 11);
        assert!(g.edges().all(|e| e.timestamp >= 49 - 10));
        g.check_consistency().unwrap();
    }

    #[test]
    fn interval_examples() {
        let es: Vec<_> = [3, 7, 5]
            .iter()
            .enumerate()
            .map(|(i, &t)| edge(i as u64, "a", "b", "x", t))
            .collect();
        let iv = interval_of(&es).unwrap();
        assert_eq!((iv.earliest, iv.latest, iv.span()), (3, 7, 4));
        assert_eq!(
            interval_of(&[edge(0, "a", "b", "x", 42)]).unwrap().span(),
            0
        );
        let zeros = [edge(0, "a", "b", "x", 0), edge(1, "a", "b", "x", 0)];
        assert_eq!(interval_of(&zeros).unwrap(), TimeInterval::new(0, 0));
        assert_eq!(interval_of(&[]), Err(GraphError::EmptyInterval));
    }
}
