//! Brute-force reference matcher.
//!
//! Enumerates every injective assignment of query edges to stream edges by
//! backtracking over the query edges in a fixed order. It sees the whole
//! stream (no retention, no eviction) and applies only the window rule, so
//! it shares nothing with the incremental engine and is used to check it.
//! Desk scale only.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::engine::{EmittedEdge, EmittedMatch};
use crate::graph::{EdgeKey, TimeInterval, Timestamp, TimestampedEdge};
use crate::query::QueryGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} has {size} elements, oracle budget is {limit}")]
    Oversize {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("prefix index {k} out of range 1..={len}")]
    IndexOutOfRange { k: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_stream_edges: usize,
    pub max_query_edges: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_stream_edges: 500,
            max_query_edges: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleMatch {
    pub vertex_bindings: BTreeMap<String, String>,
    pub edge_bindings: BTreeMap<usize, EdgeKey>,
    pub interval: TimeInterval,
}

pub type OracleResult = BTreeSet<OracleMatch>;

struct Enumerator<'a> {
    stream: &'a [TimestampedEdge],
    q: &'a QueryGraph,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    vertex_of: Vec<Option<&'a str>>,
    owner: HashMap<&'a str, usize>,
    edge_of: Vec<Option<usize>>,
    used: Vec<bool>,
    out: OracleResult,
}

impl<'a> Enumerator<'a> {
    fn bind_end(&mut self, qv: usize, data: &'a str) -> Option<bool> {
        match self.vertex_of[qv] {
            Some(d) if d == data => Some(false),
            Some(_) => None,
            None => {
                if self.owner.contains_key(data) {
                    return None;
                }
                self.vertex_of[qv] = Some(data);
                self.owner.insert(data, qv);
                Some(true)
            }
        }
    }

    fn unbind_end(&mut self, qv: usize) {
        if let Some(d) = self.vertex_of[qv].take() {
            self.owner.remove(d);
        }
    }

    fn run(&mut self, level: usize, lo: Timestamp, hi: Timestamp) {
        if level == self.order.len() {
            self.record(lo, hi);
            return;
        }
        let qe = self.order[level];
        let (qs, qt) = (self.q.edge(qe).source, self.q.edge(qe).target);
        for ci in 0..self.candidates[qe].len() {
            let i = self.candidates[qe][ci];
            let e = &self.stream[i];
            if self.used[i] {
                continue;
            }
            let (nlo, nhi) = if level == 0 {
                (e.timestamp, e.timestamp)
            } else {
                (lo.min(e.timestamp), hi.max(e.timestamp))
            };
            if nhi - nlo >= self.q.window_ms() {
                continue;
            }
            let Some(new_s) = self.bind_end(qs, &e.source.id) else {
                continue;
            };
            let Some(new_t) = self.bind_end(qt, &e.target.id) else {
                if new_s {
                    self.unbind_end(qs);
                }
                continue;
            };
            self.used[i] = true;
            self.edge_of[qe] = Some(i);
            self.run(level + 1, nlo, nhi);
            self.edge_of[qe] = None;
            self.used[i] = false;
            if new_t {
                self.unbind_end(qt);
            }
            if new_s {
                self.unbind_end(qs);
            }
        }
    }

    fn record(&mut self, lo: Timestamp, hi: Timestamp) {
        let vertex_bindings = self
            .q
            .vertices()
            .iter()
            .zip(&self.vertex_of)
            .map(|(v, d)| (v.qid.clone(), d.expect("all vertices bound").to_owned()))
            .collect();
        let edge_bindings = self
            .edge_of
            .iter()
            .enumerate()
            .map(|(qe, i)| (qe, self.stream[i.expect("all edges bound")].edge_key))
            .collect();
        self.out.insert(OracleMatch {
            vertex_bindings,
            edge_bindings,
            interval: TimeInterval::new(lo, hi),
        });
    }
}

/// Query edges reordered so every edge after the first shares a vertex
/// with an earlier one.
fn connected_order(q: &QueryGraph) -> Vec<usize> {
    let mut order = vec![0];
    let mut seen = vec![false; q.vertices().len()];
    seen[q.edge(0).source] = true;
    seen[q.edge(0).target] = true;
    while order.len() < q.edges().len() {
        let next = (0..q.edges().len())
            .find(|e| !order.contains(e) && (seen[q.edge(*e).source] || seen[q.edge(*e).target]))
            .expect("query is connected");
        seen[q.edge(next).source] = true;
        seen[q.edge(next).target] = true;
        order.push(next);
    }
    order
}

pub fn oracle_windowed_matches(
    stream: &[TimestampedEdge],
    q: &QueryGraph,
) -> Result<OracleResult, OracleError> {
    oracle_windowed_matches_with_budget(stream, q, OracleBudget::default())
}

/// Every match of `q` in the full `stream` with span below the window.
pub fn oracle_windowed_matches_with_budget(
    stream: &[TimestampedEdge],
    q: &QueryGraph,
    budget: OracleBudget,
) -> Result<OracleResult, OracleError> {
    if stream.len() > budget.max_stream_edges {
        return Err(OracleError::Oversize {
            what: "stream",
            size: stream.len(),
            limit: budget.max_stream_edges,
        });
    }
    if q.edges().len() > budget.max_query_edges {
        return Err(OracleError::Oversize {
            what: "query",
            size: q.edges().len(),
            limit: budget.max_query_edges,
        });
    }
    let candidates = q
        .edges()
        .iter()
        .map(|qe| {
            let (s, t) = (
                &q.vertex(qe.source).type_label,
                &q.vertex(qe.target).type_label,
            );
            stream
                .iter()
                .enumerate()
                .filter(|(_, e)| {
                    e.source.id != e.target.id
                        && qe.edge_type.accepts(&e.edge_type)
                        && s.accepts(&e.source.type_label)
                        && t.accepts(&e.target.type_label)
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut en = Enumerator {
        stream,
        q,
        order: connected_order(q),
        candidates,
        vertex_of: vec![None; q.vertices().len()],
        owner: HashMap::new(),
        edge_of: vec![None; q.edges().len()],
        used: vec![false; stream.len()],
        out: OracleResult::new(),
    };
    en.run(0, 0, 0);
    Ok(en.out)
}

/// Matches present after the first `k` edges but not after the first `k - 1`.
pub fn oracle_incremental_diff(
    stream: &[TimestampedEdge],
    q: &QueryGraph,
    k: usize,
) -> Result<OracleResult, OracleError> {
    if k == 0 || k > stream.len() {
        return Err(OracleError::IndexOutOfRange {
            k,
            len: stream.len(),
        });
    }
    let now = oracle_windowed_matches(&stream[..k], q)?;
    let before = oracle_windowed_matches(&stream[..k - 1], q)?;
    Ok(now.difference(&before).cloned().collect())
}

/// Renders oracle matches in the engine's emission format, canonically sorted.
pub fn to_emissions(
    stream: &[TimestampedEdge],
    q: &QueryGraph,
    result: &OracleResult,
) -> Vec<EmittedMatch> {
    let by_key: HashMap<EdgeKey, &TimestampedEdge> =
        stream.iter().map(|e| (e.edge_key, e)).collect();
    let mut out: Vec<EmittedMatch> = result
        .iter()
        .map(|m| {
            let mut edges: Vec<EmittedEdge> = m
                .edge_bindings
                .iter()
                .map(|(&qeid, key)| {
                    let e = by_key[key];
                    EmittedEdge {
                        src: e.source.id.clone(),
                        dst: e.target.id.clone(),
                        etype: e.edge_type.clone(),
                        t: e.timestamp,
                        edge_key: e.edge_key,
                        qeid,
                    }
                })
                .collect();
            edges.sort_by_key(|e| (e.t, e.edge_key));
            EmittedMatch {
                query: q.name().to_owned(),
                completed_at: m.interval.latest,
                bindings: m.vertex_bindings.clone(),
                edges,
            }
        })
        .collect();
    EmittedMatch::sort_canonical(&mut out);
    out
}
