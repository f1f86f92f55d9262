//! Query graphs: typed vertices and directed typed edges plus a time window.
//!
//! Query files are JSON:
//!
//! ```json
//! {"name": "two-hop", "window_ms": 60000,
//!  "vertices": [{"qid": "a", "type": "Host"}, {"qid": "b", "type": "*"}],
//!  "edges": [{"src": "a", "dst": "b", "etype": "connects"}]}
//! ```
//!
//! `"*"` is a wildcard for a vertex `type` or an edge `etype`. Edges are
//! directed; an undirected relation is written as two edges, one per
//! direction. The `qeid` of an edge is its position in `edges`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::TimestampedEdge;

pub const WILDCARD: &str = "*";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("{field}: duplicate qid `{qid}`")]
    DuplicateQid { field: String, qid: String },
    #[error("{field}: endpoint `{qid}` is not a declared vertex")]
    DanglingEndpoint { field: String, qid: String },
    #[error("{field}: self-loop on `{qid}` is not supported")]
    SelfLoop { field: String, qid: String },
    #[error("pattern is disconnected: {unreachable:?} not reachable from `{from}`")]
    Disconnected {
        from: String,
        unreachable: Vec<String>,
    },
    #[error("window_ms: missing")]
    MissingWindow,
    #[error("window_ms: must be positive, got {0}")]
    NonPositiveWindow(i64),
    #[error("edges: query needs at least one edge")]
    NoEdges,
}

/// Type constraint on a query vertex or edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Any,
    Exact(String),
}

impl Label {
    pub fn parse(s: &str) -> Label {
        if s == WILDCARD {
            Label::Any
        } else {
            Label::Exact(s.to_owned())
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Label::Any => WILDCARD,
            Label::Exact(s) => s,
        }
    }

    pub fn accepts(&self, value: &str) -> bool {
        match self {
            Label::Any => true,
            Label::Exact(s) => s == value,
        }
    }

    pub fn is_wildcard(&self) -> bool {
        matches!(self, Label::Any)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryVertex {
    pub qid: String,
    pub type_label: Label,
}

/// Directed query edge; endpoints are indices into [`QueryGraph::vertices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryEdge {
    pub qeid: usize,
    pub source: usize,
    pub target: usize,
    pub edge_type: Label,
}

impl QueryEdge {
    pub fn touches(&self, vertex: usize) -> bool {
        self.source == vertex || self.target == vertex
    }
}

/// A validated, immutable pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGraph {
    name: String,
    vertices: Vec<QueryVertex>,
    edges: Vec<QueryEdge>,
    window_ms: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawVertex {
    qid: String,
    #[serde(rename = "type")]
    type_label: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawEdge {
    src: String,
    dst: String,
    etype: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawQuery {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_ms: Option<i64>,
    vertices: Vec<RawVertex>,
    edges: Vec<RawEdge>,
}

/// Parses and validates a query file.
pub fn parse_query(text: &str) -> Result<QueryGraph, QueryError> {
    let raw: RawQuery = serde_json::from_str(text).map_err(|e| QueryError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let window = raw.window_ms.ok_or(QueryError::MissingWindow)?;
    QueryGraph::new(
        raw.name,
        window,
        raw.vertices.into_iter().map(|v| (v.qid, v.type_label)),
        raw.edges.into_iter().map(|e| (e.src, e.dst, e.etype)),
    )
}

impl QueryGraph {
    /// Builds a query from `(qid, type)` vertices and `(src, dst, etype)`
    /// edges, checking every invariant.
    pub fn new<V, E>(
        name: impl Into<String>,
        window_ms: i64,
        vertices: V,
        edges: E,
    ) -> Result<QueryGraph, QueryError>
    where
        V: IntoIterator,
        V::Item: Into<(String, String)>,
        E: IntoIterator,
        E::Item: Into<(String, String, String)>,
    {
        if window_ms <= 0 {
            return Err(QueryError::NonPositiveWindow(window_ms));
        }
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut qvertices = Vec::new();
        for (i, v) in vertices.into_iter().enumerate() {
            let (qid, type_label) = v.into();
            let field = format!("vertices[{i}].qid");
            if qid.is_empty() {
                return Err(QueryError::Invalid {
                    field,
                    message: "qid must be non-empty".into(),
                });
            }
            if type_label.is_empty() {
                return Err(QueryError::Invalid {
                    field: format!("vertices[{i}].type"),
                    message: "type must be non-empty (use \"*\" for any)".into(),
                });
            }
            if index.insert(qid.clone(), i).is_some() {
                return Err(QueryError::DuplicateQid { field, qid });
            }
            qvertices.push(QueryVertex {
                qid,
                type_label: Label::parse(&type_label),
            });
        }
        let mut qedges = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            let (src, dst, etype) = e.into();
            let lookup = |qid: &str, end: &str| {
                index
                    .get(qid)
                    .copied()
                    .ok_or_else(|| QueryError::DanglingEndpoint {
                        field: format!("edges[{i}].{end}"),
                        qid: qid.to_owned(),
                    })
            };
            let source = lookup(&src, "src")?;
            let target = lookup(&dst, "dst")?;
            if source == target {
                return Err(QueryError::SelfLoop {
                    field: format!("edges[{i}]"),
                    qid: src,
                });
            }
            if etype.is_empty() {
                return Err(QueryError::Invalid {
                    field: format!("edges[{i}].etype"),
                    message: "etype must be non-empty (use \"*\" for any)".into(),
                });
            }
            qedges.push(QueryEdge {
                qeid: i,
                source,
                target,
                edge_type: Label::parse(&etype),
            });
        }
        if qedges.is_empty() {
            return Err(QueryError::NoEdges);
        }
        let q = QueryGraph {
            name: name.into(),
            vertices: qvertices,
            edges: qedges,
            window_ms,
        };
        q.check_connected()?;
        Ok(q)
    }

    fn check_connected(&self) -> Result<(), QueryError> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.source, e.target), (e.target, e.source)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        let unreachable: Vec<String> = (0..n)
            .filter(|&i| !seen[i])
            .map(|i| self.vertices[i].qid.clone())
            .collect();
        if unreachable.is_empty() {
            Ok(())
        } else {
            Err(QueryError::Disconnected {
                from: self.vertices[0].qid.clone(),
                unreachable,
            })
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn window_ms(&self) -> i64 {
        self.window_ms
    }

    pub fn vertices(&self) -> &[QueryVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[QueryEdge] {
        &self.edges
    }

    pub fn edge(&self, qeid: usize) -> &QueryEdge {
        &self.edges[qeid]
    }

    pub fn vertex(&self, index: usize) -> &QueryVertex {
        &self.vertices[index]
    }

    pub fn vertex_index(&self, qid: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.qid == qid)
    }

    /// Copy of this query with a different window.
    pub fn with_window(&self, window_ms: i64) -> Result<QueryGraph, QueryError> {
        if window_ms <= 0 {
            return Err(QueryError::NonPositiveWindow(window_ms));
        }
        Ok(QueryGraph {
            window_ms,
            ..self.clone()
        })
    }

    /// `(etype, src_type, dst_type)` of one edge, used for deterministic ordering.
    pub fn edge_signature(&self, qeid: usize) -> (&str, &str, &str) {
        let e = &self.edges[qeid];
        (
            e.edge_type.as_str(),
            self.vertices[e.source].type_label.as_str(),
            self.vertices[e.target].type_label.as_str(),
        )
    }

    /// Human-readable `(a:Host)-[connects]->(b:*)` rendering of an edge.
    pub fn describe_edge(&self, qeid: usize) -> String {
        let e = &self.edges[qeid];
        let (s, t) = (&self.vertices[e.source], &self.vertices[e.target]);
        format!(
            "({}:{})-[{}]->({}:{})",
            s.qid, s.type_label, e.edge_type, t.qid, t.type_label
        )
    }

    pub fn to_json(&self) -> String {
        let raw = RawQuery {
            name: self.name.clone(),
            window_ms: Some(self.window_ms),
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex {
                    qid: v.qid.clone(),
                    type_label: v.type_label.as_str().to_owned(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    src: self.vertices[e.source].qid.clone(),
                    dst: self.vertices[e.target].qid.clone(),
                    etype: e.edge_type.as_str().to_owned(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("query serializes")
    }
}

/// Whether `data_edge` can be bound to `query_edge`: edge type and both
/// endpoint types must be accepted, in the same direction.
pub fn edge_compatible(
    query_edge: &QueryEdge,
    q: &QueryGraph,
    data_edge: &TimestampedEdge,
) -> bool {
    query_edge.edge_type.accepts(&data_edge.edge_type)
        && q.vertices[query_edge.source]
            .type_label
            .accepts(&data_edge.source.type_label)
        && q.vertices[query_edge.target]
            .type_label
            .accepts(&data_edge.target.type_label)
}
