//! Continuous subgraph pattern detection over timestamped edge streams.
//!
//! Queries are small typed multigraphs with a time window. Each query is
//! decomposed into a left-deep join tree of small subgraphs chosen by
//! selectivity, and every arriving edge is matched locally against the
//! leaves and joined upward. A match is reported once, when its last edge
//! arrives, provided all of its edges fit strictly inside the window.
//!
//! ```
//! use sjstream::{Engine, EngineConfig, GraphStatistics, TimestampedEdge, VertexRef, parse_query};
//!
//! let q = parse_query(r#"{"name": "chain", "window_ms": 10,
//!     "vertices": [{"qid": "a", "type": "*"}, {"qid": "b", "type": "*"}, {"qid": "c", "type": "*"}],
//!     "edges": [{"src": "a", "dst": "b", "etype": "x"}, {"src": "b", "dst": "c", "etype": "y"}]}"#).unwrap();
//! let mut engine = Engine::new(EngineConfig::default());
//! engine.register_query(q, &GraphStatistics::new()).unwrap();
//! let h = |id: &str| VertexRef::new(id, "Host");
//! assert!(engine.process_edge(TimestampedEdge::new(0, h("h1"), h("h2"), "x", 1)).unwrap().is_empty());
//! let found = engine.process_edge(TimestampedEdge::new(1, h("h2"), h("h3"), "y", 4)).unwrap();
//! assert_eq!(found.len(), 1);
//! ```

pub mod cli;
pub mod engine;
pub mod graph;
pub mod oracle;
pub mod planner;
pub mod query;
pub mod sjtree;
pub mod stats;
pub mod stream;
pub mod synth;

pub use engine::{EmittedMatch, Engine, EngineConfig, EngineError};
pub use graph::{
    DynamicGraph, EdgeKey, GraphError, TimeInterval, Timestamp, TimestampedEdge, VertexRef,
};
pub use oracle::{oracle_incremental_diff, oracle_windowed_matches, OracleMatch};
pub use planner::{decompose, DecompositionPlan};
pub use query::{parse_query, Label, QueryGraph};
pub use sjtree::{Match, SjTree};
pub use stats::GraphStatistics;
