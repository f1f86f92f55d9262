//! Newline-delimited JSON edge streams and emission files.
//!
//! One edge per line: `{"t": 12, "src": "h1", "src_type": "Host", "dst": "h2",
//! "dst_type": "Host", "etype": "connects", "attrs": {"port": "445"}}`.
//! `attrs` is optional. The edge key of a record is its 0-based line number;
//! blank lines are skipped but still counted.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::EmittedMatch;
use crate::graph::{EdgeKey, Timestamp, TimestampedEdge, VertexRef};

#[derive(Debug, Error)]
pub enum StreamError {
    /// `line` is 1-based.
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("reading stream: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    t: Timestamp,
    src: String,
    src_type: String,
    dst: String,
    dst_type: String,
    etype: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    attrs: BTreeMap<String, String>,
}

/// Parses one stream line; `ordinal` is the 0-based line number.
pub fn parse_edge_line(line: &str, ordinal: usize) -> Result<TimestampedEdge, StreamError> {
    let malformed = |message: String| StreamError::Malformed {
        line: ordinal + 1,
        message,
    };
    let r: EdgeRecord = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
    if r.t < 0 {
        return Err(malformed(format!("negative timestamp {}", r.t)));
    }
    if r.src.is_empty() || r.dst.is_empty() {
        return Err(malformed("empty vertex id".into()));
    }
    Ok(TimestampedEdge {
        source: VertexRef::new(r.src, r.src_type),
        target: VertexRef::new(r.dst, r.dst_type),
        edge_type: r.etype,
        timestamp: r.t,
        attributes: r.attrs,
        edge_key: EdgeKey(ordinal as u64),
    })
}

pub fn edge_to_line(edge: &TimestampedEdge) -> String {
    let r = EdgeRecord {
        t: edge.timestamp,
        src: edge.source.id.clone(),
        src_type: edge.source.type_label.clone(),
        dst: edge.target.id.clone(),
        dst_type: edge.target.type_label.clone(),
        etype: edge.edge_type.clone(),
        attrs: edge.attributes.clone(),
    };
    serde_json::to_string(&r).expect("edge serializes")
}

/// Lazily parsed edges of a stream.
pub struct EdgeReader<R> {
    lines: io::Lines<R>,
    ordinal: usize,
}

impl<R: BufRead> Iterator for EdgeReader<R> {
    type Item = Result<TimestampedEdge, StreamError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(e.into())),
            };
            let ordinal = self.ordinal;
            self.ordinal += 1;
            if line.trim().is_empty() {
                continue;
            }
            return Some(parse_edge_line(&line, ordinal));
        }
    }
}

pub fn read_edges<R: BufRead>(reader: R) -> EdgeReader<R> {
    EdgeReader {
        lines: reader.lines(),
        ordinal: 0,
    }
}

pub fn open_edges(path: &Path) -> io::Result<EdgeReader<BufReader<File>>> {
    Ok(read_edges(BufReader::new(File::open(path)?)))
}

pub fn load_edges(path: &Path) -> Result<Vec<TimestampedEdge>, StreamError> {
    open_edges(path)?.collect()
}

/// Writes edges one per line. Edge keys are not written; they are implied
/// by line position on read-back.
pub fn write_edges<W: Write>(mut w: W, edges: &[TimestampedEdge]) -> io::Result<()> {
    for e in edges {
        writeln!(w, "{}", edge_to_line(e))?;
    }
    w.flush()
}

pub fn write_emissions<W: Write>(mut w: W, matches: &[EmittedMatch]) -> io::Result<()> {
    for m in matches {
        writeln!(w, "{}", m.to_json_line())?;
    }
    w.flush()
}

/// Parses an emissions file, skipping a trailing partial-output marker.
pub fn read_emissions(text: &str) -> Result<Vec<EmittedMatch>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.contains("\"partial_output\""))
        .map(serde_json::from_str)
        .collect()
}
