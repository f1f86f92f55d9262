//! File-level commands behind the `sjstream` binary.
//!
//! Exit codes: 0 success, 1 runtime error, 2 input validation error.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{EmittedMatch, Engine, EngineConfig, QuerySummary};
use crate::graph::{DynamicGraph, TimestampedEdge};
use crate::oracle::{oracle_windowed_matches, to_emissions};
use crate::planner::{decompose, DEFAULT_MAX_LEAF_SIZE};
use crate::query::{parse_query, QueryGraph};
use crate::sjtree::TreeDump;
use crate::stats::GraphStatistics;
use crate::stream::{open_edges, write_emissions, StreamError};
use crate::synth::{generate, GeneratorConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

fn input(context: impl std::fmt::Display, err: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{context}: {err}"))
}

fn runtime(context: impl std::fmt::Display, err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{context}: {err}"))
}

/// Where edges come from.
#[derive(Debug, Clone, PartialEq)]
pub enum StreamSource {
    File(PathBuf),
    /// Generated with [`crate::synth::generate`], planting the run's queries.
    Synthetic {
        seed: u64,
        edges: usize,
    },
}

impl StreamSource {
    fn edges(
        &self,
        plant: &[QueryGraph],
    ) -> Result<Box<dyn Iterator<Item = Result<TimestampedEdge, StreamError>>>, CliError> {
        match self {
            StreamSource::File(path) => {
                let reader = open_edges(path).map_err(|e| input(path.display(), e))?;
                Ok(Box::new(reader))
            }
            StreamSource::Synthetic { seed, edges } => {
                let config = GeneratorConfig {
                    edges: *edges,
                    ..GeneratorConfig::default()
                };
                Ok(Box::new(
                    generate(&config, plant, *seed).into_iter().map(Ok),
                ))
            }
        }
    }

    fn collect(&self, plant: &[QueryGraph]) -> Result<Vec<TimestampedEdge>, CliError> {
        self.edges(plant)?
            .collect::<Result<_, _>>()
            .map_err(|e| input(self.describe(), e))
    }

    fn describe(&self) -> String {
        match self {
            StreamSource::File(p) => p.display().to_string(),
            StreamSource::Synthetic { seed, .. } => format!("synthetic stream (seed {seed})"),
        }
    }
}

pub fn load_query(path: &Path) -> Result<QueryGraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| input(path.display(), e))?;
    parse_query(&text).map_err(|e| input(path.display(), e))
}

/// Reads a stats file, or falls back to empty statistics with a warning.
pub fn load_stats(path: Option<&Path>, warn: &mut dyn Write) -> Result<GraphStatistics, CliError> {
    let missing = |warn: &mut dyn Write, why: String| {
        let _ = writeln!(warn, "warning: {why}; planning with cold-start frequencies");
        Ok(GraphStatistics::new())
    };
    let Some(path) = path else {
        return missing(warn, "no statistics given".into());
    };
    match fs::read_to_string(path) {
        Ok(text) => GraphStatistics::from_json(&text).map_err(|e| input(path.display(), e)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            missing(warn, format!("{} not found", path.display()))
        }
        Err(e) => Err(input(path.display(), e)),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| runtime(path.display(), e))
}

/// Full pass with infinite retention; writes the statistics file.
pub fn cmd_stats(source: &StreamSource, out: &Path) -> Result<GraphStatistics, CliError> {
    let mut graph = DynamicGraph::unbounded();
    let mut stats = GraphStatistics::new();
    for edge in source.edges(&[])? {
        let edge = edge.map_err(|e| input(source.describe(), e))?;
        let line = edge.edge_key.0 + 1;
        graph
            .insert_edge(edge.clone())
            .map_err(|e| input(format!("{} line {line}", source.describe()), e))?;
        stats.update(&graph, &edge);
    }
    let mut w = create(out)?;
    writeln!(w, "{}", stats.to_json())
        .and_then(|_| w.flush())
        .map_err(|e| runtime(out.display(), e))?;
    Ok(stats)
}

pub fn cmd_plan(
    query_path: &Path,
    stats_path: Option<&Path>,
    max_leaf_size: usize,
    out: &mut dyn Write,
    warn: &mut dyn Write,
) -> Result<(), CliError> {
    let q = load_query(query_path)?;
    let stats = load_stats(stats_path, warn)?;
    let plan = decompose(&q, &stats, max_leaf_size).map_err(|e| input(query_path.display(), e))?;
    write!(out, "{}", plan.render(&q)).map_err(|e| runtime("stdout", e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub queries: Vec<PathBuf>,
    pub stream: StreamSource,
    pub out: PathBuf,
    pub stats: Option<PathBuf>,
    pub max_leaf_size: usize,
    pub expiry_stride: u64,
    pub window_override: Option<i64>,
}

impl RunConfig {
    pub fn new(queries: Vec<PathBuf>, stream: StreamSource, out: PathBuf) -> Self {
        Self {
            queries,
            stream,
            out,
            stats: None,
            max_leaf_size: DEFAULT_MAX_LEAF_SIZE,
            expiry_stride: crate::engine::DEFAULT_EXPIRY_STRIDE,
            window_override: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.queries.is_empty() {
            return Err(CliError::Input("at least one --query is required".into()));
        }
        if !(1..=3).contains(&self.max_leaf_size) {
            return Err(CliError::Input(format!(
                "--max-leaf-size must be 1, 2 or 3, got {}",
                self.max_leaf_size
            )));
        }
        if self.expiry_stride == 0 {
            return Err(CliError::Input("--expiry-stride must be positive".into()));
        }
        Ok(())
    }

    fn load_queries(&self) -> Result<Vec<QueryGraph>, CliError> {
        self.queries
            .iter()
            .map(|p| {
                let q = load_query(p)?;
                match self.window_override {
                    Some(w) => q.with_window(w).map_err(|e| input("--window-ms", e)),
                    None => Ok(q),
                }
            })
            .collect()
    }

    fn engine(&self, queries: Vec<QueryGraph>, warn: &mut dyn Write) -> Result<Engine, CliError> {
        let stats = load_stats(self.stats.as_deref(), warn)?;
        let mut engine = Engine::new(EngineConfig {
            max_leaf_size: self.max_leaf_size,
            expiry_stride: self.expiry_stride,
            ..EngineConfig::default()
        });
        for q in queries {
            let name = q.name().to_owned();
            engine
                .register_query(q, &stats)
                .map_err(|e| input(format!("query `{name}`"), e))?;
        }
        Ok(engine)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub edges_processed: u64,
    pub dropped_late: u64,
    pub emitted: u64,
    pub wall_ms: f64,
    pub edges_per_sec: f64,
    pub queries: Vec<QuerySummary>,
}

fn drive(
    engine: &mut Engine,
    source: &StreamSource,
    plant: &[QueryGraph],
    mut sink: impl FnMut(&EmittedMatch) -> io::Result<()>,
) -> Result<u64, CliError> {
    let mut emitted = 0;
    for edge in source.edges(plant)? {
        let edge = edge.map_err(|e| input(source.describe(), e))?;
        let line = edge.edge_key.0 + 1;
        let found = engine
            .process_edge(edge)
            .map_err(|e| input(format!("{} line {line}", source.describe()), e))?;
        for m in &found {
            sink(m).map_err(|e| runtime("writing emissions", e))?;
            emitted += 1;
        }
    }
    Ok(emitted)
}

/// Streams the source through every query, writing emissions as they occur.
/// On a stream error the output ends with a `partial_output` marker line.
pub fn cmd_run(config: &RunConfig, log: &mut dyn Write) -> Result<RunReport, CliError> {
    config.validate()?;
    let queries = config.load_queries()?;
    let mut engine = config.engine(queries.clone(), log)?;
    let mut w = create(&config.out)?;
    let started = Instant::now();
    let result = drive(&mut engine, &config.stream, &queries, |m| {
        writeln!(w, "{}", m.to_json_line())
    });
    if let Err(e) = &result {
        let marker = serde_json::json!({ "partial_output": true, "error": e.to_string() });
        let _ = writeln!(w, "{marker}");
    }
    w.flush().map_err(|e| runtime(config.out.display(), e))?;
    let emitted = result?;
    let wall = started.elapsed().as_secs_f64();
    let summary = engine.summary();
    let report = RunReport {
        edges_processed: summary.edges_processed,
        dropped_late: summary.dropped_late,
        emitted,
        wall_ms: wall * 1000.0,
        edges_per_sec: if wall > 0.0 {
            summary.edges_processed as f64 / wall
        } else {
            0.0
        },
        queries: summary.queries,
    };
    let _ = writeln!(
        log,
        "{}",
        serde_json::to_string(&report).expect("report serializes")
    );
    Ok(report)
}

/// Brute-force matches of one query, canonically sorted.
pub fn cmd_oracle(
    query_path: &Path,
    source: &StreamSource,
    out: &Path,
    window_override: Option<i64>,
) -> Result<Vec<EmittedMatch>, CliError> {
    let mut q = load_query(query_path)?;
    if let Some(w) = window_override {
        q = q.with_window(w).map_err(|e| input("--window-ms", e))?;
    }
    let plant = [q.clone()];
    let stream = source.collect(&plant)?;
    let result =
        oracle_windowed_matches(&stream, &q).map_err(|e| input(query_path.display(), e))?;
    let emitted = to_emissions(&stream, &q, &result);
    write_emissions(create(out)?, &emitted).map_err(|e| runtime(out.display(), e))?;
    Ok(emitted)
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryDump {
    pub query: String,
    pub tree: TreeDump,
}

/// Runs the stream, then prints per-node table sizes and counters as JSON.
pub fn cmd_dump_tree(
    config: &RunConfig,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<Vec<QueryDump>, CliError> {
    config.validate()?;
    let queries = config.load_queries()?;
    let mut engine = config.engine(queries.clone(), log)?;
    drive(&mut engine, &config.stream, &queries, |_| Ok(()))?;
    let dumps: Vec<QueryDump> = engine
        .dump_trees()
        .into_iter()
        .map(|(query, tree)| QueryDump { query, tree })
        .collect();
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&dumps).expect("dump serializes")
    )
    .map_err(|e| runtime("stdout", e))?;
    Ok(dumps)
}
