use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sjstream::cli::{
    cmd_dump_tree, cmd_oracle, cmd_plan, cmd_run, cmd_stats, CliError, RunConfig, StreamSource,
};
use sjstream::engine::DEFAULT_EXPIRY_STRIDE;
use sjstream::planner::DEFAULT_MAX_LEAF_SIZE;

#[derive(Parser)]
#[command(
    name = "sjstream",
    version,
    about = "Continuous subgraph pattern detection over edge streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Newline-delimited JSON edge stream.
    #[arg(long, required_unless_present = "seed")]
    stream: Option<PathBuf>,
    /// Use a generated stream with this seed instead of --stream.
    #[arg(long, conflicts_with = "stream")]
    seed: Option<u64>,
    /// Length of the generated stream.
    #[arg(long, default_value_t = 300, requires = "seed")]
    synthetic_edges: usize,
}

impl Source {
    fn resolve(&self) -> StreamSource {
        match (&self.stream, self.seed) {
            (Some(p), _) => StreamSource::File(p.clone()),
            (None, Some(seed)) => StreamSource::Synthetic {
                seed,
                edges: self.synthetic_edges,
            },
            (None, None) => unreachable!("clap requires one of --stream/--seed"),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long = "query", required = true)]
    queries: Vec<PathBuf>,
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_LEAF_SIZE)]
    max_leaf_size: usize,
    #[arg(long, default_value_t = DEFAULT_EXPIRY_STRIDE)]
    expiry_stride: u64,
    /// Override every query's window.
    #[arg(long)]
    window_ms: Option<i64>,
}

impl RunArgs {
    fn config(&self, out: PathBuf) -> RunConfig {
        RunConfig {
            stats: self.stats.clone(),
            max_leaf_size: self.max_leaf_size,
            expiry_stride: self.expiry_stride,
            window_override: self.window_ms,
            ..RunConfig::new(self.queries.clone(), self.source.resolve(), out)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Collect edge-type, vertex-type, degree and triad statistics.
    Stats {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the join tree chosen for a query.
    Plan {
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_LEAF_SIZE)]
        max_leaf_size: usize,
    },
    /// Stream edges through the queries and write matches.
    Run {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate matches by brute force.
    Oracle {
        #[arg(long)]
        query: PathBuf,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        window_ms: Option<i64>,
    },
    /// Stream edges, then print per-node table sizes and counters.
    DumpTree {
        #[command(flatten)]
        run: RunArgs,
    },
}

fn dispatch(command: Command) -> Result<(), CliError> {
    let (mut stdout, mut stderr) = (io::stdout().lock(), io::stderr().lock());
    match command {
        Command::Stats { source, out } => cmd_stats(&source.resolve(), &out).map(drop),
        Command::Plan {
            query,
            stats,
            max_leaf_size,
        } => {
            if !(1..=3).contains(&max_leaf_size) {
                return Err(CliError::Input(format!(
                    "--max-leaf-size must be 1, 2 or 3, got {max_leaf_size}"
                )));
            }
            cmd_plan(
                &query,
                stats.as_deref(),
                max_leaf_size,
                &mut stdout,
                &mut stderr,
            )
        }
        Command::Run { run, out } => cmd_run(&run.config(out), &mut stderr).map(drop),
        Command::Oracle {
            query,
            source,
            out,
            window_ms,
        } => cmd_oracle(&query, &source.resolve(), &out, window_ms).map(drop),
        Command::DumpTree { run } => {
            cmd_dump_tree(&run.config(PathBuf::new()), &mut stdout, &mut stderr).map(drop)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
