//! `fastcd` command-line interface.
//!
//! Exit codes: 0 success, 2 input error (I/O, parse, length mismatch),
//! 3 domain error (isolated node, zero bandwidth, empty cluster, cluster
//! count out of range).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "fastcd", version, about = "Normalized-cut graph clustering by fast coordinate descent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a self-tuning k-NN similarity graph from CSV features.
    BuildGraph {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value_t = fastcd::build::DEFAULT_K_GRAPH)]
        k: usize,
        #[arg(long = "k-sigma", default_value_t = fastcd::build::DEFAULT_K_SIGMA)]
        k_sigma: usize,
        #[arg(long)]
        out: PathBuf,
        /// Treat the first CSV row as a header.
        #[arg(long)]
        skip_header: bool,
    },
    /// Cluster a graph into c clusters.
    Cluster {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        c: usize,
        /// `n2hi` or `file:<path>` with one 0-based label per line.
        #[arg(long, default_value = "n2hi")]
        init: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long = "max-outer", default_value_t = 100)]
        max_outer: usize,
        #[arg(long)]
        out: PathBuf,
        /// Per-sweep CSV trace (sweep, objective, moves).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Dump the initialization hierarchy as JSON.
        #[arg(long)]
        hierarchy: Option<PathBuf>,
    },
    /// Estimate the number of clusters from objective gaps.
    EstimateC {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two label files (ACC, NMI, ARI).
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Generate a block graph with uniform noise edges.
    GenBlocks {
        #[arg(long, default_value_t = 5)]
        blocks: usize,
        #[arg(long = "block-size", default_value_t = 100)]
        block_size: usize,
        #[arg(long = "noise-density", default_value_t = 0.02)]
        noise_density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Generate two concentric circles with uniform noise points.
    GenCircles {
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 50)]
        noise: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::BuildGraph {
            features,
            k,
            k_sigma,
            out,
            skip_header,
        } => commands::build_graph(&features, k, k_sigma, &out, skip_header),
        Command::Cluster {
            graph,
            c,
            init,
            tol,
            max_outer,
            out,
            trace,
            hierarchy,
        } => commands::cluster(&commands::ClusterArgs {
            graph,
            c,
            init,
            tol,
            max_outer,
            out,
            trace,
            hierarchy,
        }),
        Command::EstimateC { graph, min, max, out } => commands::estimate_c(&graph, min, max, &out),
        Command::Eval { pred, truth } => commands::eval(&pred, &truth),
        Command::GenBlocks {
            blocks,
            block_size,
            noise_density,
            seed,
            out,
            truth,
        } => commands::gen_blocks(blocks, block_size, noise_density, seed, &out, truth.as_deref()),
        Command::GenCircles {
            points,
            noise,
            seed,
            out,
            truth,
        } => commands::gen_circles(points, noise, seed, &out, truth.as_deref()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<fastcd::Error>() {
            return if e.is_input_error() { 2 } else { 3 };
        }
    }
    2
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
