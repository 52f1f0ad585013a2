//! Command-line front end for the dsrec pipeline.
//!
//! Every subcommand is a thin wrapper over `dsrec-core`: it resolves paths
//! from flags or the TOML config (flags win), calls the library and writes
//! the artifacts. Output is deterministic for a fixed seed.

pub mod commands;
pub mod config;
pub mod error;
pub mod serve;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::PipelineConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "dsrec", version, about = "Dataset recommendation for seed publications")]
pub struct Cli {
    /// TOML pipeline configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice (overrides `lab.seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate and normalize publications and datasets, applying translations.
    Ingest(IngestArgs),
    /// Add vocabulary topics found in dataset titles.
    ExpandTopics(ExpandArgs),
    /// Build and persist the fielded index.
    Index(IndexArgs),
    /// Precompute a ranking per publication and write a TREC run.
    Recommend(RecommendArgs),
    /// Score runs against pseudo judgments built from candidate lists.
    Pretest(PretestArgs),
    /// Interleave two runs and simulate lab sessions.
    Simulate(SimulateArgs),
    /// Recompute a lab report from a session log.
    Report(ReportArgs),
    /// Serve precomputed recommendations over HTTP.
    Serve(ServeArgs),
    /// Write a seeded synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub publications: Option<PathBuf>,
    #[arg(long)]
    pub datasets: Option<PathBuf>,
    #[arg(long)]
    pub translations: Option<PathBuf>,
    /// Directory for the normalized corpus and the ingest report.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long)]
    pub publications: Option<PathBuf>,
    #[arg(long)]
    pub datasets: Option<PathBuf>,
    /// Expanded datasets (JSONL).
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the expansion report; stdout if absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long)]
    pub datasets: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long)]
    pub publications: Option<PathBuf>,
    #[arg(long)]
    pub clicks: Option<PathBuf>,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Write the BM25 baseline without click or embedding boosts.
    #[arg(long)]
    pub no_rerank: bool,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PretestArgs {
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    /// One or more run files; several produce a side-by-side table.
    #[arg(long = "run", required = true)]
    pub runs: Vec<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Also write the pseudo qrels in TREC format.
    #[arg(long)]
    pub qrels_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Experimental run.
    #[arg(long)]
    pub run_a: PathBuf,
    /// Baseline run.
    #[arg(long)]
    pub run_b: PathBuf,
    #[arg(long)]
    pub name_a: Option<String>,
    #[arg(long)]
    pub name_b: Option<String>,
    #[arg(long)]
    pub sessions: Option<u64>,
    #[arg(long)]
    pub page_size: Option<usize>,
    /// Session log (JSONL).
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Report (JSON).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub log: PathBuf,
    /// Impressions per session: `rows` (rows shown) or a fixed number.
    #[arg(long, default_value = "rows")]
    pub impressions: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub run: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub publications: usize,
    #[arg(long, default_value_t = 200)]
    pub datasets: usize,
}

/// Loads the config, applies global overrides and dispatches.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.lab.seed = seed;
    }
    config.validate()?;
    match cli.command {
        Command::Ingest(a) => commands::ingest(&config, &a, out),
        Command::ExpandTopics(a) => commands::expand(&config, &a, out),
        Command::Index(a) => commands::index(&config, &a, out),
        Command::Recommend(a) => commands::recommend(&config, &a, out),
        Command::Pretest(a) => commands::pretest(&config, &a, out),
        Command::Simulate(a) => commands::simulate(&config, &a, out),
        Command::Report(a) => commands::report(&config, &a, out),
        Command::Serve(a) => serve::serve(&config, &a, out),
        Command::Synth(a) => commands::synth(&config, &a, out),
    }
}
