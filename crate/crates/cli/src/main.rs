//! `oeuvre`: reconstruct researchers' publication oeuvres from a person
//! registry and two bibliographic corpora.
//!
//! Subcommands mirror the pipeline stages: `seed` builds the
//! high-precision seed, `expand` grows it via discipline clusters and
//! external identifiers, `evaluate` scores oeuvre variants against a gold
//! standard, `pipeline` chains all three, and `synth` generates a
//! synthetic world with exact ground truth for testing.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for I/O
//! failures, 4 for data validation failures.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::ConfigError;

#[derive(Parser)]
#[command(name = "oeuvre", version, about = "Oeuvre reconstruction pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the high-precision seed from the enabled strategies
    Seed(RunArgs),
    /// Expand the seed into oeuvre variants (reads <out>/seed.tsv)
    Expand(RunArgs),
    /// Score oeuvre variants in <out> against the gold standard
    Evaluate(RunArgs),
    /// Seed, expand, and evaluate in one run
    Pipeline(RunArgs),
    /// Generate a synthetic registry, corpora, gold standard, and ground truth
    Synth(RunArgs),
}

/// Flags shared by every subcommand; each one overrides the matching
/// config-file key.
#[derive(Args, Default)]
pub struct RunArgs {
    /// Key=value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Person registry (JSON lines)
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Corpus A publications (JSON lines)
    #[arg(long = "corpus-a")]
    pub corpus_a: Option<PathBuf>,
    /// Corpus B publications (JSON lines)
    #[arg(long = "corpus-b")]
    pub corpus_b: Option<PathBuf>,
    /// Organization alias map (JSON lines)
    #[arg(long)]
    pub aliases: Option<PathBuf>,
    /// Gold standard oeuvres (JSON lines)
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Comma-separated seed strategies (EM,RP,DL,AL,DAI)
    #[arg(long)]
    pub strategies: Option<String>,
    /// Comma-separated expansion methods (MESO,MICRO,XID)
    #[arg(long)]
    pub expansions: Option<String>,
    /// Evaluation window as Y1:Y2, inclusive
    #[arg(long)]
    pub window: Option<String>,
    /// Maximum distinct external ids before a person is discarded
    #[arg(long = "xid-cap")]
    pub xid_cap: Option<usize>,
    /// Common-name fraction for the RP strategy
    #[arg(long = "common-top-rp")]
    pub common_top_rp: Option<f64>,
    /// Common-name fraction for the DL strategy
    #[arg(long = "common-top-dl")]
    pub common_top_dl: Option<f64>,
    /// Common-name fraction for the AL strategy
    #[arg(long = "common-top-al")]
    pub common_top_al: Option<f64>,
    /// Require equal normalized journals when matching records
    #[arg(long = "match-require-journal")]
    pub match_require_journal: Option<bool>,
    /// Require equal years when matching records
    #[arg(long = "match-require-year")]
    pub match_require_year: Option<bool>,
    /// Require equal normalized first pages when matching records
    #[arg(long = "match-require-first-page")]
    pub match_require_first_page: Option<bool>,
    /// Maximum title edit distance as a fraction of the longer title
    #[arg(long = "match-title-ratio")]
    pub match_title_ratio: Option<f64>,
    /// Expand into any labeled publication instead of only clusters
    /// containing one of the person's seed publications
    #[arg(long = "no-anchor")]
    pub no_anchor: bool,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Generator seed (synth)
    #[arg(long = "rng-seed")]
    pub rng_seed: Option<u64>,
}

fn exit_code_for(error: &anyhow::Error) -> u8 {
    if error.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    if let Some(core) = error.downcast_ref::<oeuvre_core::Error>() {
        return match core {
            oeuvre_core::Error::Io { .. } => 3,
            oeuvre_core::Error::InfeasibleConfig(_) => 2,
            _ => 4,
        };
    }
    if error.downcast_ref::<std::io::Error>().is_some() {
        return 3;
    }
    4
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Seed(args) => config::resolve(args).and_then(|c| commands::run_seed(&c).map(|_| ())),
        Command::Expand(args) => {
            config::resolve(args).and_then(|c| commands::run_expand(&c).map(|_| ()))
        }
        Command::Evaluate(args) => {
            config::resolve(args).and_then(|c| commands::run_evaluate(&c).map(|_| ()))
        }
        Command::Pipeline(args) => config::resolve(args).and_then(|c| commands::run_pipeline(&c)),
        Command::Synth(args) => config::resolve(args).and_then(|c| commands::run_synth(&c)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            log::error!("{error:#}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}
