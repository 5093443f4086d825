//! `dyson-gap`: exact verification of weighted indices, Dyson-type
//! inequalities, Siegel-lemma sections and gap-principle bookkeeping.
//!
//! Every report is JSON with `"schema": "dyson-gap/1"`. Exit status: 0 when
//! every check holds, 1 when a mathematical check fails, 2 on input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "dyson-gap", version, about = "Exact Dyson lemma, Siegel lemma and gap-principle checks")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Progress notes on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weighted index of a polynomial at a point.
    Index(IndexArgs),
    /// Tabulate V(a).
    Vcurve(VcurveArgs),
    /// Dyson inequality for a divisor and a point configuration.
    Dyson(DysonArgs),
    /// Strip fibers from a divisor and check the index-shift identity.
    Strip(DysonArgs),
    /// Small integer polynomial with prescribed index at the points.
    Siegel(SiegelArgs),
    /// Re-check a candidate polynomial against a Siegel problem.
    Verify(VerifyArgs),
    /// Cone cover of lattice points, with the finiteness partition when A1, A2 are given.
    Cover(CoverArgs),
    /// Vojta predicate on a pair of lattice points.
    Vojta(VojtaArgs),
    /// Explicit-constant thresholds, and the assembled inequality for one pair.
    Chain(ChainArgs),
    /// Index-bound chain for one parameter set.
    Lemma61(Lemma61Args),
    /// Seeded random corpus.
    Corpus(CorpusArgs),
    /// siegel -> index -> dyson -> lemma61 on one dataset.
    Pipeline(PipelineArgs),
    /// Lattice commands grouped.
    #[command(subcommand)]
    Gap(GapCommand),
}

#[derive(Subcommand, Debug)]
pub enum GapCommand {
    Cover(CoverArgs),
    Vojta(VojtaArgs),
    Chain(ChainArgs),
    Lemma61(Lemma61Args),
}

#[derive(Args, Debug)]
pub struct IndexArgs {
    #[arg(long)]
    pub poly: PathBuf,
    /// `p,q` with rational entries.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, default_value = "1,1")]
    pub weight: String,
}

#[derive(Args, Debug)]
pub struct VcurveArgs {
    #[arg(long, default_value = "1/8")]
    pub step: String,
    #[arg(long, default_value = "5/2")]
    pub upto: String,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum DysonMode {
    /// General form with V(I).
    #[value(alias = "general")]
    Thm51,
    /// No-fiber form with I^2/2.
    #[value(alias = "no-fiber")]
    Thm52,
    /// Fiber stripping and the no-fiber form on the remainder.
    Strip,
}

#[derive(Args, Debug)]
pub struct DysonArgs {
    /// Polynomial JSON; its `bidegree` field designates (d1, d2).
    #[arg(long)]
    pub divisor: PathBuf,
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub weight: String,
    #[arg(long, value_enum, default_value = "thm51")]
    pub mode: DysonMode,
}

#[derive(Args, Debug)]
pub struct SiegelArgs {
    #[arg(long)]
    pub bidegree: String,
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub tau: String,
    /// Defaults to the bidegree.
    #[arg(long)]
    pub weight: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Polynomial JSON, or a `siegel` report.
    #[arg(long)]
    pub poly: PathBuf,
    #[command(flatten)]
    pub problem: SiegelArgs,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    /// Gram matrix, or a full lattice `{"gram":..., "points":...}`.
    #[arg(long)]
    pub gram: PathBuf,
    /// `{"label": [coords...]}`, replacing points in the Gram file.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// cos^2 of the half-angle; defaults to the certified bound for 20°.
    #[arg(long)]
    pub half_angle_cos_sq: Option<String>,
    #[arg(long)]
    pub a1: Option<String>,
    #[arg(long)]
    pub a2: Option<String>,
}

#[derive(Args, Debug)]
pub struct VojtaArgs {
    #[arg(long)]
    pub gram: PathBuf,
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Two labels or zero-based positions, `i,j`.
    #[arg(long)]
    pub pair: String,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long, default_value = "0")]
    pub c0: String,
    #[arg(long)]
    pub normsq1: Option<String>,
    #[arg(long)]
    pub normsq2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub pairing: Option<String>,
    /// Delta values for the main term of the height (with --normsq and --pairing).
    #[arg(long)]
    pub deltas: Option<String>,
    /// Caller-supplied bound on the error term of the height.
    #[arg(long, default_value = "0")]
    pub slack: String,
}

#[derive(Args, Debug)]
pub struct Lemma61Args {
    /// JSON with g, delta1, delta2, d, e1, e2, normsq1, normsq2.
    #[arg(long)]
    pub params: PathBuf,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum CorpusKind {
    Dyson,
    Siegel,
    Lemma61,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long, value_enum, default_value = "dyson")]
    pub kind: CorpusKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value = "6,6")]
    pub max_bidegree: String,
    /// Include per-case outcomes.
    #[arg(long)]
    pub full: bool,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub bidegree: String,
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub tau: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Outcome of a command: the report and whether every check held.
pub struct Outcome {
    pub command: &'static str,
    pub report: Value,
    pub holds: bool,
}

#[derive(Debug)]
pub struct InputError(pub String);

impl From<dyson_gap::Error> for InputError {
    fn from(e: dyson_gap::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError(e.to_string())
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("DYSON_GAP_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second initialization only fails if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = commands::run(&cli.command, cli.verbose);
    match result {
        Ok(out) => {
            let doc = json!({
                "schema": dyson_gap::json::SCHEMA,
                "command": out.command,
                "holds": out.holds,
                "report": out.report,
            });
            let text = serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n";
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("{}", error_doc(&format!("cannot write {}: {e}", path.display())));
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(InputError(msg)) => {
            eprintln!("{}", error_doc(&msg));
            ExitCode::from(2)
        }
    }
}

fn error_doc(msg: &str) -> String {
    serde_json::to_string(&json!({ "schema": dyson_gap::json::SCHEMA, "error": msg })).expect("string")
}
