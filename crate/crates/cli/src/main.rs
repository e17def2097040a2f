//! `calibtk`: calibration reports, tagging and coreference experiments, and
//! event-count aggregation from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input data, 3 invalid
//! parameters.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{calib, coref, events, tag, text};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "calibtk", version, about = "Calibration analysis for probabilistic models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Calibration of prediction-pair files.
    #[command(subcommand)]
    Calib(CalibCommand),
    /// Sequence tagging: HMM or external lattices, per-label calibration.
    #[command(subcommand)]
    Tag(TagCommand),
    /// Binary text classification: Naive Bayes versus logistic regression.
    #[command(subcommand)]
    Text(TextCommand),
    /// Coreference posterior sampling.
    #[command(subcommand)]
    Coref(CorefCommand),
    /// Event counts with posterior credible bands.
    #[command(subcommand)]
    Events(EventsCommand),
}

#[derive(Subcommand)]
enum CalibCommand {
    /// Adaptive-binning calibration error with a simulated interval.
    Eval(calib::EvalArgs),
    /// Reliability curve over adaptive or fixed-width bins.
    Curve(calib::CurveArgs),
    /// Brier score, cross-entropy and the calibration-refinement split.
    Decompose(calib::DecomposeArgs),
}

#[derive(Subcommand)]
enum TagCommand {
    Experiment(tag::ExperimentArgs),
}

#[derive(Subcommand)]
enum TextCommand {
    Experiment(text::ExperimentArgs),
}

#[derive(Subcommand)]
enum CorefCommand {
    /// Pairwise marginals and clustering samples.
    Sample(coref::SampleArgs),
    /// Calibration of sampled pairwise marginals against gold entities.
    Calib(coref::CalibArgs),
}

#[derive(Subcommand)]
enum EventsCommand {
    Aggregate(events::AggregateArgs),
}

/// Adaptive-binning settings shared by every calibration report.
#[derive(Args, Clone, Copy, Debug)]
pub struct BinningArgs {
    /// Target number of pairs per bin.
    #[arg(long, default_value_t = calibtk::calib::DEFAULT_BIN_SIZE)]
    pub bin_size: usize,
    /// Simulations for the calibration-error interval.
    #[arg(long, default_value_t = calibtk::calib::DEFAULT_CI_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Optional extra outputs of a calibration report.
#[derive(Args, Clone, Debug)]
pub struct ReportOutputs {
    /// Report JSON; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-bin statistics as CSV.
    #[arg(long)]
    pub bins_csv: Option<PathBuf>,
    /// Reliability diagram.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Calib(CalibCommand::Eval(a)) => calib::eval(a),
        Command::Calib(CalibCommand::Curve(a)) => calib::curve(a),
        Command::Calib(CalibCommand::Decompose(a)) => calib::decompose(a),
        Command::Tag(TagCommand::Experiment(a)) => tag::experiment(a),
        Command::Text(TextCommand::Experiment(a)) => text::experiment(a),
        Command::Coref(CorefCommand::Sample(a)) => coref::sample(a),
        Command::Coref(CorefCommand::Calib(a)) => coref::calib(a),
        Command::Events(EventsCommand::Aggregate(a)) => events::aggregate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
