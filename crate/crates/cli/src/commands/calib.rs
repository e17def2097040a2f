use std::path::{Path, PathBuf};

use calibtk::calib::{
    bin_stats, decomposition_by_unique_q, evaluate, fixed_width_binning, reliability_curve, sort_and_bin, CurvePoint,
    PredictionPair,
};
use calibtk::formats::{curve_csv, decomposition_json, fixed_bins_csv, parse_pairs};
use calibtk::svg::reliability_svg;
use clap::Args;

use super::write_report;
use crate::error::{emit, in_file, read_text, write_text, CliError, CliResult};
use crate::{BinningArgs, ReportOutputs};

#[derive(Args)]
pub struct EvalArgs {
    /// Prediction pairs: JSON-lines `{"q": .., "y": 0|1}` or `q,y` CSV.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub binning: BinningArgs,
    #[command(flatten)]
    pub outputs: ReportOutputs,
}

#[derive(Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Use evenly spaced bins of this width instead of adaptive bins.
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, default_value_t = calibtk::calib::DEFAULT_BIN_SIZE)]
    pub bin_size: usize,
    /// Curve CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_pairs(path: &Path) -> CliResult<Vec<PredictionPair<f64>>> {
    let text = read_text(path)?;
    in_file(path, parse_pairs(&text))
}

fn title(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn eval(args: EvalArgs) -> CliResult<()> {
    let pairs = load_pairs(&args.input)?;
    let b = args.binning;
    let ev = evaluate(&pairs, b.bin_size, b.samples, b.seed)?;
    write_report(&ev, &args.outputs, &title(&args.input))
}

pub fn curve(args: CurveArgs) -> CliResult<()> {
    let pairs = load_pairs(&args.input)?;
    let points: Vec<CurvePoint<f64>> = match args.width {
        Some(w) => {
            let bins = fixed_width_binning(&pairs, w)?;
            let points = reliability_curve(&bins.iter().map(|b| b.summary).collect::<Vec<_>>())?;
            emit(args.out.as_deref(), &fixed_bins_csv(&bins))?;
            points
        }
        None => {
            if args.bin_size == 0 {
                return Err(CliError::usage("--bin-size must be positive"));
            }
            let (sorted, binning) = sort_and_bin(&pairs, args.bin_size)?;
            let points = reliability_curve(&bin_stats(&binning, &sorted))?;
            emit(args.out.as_deref(), &curve_csv(&points))?;
            points
        }
    };
    if let Some(path) = &args.svg {
        write_text(path, &reliability_svg(&points, &title(&args.input)))?;
    }
    Ok(())
}

pub fn decompose(args: DecomposeArgs) -> CliResult<()> {
    let pairs = load_pairs(&args.input)?;
    let d = decomposition_by_unique_q(&pairs)?;
    emit(args.out.as_deref(), &decomposition_json(&d, pairs.len()))
}
