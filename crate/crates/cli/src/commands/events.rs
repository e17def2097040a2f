use std::path::PathBuf;

use calibtk::events::{
    high_uncertainty_documents, posterior_band, EventAnalysis, EventBand, Period, DEFAULT_EVENT_SAMPLES,
};
use calibtk::formats::{parse_event_corpus, write_event_row, write_flagged_jsonl, EVENTS_CSV_HEADER};
use calibtk::svg::band_svg;
use chrono::NaiveDate;
use clap::Args;

use crate::error::{self, emit, in_file, read_text, write_text, CliError, CliResult};

#[derive(Args)]
pub struct AggregateArgs {
    /// One document per line: `{"doc_id", "date", "mentions", "score_rows"}`.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Country code to count; repeat for several countries.
    #[arg(long = "country", required = true)]
    pub countries: Vec<String>,
    /// `month` or `quarter`.
    #[arg(long, default_value = "quarter")]
    pub period: String,
    #[arg(long, default_value_t = DEFAULT_EVENT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Band CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Time-series chart with one band per country.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// JSON-lines list of documents whose indicator mean lies in
    /// `[flag-lo, flag-hi]`.
    #[arg(long)]
    pub flagged: Option<PathBuf>,
    #[arg(long, default_value_t = 0.25)]
    pub flag_lo: f64,
    #[arg(long, default_value_t = 0.75)]
    pub flag_hi: f64,
}

const BAND_Z: f64 = 1.96;

type BandSeries = Vec<(NaiveDate, EventBand<f64>)>;

pub fn aggregate(args: AggregateArgs) -> CliResult<()> {
    let period: Period = args.period.parse()?;
    if !(0.0..=1.0).contains(&args.flag_lo) || !(args.flag_lo..=1.0).contains(&args.flag_hi) {
        return Err(CliError::usage("flag thresholds must satisfy 0 <= lo <= hi <= 1"));
    }
    let text = read_text(&args.corpus)?;
    let corpus = in_file(&args.corpus, parse_event_corpus::<f64>(&text))?;

    let mut countries = args.countries.clone();
    let mut seen = std::collections::HashSet::new();
    countries.retain(|c| seen.insert(c.clone()));

    let mut csv = format!("{EVENTS_CSV_HEADER}\n");
    let mut flagged = String::new();
    let mut series: Vec<(String, BandSeries)> = Vec::new();
    for country in &countries {
        let analysis = EventAnalysis::run(&corpus, country, args.samples, args.seed)
            .map_err(|source| CliError::Data { path: args.corpus.clone(), source })?;
        let mut points = Vec::new();
        for result in analysis.series(period) {
            let band = posterior_band(&result, BAND_Z)?;
            if band.negative_lower {
                error::warn(format!(
                    "{country} {}: lower band {:.4} is below zero (reported unclipped)",
                    result.period_start, band.ci_lo
                ));
            }
            write_event_row(&mut csv, country, result.period_start, &band);
            points.push((result.period_start, band));
        }
        write_flagged_jsonl(&mut flagged, &high_uncertainty_documents(&analysis, args.flag_lo, args.flag_hi));
        series.push((country.clone(), points));
    }

    emit(args.out.as_deref(), &csv)?;
    if let Some(path) = &args.flagged {
        write_text(path, &flagged)?;
    }
    if let Some(path) = &args.svg {
        let view: Vec<calibtk::svg::BandSeries<'_, f64>> =
            series.iter().map(|(c, pts)| (c.as_str(), pts.as_slice())).collect();
        write_text(path, &band_svg(&view, "event counts"))?;
    }
    Ok(())
}
