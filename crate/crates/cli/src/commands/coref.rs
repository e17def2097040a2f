use std::path::{Path, PathBuf};

use calibtk::coref::{antecedent_distributions, coref_pairwise_calibration, pairwise_marginals, sample_clustering};
use calibtk::events::document_seed;
use calibtk::formats::{parse_coref_documents, write_clustering_jsonl, write_pairwise_jsonl, CorefInput};
use clap::Args;

use super::write_report;
use crate::error::{in_file, read_text, write_text, CliError, CliResult};
use crate::{BinningArgs, ReportOutputs};

/// Default number of clustering samples per document.
pub const DEFAULT_COREF_SAMPLES: usize = 1000;

#[derive(Args)]
pub struct SampleArgs {
    /// One document per line: `{"doc_id", "num_mentions", "score_rows"}`.
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, default_value_t = DEFAULT_COREF_SAMPLES)]
    pub num_samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Pairwise coreference marginals, one record per mention pair.
    #[arg(long)]
    pub pairwise: Option<PathBuf>,
    /// Every sampled clustering, one record per document and sample.
    #[arg(long)]
    pub clusterings: Option<PathBuf>,
}

#[derive(Args)]
pub struct CalibArgs {
    /// Documents with `gold_entities`.
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, default_value_t = DEFAULT_COREF_SAMPLES)]
    pub num_samples: usize,
    #[command(flatten)]
    pub binning: BinningArgs,
    #[command(flatten)]
    pub outputs: ReportOutputs,
}

fn load(path: &Path) -> CliResult<Vec<CorefInput<f64>>> {
    let text = read_text(path)?;
    in_file(path, parse_coref_documents(&text))
}

pub fn sample(args: SampleArgs) -> CliResult<()> {
    if args.pairwise.is_none() && args.clusterings.is_none() {
        return Err(CliError::usage("nothing to do: pass --pairwise and/or --clusterings"));
    }
    let docs = load(&args.scores)?;
    let mut pairwise = String::new();
    let mut clusterings = String::new();
    for d in &docs {
        let dists = antecedent_distributions(&d.doc)?;
        let seed = document_seed(args.seed, &d.doc_id);
        if args.pairwise.is_some() {
            let m = pairwise_marginals(&dists, args.num_samples, seed)?;
            write_pairwise_jsonl(&mut pairwise, &d.doc_id, &m);
        }
        if args.clusterings.is_some() {
            for s in 0..args.num_samples as u64 {
                write_clustering_jsonl(&mut clusterings, &d.doc_id, s, &sample_clustering(&dists, seed, s));
            }
        }
    }
    if let Some(path) = &args.pairwise {
        write_text(path, &pairwise)?;
    }
    if let Some(path) = &args.clusterings {
        write_text(path, &clusterings)?;
    }
    Ok(())
}

pub fn calib(args: CalibArgs) -> CliResult<()> {
    let docs = load(&args.scores)?;
    // Sampling already runs in parallel within each document.
    let marginals = docs
        .iter()
        .map(|d| {
            let dists = antecedent_distributions(&d.doc)?;
            pairwise_marginals(&dists, args.num_samples, document_seed(args.binning.seed, &d.doc_id))
        })
        .collect::<calibtk::Result<Vec<_>>>()?;
    let gold: Vec<_> = docs.iter().map(|d| d.gold.clone()).collect();
    let b = args.binning;
    let ev = coref_pairwise_calibration(&marginals, &gold, b.bin_size, b.samples, b.seed)
        .map_err(|source| CliError::Data { path: args.scores.clone(), source })?;
    write_report(&ev, &args.outputs, "pairwise coreference")
}
