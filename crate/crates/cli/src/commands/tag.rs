use std::path::{Path, PathBuf};

use calibtk::formats::{parse_lattice_batch, parse_tagged_corpus, report_value};
use calibtk::seq::{
    forward_backward, grid_select, per_label_calibration, train_hmm, CalibSettings, HmmModel, LabelCalibrationTable,
    TagLattice, TagPairExtractor, TaggedSentence,
};
use clap::Args;
use serde_json::{json, Value};

use crate::error::{self, emit, in_file, read_text, CliError, CliResult};
use crate::BinningArgs;

#[derive(Args)]
pub struct ExperimentArgs {
    /// Training corpus, one sentence per line of `word/TAG` tokens.
    #[arg(long, requires = "test")]
    pub train: Option<PathBuf>,
    /// Evaluation corpus in the same format.
    #[arg(long, requires = "train")]
    pub test: Option<PathBuf>,
    /// Held-out corpus for choosing the pseudocount.
    #[arg(long, requires = "train")]
    pub dev: Option<PathBuf>,
    /// Candidate HMM pseudocounts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub pseudocounts: Vec<f64>,
    /// Externally computed potentials with gold tags, instead of an HMM.
    #[arg(long, conflicts_with_all = ["train", "test", "dev"])]
    pub lattice: Option<PathBuf>,
    /// Number of most frequent gold labels to report.
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[command(flatten)]
    pub binning: BinningArgs,
    /// Result JSON; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Lattices with gold tag ids, ready for inference.
struct Prepared {
    tags: Vec<String>,
    items: Vec<(TagLattice<f64>, Vec<usize>)>,
}

fn load_corpus(path: &Path) -> CliResult<Vec<TaggedSentence>> {
    let text = read_text(path)?;
    in_file(path, parse_tagged_corpus(&text))
}

/// Encodes sentences for `model`, skipping any whose gold tags the model
/// never saw in training.
fn prepare(model: &HmmModel<f64>, corpus: &[TaggedSentence], what: &str) -> CliResult<Prepared> {
    let mut items = Vec::new();
    let mut skipped = 0;
    for sentence in corpus {
        let gold: Option<Vec<usize>> = sentence.iter().map(|(_, t)| model.tag_id(t)).collect();
        let Some(gold) = gold else {
            skipped += 1;
            continue;
        };
        let words: Vec<&str> = sentence.iter().map(|(w, _)| w.as_str()).collect();
        items.push((model.lattice(&words)?, gold));
    }
    if skipped > 0 {
        error::warn(format!("{what}: skipped {skipped} sentences with tags absent from training"));
    }
    Ok(Prepared { tags: model.tags.clone(), items })
}

fn tag_accuracy(p: &Prepared) -> CliResult<f64> {
    let (mut right, mut total) = (0usize, 0usize);
    for (lattice, gold) in &p.items {
        let predicted = forward_backward(lattice)?.max_marginal_tags();
        right += predicted.iter().zip(gold).filter(|(a, b)| a == b).count();
        total += gold.len();
    }
    if total == 0 {
        return Err(calibtk::Error::NoData.into());
    }
    Ok(right as f64 / total as f64)
}

fn table_json(table: &LabelCalibrationTable<f64>) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let mut v = report_value(&r.evaluation);
            v["label"] = json!(r.label);
            v["gold_count"] = json!(r.gold_count);
            v
        })
        .collect();
    json!({ "rows": rows, "average_calib_err": table.average, "average_weighting": "unweighted" })
}

pub fn experiment(args: ExperimentArgs) -> CliResult<()> {
    if args.top_k == 0 {
        return Err(CliError::usage("--top-k must be positive"));
    }
    let mut summary = serde_json::Map::new();
    let prepared = match (&args.lattice, &args.train, &args.test) {
        (Some(path), _, _) => {
            let text = read_text(path)?;
            let batch = in_file(path, parse_lattice_batch::<f64>(&text))?;
            let gold = batch.gold.ok_or_else(|| CliError::Data {
                path: path.clone(),
                source: calibtk::Error::Input("lattice file has no gold tags".into()),
            })?;
            summary.insert("source".into(), json!("lattice"));
            Prepared { tags: batch.tags, items: batch.lattices.into_iter().zip(gold).collect() }
        }
        (None, Some(train_path), Some(test_path)) => {
            let train = load_corpus(train_path)?;
            let test = load_corpus(test_path)?;
            let (alpha, model) = match &args.dev {
                Some(dev_path) => {
                    let dev = load_corpus(dev_path)?;
                    let (alpha, model, acc) = grid_select(
                        &args.pseudocounts,
                        |a| -> CliResult<(HmmModel<f64>, f64)> {
                            let m = train_hmm(&train, a)?;
                            let acc = tag_accuracy(&prepare(&m, &dev, "dev")?)?;
                            Ok((m, acc))
                        },
                        |(_, acc)| *acc,
                    )?;
                    summary.insert("dev_accuracy".into(), json!(acc));
                    (alpha, model.0)
                }
                None => {
                    if args.pseudocounts.len() != 1 {
                        return Err(CliError::usage(
                            "several --pseudocounts need a --dev corpus to choose between them",
                        ));
                    }
                    let a = args.pseudocounts[0];
                    (a, train_hmm(&train, a)?)
                }
            };
            summary.insert("source".into(), json!("hmm"));
            summary.insert("pseudocount".into(), json!(alpha));
            prepare(&model, &test, "test")?
        }
        _ => return Err(CliError::usage("pass either --train and --test, or --lattice")),
    };

    let mut extractor = TagPairExtractor::new(&prepared.tags);
    let (mut right, mut total) = (0usize, 0usize);
    for (lattice, gold) in &prepared.items {
        let m = forward_backward(lattice)?;
        right += m.max_marginal_tags().iter().zip(gold).filter(|(a, b)| a == b).count();
        total += gold.len();
        extractor.add_sentence(&m, gold)?;
    }
    if total == 0 {
        return Err(calibtk::Error::NoData.into());
    }
    let (single, pair) = extractor.into_parts();
    let b = args.binning;
    let settings = CalibSettings { bin_size: b.bin_size, num_samples: b.samples, seed: b.seed };
    let single_table = per_label_calibration(&single, args.top_k, settings)?;
    let pair_table = per_label_calibration(&pair, args.top_k, settings)?;
    for w in single_table.warnings.iter().chain(&pair_table.warnings) {
        error::warn(w);
    }

    summary.insert("num_sentences".into(), json!(prepared.items.len()));
    summary.insert("num_tokens".into(), json!(total));
    summary.insert("tag_accuracy".into(), json!(right as f64 / total as f64));
    summary.insert("single".into(), table_json(&single_table));
    summary.insert("pair".into(), table_json(&pair_table));
    let mut s = serde_json::to_string_pretty(&Value::Object(summary)).expect("result serializes");
    s.push('\n');
    emit(args.out.as_deref(), &s)
}
