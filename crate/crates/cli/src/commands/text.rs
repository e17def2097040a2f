use std::path::{Path, PathBuf};

use calibtk::calib::evaluate;
use calibtk::formats::{parse_binary_documents, report_value};
use calibtk::seq::{
    evaluate_binary, nb_posterior, train_bernoulli_nb, train_logistic_regression, BinaryDocument, Vocabulary,
};
use clap::Args;
use serde_json::json;

use crate::error::{self, emit, in_file, read_text, CliResult};
use crate::BinningArgs;

#[derive(Args)]
pub struct ExperimentArgs {
    /// Training documents: JSON-lines `{"features": [..], "label": 0|1}`.
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Naive Bayes smoothing pseudocount.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Logistic regression L2 strength.
    #[arg(long, default_value_t = 1.0)]
    pub l2: f64,
    #[command(flatten)]
    pub binning: BinningArgs,
    /// Result JSON; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load(path: &Path) -> CliResult<Vec<(Vec<String>, bool)>> {
    let text = read_text(path)?;
    in_file(path, parse_binary_documents(&text))
}

pub fn experiment(args: ExperimentArgs) -> CliResult<()> {
    let train_raw = load(&args.train)?;
    let test_raw = load(&args.test)?;
    let vocab = Vocabulary::from_documents(train_raw.iter().map(|(f, _)| f.as_slice()));
    let encode =
        |raw: &[(Vec<String>, bool)]| -> Vec<BinaryDocument> { raw.iter().map(|(f, y)| vocab.encode(f, *y)).collect() };
    let train = encode(&train_raw);
    let test = encode(&test_raw);
    let gold: Vec<bool> = test.iter().map(|d| d.label).collect();

    let nb = train_bernoulli_nb(&train, vocab.len(), args.alpha)?;
    let lr = train_logistic_regression(&train, vocab.len(), args.l2)?;
    if !lr.converged {
        error::warn(format!(
            "logistic regression stopped after {} iterations with gradient norm {:e}",
            lr.iterations, lr.gradient_norm
        ));
    }

    let b = args.binning;
    let mut models = serde_json::Map::new();
    let nb_q: Vec<f64> = test.iter().map(|d| nb_posterior(&nb, &d.features)).collect();
    let lr_q: Vec<f64> = test.iter().map(|d| lr.model.predict(&d.features)).collect();
    for (name, q) in [("naive_bayes", nb_q), ("logistic_regression", lr_q)] {
        let pairs: Vec<_> = q.iter().zip(&gold).map(|(&q, &y)| calibtk::calib::PredictionPair { q, y }).collect();
        let ev = evaluate(&pairs, b.bin_size, b.samples, b.seed)?;
        if ev.low_confidence {
            error::warn(format!("{name}: {} test documents is below the bin size {}", ev.n, b.bin_size));
        }
        let metrics = evaluate_binary(&q, &gold)?;
        models.insert(name.to_owned(), json!({ "metrics": metrics, "calibration": report_value(&ev) }));
    }
    let out = json!({
        "num_train": train.len(),
        "num_test": test.len(),
        "num_features": vocab.len(),
        "alpha": args.alpha,
        "l2": args.l2,
        "lr_iterations": lr.iterations,
        "lr_converged": lr.converged,
        "models": models,
    });
    let mut s = serde_json::to_string_pretty(&out).expect("result serializes");
    s.push('\n');
    emit(args.out.as_deref(), &s)
}
