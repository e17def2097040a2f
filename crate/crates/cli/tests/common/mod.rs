//! Fixture files and process helpers shared by the integration tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use calibtk::calib::PredictionPair;
use calibtk::coref::synth::{self_consistent_gold, synthetic_document, ScoreLaw};
use calibtk::coref::{antecedent_distributions, CorefDocument};
use calibtk::events::AnnotatedDocument;
use calibtk::rng::stream_rng;
use calibtk::synth::{calibrated_pairs, synthetic_event_corpus, DuplicatedFeatureCorpus};
use chrono::NaiveDate;
use rand::Rng;
use serde_json::json;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_calibtk")
}

pub fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).current_dir(dir).args(args).output().expect("binary runs")
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("fixture written");
    path
}

pub fn pairs_jsonl(n: usize, seed: u64) -> String {
    let pairs: Vec<PredictionPair<f64>> = calibrated_pairs(n, 2.0, 2.0, seed);
    pairs.iter().map(|p| format!("{}\n", json!({ "q": p.q, "y": u8::from(p.y) }))).collect()
}

fn rows_json(doc: &CorefDocument<f64>) -> serde_json::Value {
    json!(doc.score_rows())
}

/// Coreference documents with gold entities drawn from the model itself.
pub fn coref_jsonl(num_docs: usize, seed: u64) -> String {
    let mut rng = stream_rng(seed, 0);
    (0..num_docs)
        .map(|d| {
            let n = rng.random_range(2..=7);
            let doc: CorefDocument<f64> = synthetic_document(n, ScoreLaw::default(), &mut rng);
            let gold = self_consistent_gold(&antecedent_distributions(&doc).unwrap(), seed + d as u64);
            format!(
                "{}\n",
                json!({
                    "doc_id": format!("doc{d}"),
                    "num_mentions": n,
                    "score_rows": rows_json(&doc),
                    "gold_entities": gold.entities,
                })
            )
        })
        .collect()
}

pub fn event_corpus(num_docs: usize, seed: u64) -> Vec<AnnotatedDocument<f64>> {
    let first = NaiveDate::from_ymd_opt(2003, 1, 1).unwrap();
    synthetic_event_corpus(num_docs, &["IRQ", "USA"], first, 365, seed)
}

pub fn events_jsonl(corpus: &[AnnotatedDocument<f64>]) -> String {
    corpus
        .iter()
        .map(|d| {
            format!(
                "{}\n",
                json!({
                    "doc_id": d.doc_id,
                    "date": d.date.to_string(),
                    "mentions": d.mentions,
                    "score_rows": rows_json(&d.coref),
                })
            )
        })
        .collect()
}

/// `word/TAG` sentences from a small first-order Markov source.
pub fn tagged_corpus(num_sentences: usize, seed: u64) -> String {
    const TAGS: [&str; 3] = ["DT", "NN", "VB"];
    let mut rng = stream_rng(seed, 0);
    let mut out = String::new();
    for _ in 0..num_sentences {
        let len = rng.random_range(2..=8);
        let mut tag = rng.random_range(0..TAGS.len());
        let tokens: Vec<String> = (0..len)
            .map(|_| {
                let word = format!("{}{}", TAGS[tag].to_lowercase(), rng.random_range(0..6));
                let token = format!("{word}/{}", TAGS[tag]);
                tag = if rng.random_bool(0.7) { (tag + 1) % TAGS.len() } else { rng.random_range(0..TAGS.len()) };
                token
            })
            .collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

pub fn text_jsonl(n: usize, seed: u64) -> String {
    DuplicatedFeatureCorpus::default()
        .generate(n, seed)
        .iter()
        .map(|d| {
            let names: Vec<String> = d.features.iter().map(|j| format!("f{j}")).collect();
            format!("{}\n", json!({ "features": names, "label": u8::from(d.label) }))
        })
        .collect()
}
