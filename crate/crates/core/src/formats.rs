//! Text file formats read and written by the command-line tools.
//!
//! Parsers take the whole file contents and report malformed records as
//! [`Error::Input`] naming the 1-based line; writers return strings.

use std::fmt::Write as _;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::calib::{CurvePoint, Evaluation, FixedBin, PredictionPair, ScoreDecomposition};
use crate::coref::{Clustering, CorefDocument, PairwiseMarginals};
use crate::error::{Error, Result};
use crate::events::{AnnotatedDocument, EventBand, FlaggedDocument, MentionAttributes};
use crate::scalar::Real;
use crate::seq::{TagLattice, TaggedSentence};

fn line_error(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("line {line}: {msg}"))
}

fn json_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

// ---------------------------------------------------------------------------
// Prediction pairs

#[derive(Deserialize)]
struct PairRecord {
    q: f64,
    y: Value,
}

fn label_value(v: &Value) -> Option<bool> {
    match v {
        Value::Bool(b) => Some(*b),
        Value::Number(n) => match n.as_f64() {
            Some(0.0) => Some(false),
            Some(1.0) => Some(true),
            _ => None,
        },
        _ => None,
    }
}

fn checked_pair<T: Real>(line: usize, q: f64, y: bool) -> Result<PredictionPair<T>> {
    if !(0.0..=1.0).contains(&q) {
        return Err(line_error(line, format!("q = {q} is outside [0, 1]")));
    }
    Ok(PredictionPair { q: T::lit(q), y })
}

/// Prediction pairs from JSON-lines (`{"q": .., "y": 0|1}`) or headerless
/// two-column CSV; the format is picked from the first non-blank character.
pub fn parse_pairs<T: Real>(text: &str) -> Result<Vec<PredictionPair<T>>> {
    match text.trim_start().chars().next() {
        None => Ok(Vec::new()),
        Some('{') => parse_pairs_jsonl(text),
        Some(_) => parse_pairs_csv(text),
    }
}

pub fn parse_pairs_jsonl<T: Real>(text: &str) -> Result<Vec<PredictionPair<T>>> {
    json_lines(text)
        .map(|(line, l)| {
            let rec: PairRecord = serde_json::from_str(l).map_err(|e| line_error(line, e))?;
            let y = label_value(&rec.y).ok_or_else(|| line_error(line, "y must be 0 or 1"))?;
            checked_pair(line, rec.q, y)
        })
        .collect()
}

pub fn parse_pairs_csv<T: Real>(text: &str) -> Result<Vec<PredictionPair<T>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            line_error(line, e)
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(line_error(line, format!("expected 2 columns, found {}", record.len())));
        }
        let q: f64 = record[0].parse().map_err(|_| line_error(line, format!("bad q {:?}", &record[0])))?;
        let y = match &record[1] {
            "0" => false,
            "1" => true,
            other => return Err(line_error(line, format!("y must be 0 or 1, found {other:?}"))),
        };
        pairs.push(checked_pair(line, q, y)?);
    }
    Ok(pairs)
}

// ---------------------------------------------------------------------------
// Calibration reports

#[derive(Serialize)]
struct BinJson<T> {
    q_hat: T,
    p_hat: T,
    size: usize,
    stderr: T,
}

#[derive(Serialize)]
struct ReportJson<T> {
    calib_err: T,
    calib_err_avg: T,
    stderr: T,
    ci_lo: T,
    ci_hi: T,
    n: usize,
    bin_size: usize,
    num_samples: usize,
    seed: u64,
    low_confidence: bool,
    bins: Vec<BinJson<T>>,
}

pub fn report_value<T: Real>(ev: &Evaluation<T>) -> Value {
    let r = &ev.report;
    serde_json::to_value(ReportJson {
        calib_err: r.calib_err,
        calib_err_avg: r.calib_err_avg,
        stderr: r.stderr,
        ci_lo: r.ci_lo,
        ci_hi: r.ci_hi,
        n: ev.n,
        bin_size: ev.bin_size,
        num_samples: r.num_samples,
        seed: r.seed,
        low_confidence: ev.low_confidence,
        bins: ev
            .bins
            .iter()
            .map(|b| BinJson { q_hat: b.q_hat, p_hat: b.p_hat, size: b.size, stderr: b.stderr() })
            .collect(),
    })
    .expect("report serializes")
}

/// The calibration report as a single pretty-printed JSON object.
pub fn report_json<T: Real>(ev: &Evaluation<T>) -> String {
    let mut s = serde_json::to_string_pretty(&report_value(ev)).expect("report serializes");
    s.push('\n');
    s
}

pub fn bins_csv<T: Real>(ev: &Evaluation<T>) -> String {
    let mut out = String::from("q_hat,p_hat,size,stderr\n");
    for b in &ev.bins {
        let _ = writeln!(out, "{},{},{},{}", b.q_hat, b.p_hat, b.size, b.stderr());
    }
    out
}

pub fn curve_csv<T: Real>(points: &[CurvePoint<T>]) -> String {
    let mut out = String::from("q_hat,p_hat,size,stderr,confidence\n");
    for p in points {
        let conf = serde_json::to_value(p.confidence).expect("enum serializes");
        let _ = writeln!(out, "{},{},{},{},{}", p.q_hat, p.p_hat, p.size, p.stderr, conf.as_str().unwrap_or(""));
    }
    out
}

pub fn fixed_bins_csv<T: Real>(bins: &[FixedBin<T>]) -> String {
    let mut out = String::from("lo,hi,q_hat,p_hat,size,stderr\n");
    for b in bins {
        let _ =
            writeln!(out, "{},{},{},{},{},{}", b.lo, b.hi, b.summary.q_hat, b.summary.p_hat, b.summary.size, b.stderr);
    }
    out
}

pub fn decomposition_json<T: Real>(d: &ScoreDecomposition<T>, n: usize) -> String {
    let v = serde_json::json!({
        "n": n,
        "brier": d.brier,
        "cross_entropy": d.cross_entropy,
        "calib_mse": d.calib_mse,
        "refinement": d.refinement,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("decomposition serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Tagged corpora, binary documents, lattices

fn unescape_word(raw: &str) -> String {
    raw.replace("\\/", "/")
}

/// One sentence per line, tokens `word/TAG` separated by whitespace. A
/// literal slash inside a word is written `\/`; the tag follows the last
/// unescaped slash.
pub fn parse_tagged_corpus(text: &str) -> Result<Vec<TaggedSentence>> {
    let mut sentences = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut sentence = Vec::new();
        for token in line.split_whitespace() {
            let bytes = token.as_bytes();
            let split = (0..bytes.len())
                .rev()
                .find(|&k| bytes[k] == b'/' && (k == 0 || bytes[k - 1] != b'\\'))
                .ok_or_else(|| line_error(line_no, format!("token {token:?} has no tag")))?;
            let (word, tag) = (&token[..split], &token[split + 1..]);
            if word.is_empty() || tag.is_empty() {
                return Err(line_error(line_no, format!("token {token:?} has an empty word or tag")));
            }
            sentence.push((unescape_word(word), tag.to_owned()));
        }
        sentences.push(sentence);
    }
    Ok(sentences)
}

/// Renders a sentence back to `word/TAG` form.
pub fn format_tagged_sentence(sentence: &TaggedSentence) -> String {
    sentence.iter().map(|(w, t)| format!("{}/{}", w.replace('/', "\\/"), t)).collect::<Vec<_>>().join(" ")
}

#[derive(Deserialize)]
struct BinaryDocRecord {
    features: Vec<String>,
    label: Value,
}

/// Raw `(features, label)` records from JSON-lines.
pub fn parse_binary_documents(text: &str) -> Result<Vec<(Vec<String>, bool)>> {
    json_lines(text)
        .map(|(line, l)| {
            let rec: BinaryDocRecord = serde_json::from_str(l).map_err(|e| line_error(line, e))?;
            let label = label_value(&rec.label).ok_or_else(|| line_error(line, "label must be 0 or 1"))?;
            Ok((rec.features, label))
        })
        .collect()
}

#[derive(Deserialize)]
struct LatticeFile {
    tags: Vec<String>,
    transitions: Vec<Vec<f64>>,
    #[serde(default)]
    start: Option<Vec<f64>>,
    #[serde(default)]
    stop: Option<Vec<f64>>,
    emissions: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    gold: Option<Vec<Vec<String>>>,
}

/// Externally computed potentials for a batch of sentences.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBatch<T> {
    pub tags: Vec<String>,
    pub lattices: Vec<TagLattice<T>>,
    /// Gold tag ids per sentence, when supplied.
    pub gold: Option<Vec<Vec<usize>>>,
}

pub fn parse_lattice_batch<T: Real>(text: &str) -> Result<LatticeBatch<T>> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("lattice file: {e}")))?;
    let conv = |v: Vec<f64>| v.into_iter().map(T::lit).collect::<Vec<T>>();
    let transitions: Vec<Vec<T>> = file.transitions.into_iter().map(conv).collect();
    if transitions.len() != file.tags.len() {
        return Err(Error::input("transition matrix does not match the tagset"));
    }
    let start = file.start.map(conv);
    let stop = file.stop.map(conv);
    let lattices = file
        .emissions
        .into_iter()
        .enumerate()
        .map(|(s, em)| {
            TagLattice::new(em.into_iter().map(conv).collect(), transitions.clone(), start.clone(), stop.clone())
                .map_err(|e| Error::Input(format!("sentence {s}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let gold = match file.gold {
        None => None,
        Some(gold) => {
            if gold.len() != lattices.len() {
                return Err(Error::input("gold tags do not line up with sentences"));
            }
            let ids = gold
                .iter()
                .enumerate()
                .map(|(s, tags)| {
                    tags.iter()
                        .map(|t| {
                            file.tags
                                .iter()
                                .position(|x| x == t)
                                .ok_or_else(|| Error::Input(format!("sentence {s}: unknown gold tag {t:?}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Some(ids)
        }
    };
    Ok(LatticeBatch { tags: file.tags, lattices, gold })
}

// ---------------------------------------------------------------------------
// Coreference documents

#[derive(Deserialize)]
struct CorefRecord {
    #[serde(default)]
    doc_id: Option<Value>,
    num_mentions: usize,
    score_rows: Vec<Vec<f64>>,
    #[serde(default)]
    gold_entities: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorefInput<T> {
    pub doc_id: String,
    pub doc: CorefDocument<T>,
    pub gold: Option<Clustering>,
}

fn doc_id_string(v: Option<Value>, fallback: usize) -> String {
    match v {
        Some(Value::String(s)) => s,
        Some(other) => other.to_string(),
        None => fallback.to_string(),
    }
}

fn score_rows<T: Real>(rows: Vec<Vec<f64>>) -> Vec<Vec<T>> {
    rows.into_iter().map(|r| r.into_iter().map(T::lit).collect()).collect()
}

/// One document per line; `doc_id` defaults to the 0-based record index.
/// Mention indices are 0-based.
pub fn parse_coref_documents<T: Real>(text: &str) -> Result<Vec<CorefInput<T>>> {
    json_lines(text)
        .enumerate()
        .map(|(idx, (line, l))| {
            let rec: CorefRecord = serde_json::from_str(l).map_err(|e| line_error(line, e))?;
            if rec.num_mentions != rec.score_rows.len() {
                return Err(line_error(
                    line,
                    format!("num_mentions = {} but {} score rows", rec.num_mentions, rec.score_rows.len()),
                ));
            }
            let doc = CorefDocument::new(score_rows(rec.score_rows)).map_err(|e| line_error(line, e))?;
            let gold = rec
                .gold_entities
                .map(|g| Clustering::from_entities(rec.num_mentions, &g))
                .transpose()
                .map_err(|e| line_error(line, e))?;
            Ok(CorefInput { doc_id: doc_id_string(rec.doc_id, idx), doc, gold })
        })
        .collect()
}

#[derive(Serialize)]
struct PairwiseRecord<'a, T> {
    doc_id: &'a str,
    i: usize,
    j: usize,
    q: T,
}

pub fn write_pairwise_jsonl<T: Real>(out: &mut String, doc_id: &str, marginals: &PairwiseMarginals<T>) {
    for (i, j, q) in marginals.iter() {
        out.push_str(&serde_json::to_string(&PairwiseRecord { doc_id, i, j, q }).expect("record serializes"));
        out.push('\n');
    }
}

#[derive(Serialize)]
struct ClusteringRecord<'a> {
    doc_id: &'a str,
    sample: u64,
    entities: &'a [Vec<usize>],
}

pub fn write_clustering_jsonl(out: &mut String, doc_id: &str, sample: u64, clustering: &Clustering) {
    let rec = ClusteringRecord { doc_id, sample, entities: &clustering.entities };
    out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
    out.push('\n');
}

// ---------------------------------------------------------------------------
// Event corpora

#[derive(Deserialize)]
struct CorpusRecord {
    doc_id: Value,
    date: String,
    mentions: Vec<MentionAttributes>,
    score_rows: Vec<Vec<f64>>,
}

pub fn parse_event_corpus<T: Real>(text: &str) -> Result<Vec<AnnotatedDocument<T>>> {
    json_lines(text)
        .enumerate()
        .map(|(idx, (line, l))| {
            let rec: CorpusRecord = serde_json::from_str(l).map_err(|e| line_error(line, e))?;
            let date = NaiveDate::parse_from_str(&rec.date, "%Y-%m-%d")
                .map_err(|e| line_error(line, format!("bad date {:?}: {e}", rec.date)))?;
            let coref = CorefDocument::new(score_rows(rec.score_rows)).map_err(|e| line_error(line, e))?;
            AnnotatedDocument::new(doc_id_string(Some(rec.doc_id), idx), date, rec.mentions, coref)
                .map_err(|e| line_error(line, e))
        })
        .collect()
}

pub const EVENTS_CSV_HEADER: &str = "country,period_start,mean,sd,ci_lo,ci_hi,mc_stderr,num_samples";

pub fn write_event_row<T: Real>(out: &mut String, country: &str, period_start: NaiveDate, band: &EventBand<T>) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        country,
        period_start.format("%Y-%m-%d"),
        band.mean,
        band.sd,
        band.ci_lo,
        band.ci_hi,
        band.mc_stderr,
        band.num_samples
    );
}

pub fn write_flagged_jsonl(out: &mut String, flagged: &[FlaggedDocument]) {
    for f in flagged {
        out.push_str(&serde_json::to_string(f).expect("record serializes"));
        out.push('\n');
    }
}
