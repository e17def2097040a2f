//! Turning tag marginals into per-label prediction-label pairs.

use std::cmp::Reverse;

use serde::Serialize;

use super::lattice::Marginals;
use crate::calib::{evaluate, Evaluation, PredictionPair};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One pair sequence per label, in label order.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPairs<T> {
    pub labels: Vec<String>,
    pub pairs: Vec<Vec<PredictionPair<T>>>,
}

impl<T: Real> LabeledPairs<T> {
    fn with_labels(labels: Vec<String>) -> Self {
        let pairs = vec![Vec::new(); labels.len()];
        Self { labels, pairs }
    }

    /// All labels' pairs, label after label.
    pub fn concatenated(&self) -> Vec<PredictionPair<T>> {
        self.pairs.iter().flatten().copied().collect()
    }

    pub fn total(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }

    /// Number of positive (gold) pairs per label.
    pub fn gold_counts(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.iter().filter(|x| x.y).count()).collect()
    }
}

fn unit<T: Real>(q: T) -> T {
    q.max(T::zero()).min(T::one())
}

/// Accumulates single-tag and adjacent-tag-pair prediction pairs across
/// sentences, in document order.
#[derive(Clone, Debug)]
pub struct TagPairExtractor<T> {
    num_tags: usize,
    single: LabeledPairs<T>,
    pair: LabeledPairs<T>,
}

impl<T: Real> TagPairExtractor<T> {
    pub fn new(tags: &[String]) -> Self {
        let pair_labels = tags.iter().flat_map(|a| tags.iter().map(move |b| format!("{a} {b}"))).collect();
        Self {
            num_tags: tags.len(),
            single: LabeledPairs::with_labels(tags.to_vec()),
            pair: LabeledPairs::with_labels(pair_labels),
        }
    }

    /// Adds one sentence. `gold[t]` is the gold tag id at position `t`.
    pub fn add_sentence(&mut self, marginals: &Marginals<T>, gold: &[usize]) -> Result<()> {
        let k = self.num_tags;
        if marginals.single.len() != gold.len() {
            return Err(Error::input(format!(
                "{} marginal positions but {} gold tags",
                marginals.single.len(),
                gold.len()
            )));
        }
        if marginals.single.iter().any(|row| row.len() != k) {
            return Err(Error::input("marginal rows do not match the tagset"));
        }
        if let Some(&g) = gold.iter().find(|&&g| g >= k) {
            return Err(Error::input(format!("gold tag id {g} outside tagset")));
        }
        for (row, &g) in marginals.single.iter().zip(gold) {
            for (tag, &q) in row.iter().enumerate() {
                self.single.pairs[tag].push(PredictionPair { q: unit(q), y: tag == g });
            }
        }
        for (t, table) in marginals.pair.iter().enumerate() {
            let gold_label = gold[t] * k + gold[t + 1];
            for (j, row) in table.iter().enumerate() {
                for (n, &q) in row.iter().enumerate() {
                    let label = j * k + n;
                    self.pair.pairs[label].push(PredictionPair { q: unit(q), y: label == gold_label });
                }
            }
        }
        Ok(())
    }

    pub fn single(&self) -> &LabeledPairs<T> {
        &self.single
    }

    pub fn pair(&self) -> &LabeledPairs<T> {
        &self.pair
    }

    pub fn into_parts(self) -> (LabeledPairs<T>, LabeledPairs<T>) {
        (self.single, self.pair)
    }
}

/// Single-sentence convenience wrapper around [`TagPairExtractor`].
pub fn extract_tag_prediction_pairs<T: Real>(
    marginals: &Marginals<T>,
    gold: &[usize],
    tags: &[String],
) -> Result<(LabeledPairs<T>, LabeledPairs<T>)> {
    let mut ex = TagPairExtractor::new(tags);
    ex.add_sentence(marginals, gold)?;
    Ok(ex.into_parts())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelCalibration<T> {
    pub label: String,
    pub gold_count: usize,
    pub evaluation: Evaluation<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelCalibrationTable<T> {
    /// Ranked by gold frequency, most frequent first.
    pub rows: Vec<LabelCalibration<T>>,
    /// Unweighted mean of the rows' calibration errors.
    pub average: T,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CalibSettings {
    pub bin_size: usize,
    pub num_samples: usize,
    pub seed: u64,
}

/// Calibration error for the `top_k` most frequent gold labels, ties broken
/// lexicographically, plus their unweighted average.
pub fn per_label_calibration<T: Real>(
    labeled: &LabeledPairs<T>,
    top_k: usize,
    settings: CalibSettings,
) -> Result<LabelCalibrationTable<T>> {
    if top_k == 0 {
        return Err(Error::param("top-k must be positive"));
    }
    let counts = labeled.gold_counts();
    let mut order: Vec<usize> = (0..labeled.labels.len()).filter(|&i| !labeled.pairs[i].is_empty()).collect();
    order.sort_by(|&a, &b| (Reverse(counts[a]), &labeled.labels[a]).cmp(&(Reverse(counts[b]), &labeled.labels[b])));
    let mut warnings = Vec::new();
    if top_k > order.len() {
        warnings.push(format!("requested top {top_k} labels but only {} are available", order.len()));
    }
    if order.is_empty() {
        return Err(Error::NoData);
    }
    let rows = order
        .into_iter()
        .take(top_k)
        .map(|i| {
            let evaluation = evaluate(&labeled.pairs[i], settings.bin_size, settings.num_samples, settings.seed)?;
            if evaluation.low_confidence {
                warnings.push(format!(
                    "label {}: {} pairs is below the bin size {}",
                    labeled.labels[i], evaluation.n, settings.bin_size
                ));
            }
            Ok(LabelCalibration { label: labeled.labels[i].clone(), gold_count: counts[i], evaluation })
        })
        .collect::<Result<Vec<_>>>()?;
    let average = rows.iter().map(|r| r.evaluation.report.calib_err).sum::<T>() / T::from_count(rows.len());
    Ok(LabelCalibrationTable { rows, average, warnings })
}
