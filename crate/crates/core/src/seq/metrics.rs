use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Predictions at or above this probability count as positive.
pub const DECISION_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn evaluate_binary<T: Real>(predictions: &[T], gold: &[bool]) -> Result<BinaryMetrics> {
    if predictions.len() != gold.len() {
        return Err(Error::input("predictions and gold labels differ in length"));
    }
    if predictions.is_empty() {
        return Err(Error::NoData);
    }
    let threshold = T::lit(DECISION_THRESHOLD);
    let (mut tp, mut fp, mut fneg, mut correct) = (0usize, 0usize, 0usize, 0usize);
    for (&q, &y) in predictions.iter().zip(gold) {
        let pred = q >= threshold;
        match (pred, y) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
        if pred == y {
            correct += 1;
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fneg);
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Ok(BinaryMetrics { accuracy: ratio(correct, predictions.len()), precision, recall, f1 })
}

/// Trains one model per candidate and keeps the one with the best dev
/// metric. Candidates are visited in ascending order and only a strictly
/// better score replaces the incumbent, so ties favour the smaller value.
pub fn grid_select<H, M, E>(
    candidates: &[H],
    mut train: impl FnMut(H) -> std::result::Result<M, E>,
    mut metric: impl FnMut(&M) -> f64,
) -> std::result::Result<(H, M, f64), E>
where
    H: Copy + PartialOrd,
    E: From<Error>,
{
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut best: Option<(H, M, f64)> = None;
    for h in sorted {
        let model = train(h)?;
        let score = metric(&model);
        if best.as_ref().is_none_or(|(_, _, s)| score > *s) {
            best = Some((h, model, score));
        }
    }
    best.ok_or_else(|| Error::param("no hyperparameter candidates").into())
}
