use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::PredictionPair;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Predictions are clamped to `[ε, 1 − ε]` before taking logs.
pub const CE_EPSILON: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreDecomposition<T> {
    pub brier: T,
    pub cross_entropy: T,
    pub calib_mse: T,
    pub refinement: T,
}

/// Mean squared error `(1/N) Σ (yᵢ − qᵢ)²`.
pub fn brier_score<T: Real>(pairs: &[PredictionPair<T>]) -> Result<T> {
    if pairs.is_empty() {
        return Err(Error::NoData);
    }
    let total: T = pairs.iter().map(|p| (p.label() - p.q) * (p.label() - p.q)).sum();
    Ok(total / T::from_count(pairs.len()))
}

/// Mean negative log-likelihood in nats.
pub fn cross_entropy<T: Real>(pairs: &[PredictionPair<T>]) -> Result<T> {
    if pairs.is_empty() {
        return Err(Error::NoData);
    }
    let eps = T::lit(CE_EPSILON);
    let total: T = pairs
        .iter()
        .map(|p| {
            let q = p.q.max(eps).min(T::one() - eps);
            if p.y {
                -q.ln()
            } else {
                -(T::one() - q).ln()
            }
        })
        .sum();
    Ok(total / T::from_count(pairs.len()))
}

/// Splits the Brier score into calibration and refinement terms, grouping
/// pairs by exact prediction value.
pub fn decomposition_by_unique_q<T: Real>(pairs: &[PredictionPair<T>]) -> Result<ScoreDecomposition<T>> {
    let brier = brier_score(pairs)?;
    let cross_entropy = cross_entropy(pairs)?;

    let mut sorted: Vec<_> = pairs.to_vec();
    sorted.sort_by(|a, b| a.q.partial_cmp(&b.q).unwrap_or(Ordering::Equal));
    let n = T::from_count(pairs.len());
    let mut calib_mse = T::zero();
    let mut refinement = T::zero();
    for group in sorted.chunk_by(|a, b| a.q == b.q) {
        let weight = T::from_count(group.len()) / n;
        let freq = T::from_count(group.iter().filter(|p| p.y).count()) / T::from_count(group.len());
        let q = group[0].q;
        calib_mse += weight * (q - freq) * (q - freq);
        refinement += weight * freq * (T::one() - freq);
    }
    Ok(ScoreDecomposition { brier, cross_entropy, calib_mse, refinement })
}
