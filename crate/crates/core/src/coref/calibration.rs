use super::sampler::PairwiseMarginals;
use super::Clustering;
use crate::calib::{evaluate, Evaluation, PredictionPair};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(q_ij, gold coreference)` for every pair `i < j` of one document.
pub fn pairwise_prediction_pairs<T: Real>(
    marginals: &PairwiseMarginals<T>,
    gold: &Clustering,
) -> Result<Vec<PredictionPair<T>>> {
    if !gold.is_partition_of(marginals.num_mentions) {
        return Err(Error::input(format!("gold clustering is not a partition of {} mentions", marginals.num_mentions)));
    }
    let labels = gold.labels();
    Ok(marginals
        .iter()
        .map(|(i, j, q)| PredictionPair { q: q.max(T::zero()).min(T::one()), y: labels[i] == labels[j] })
        .collect())
}

/// Pools pairwise predictions across documents and evaluates calibration.
/// `gold[d]` must be present for every document.
pub fn coref_pairwise_calibration<T: Real>(
    marginals: &[PairwiseMarginals<T>],
    gold: &[Option<Clustering>],
    bin_size: usize,
    num_samples: usize,
    seed: u64,
) -> Result<Evaluation<T>> {
    if marginals.len() != gold.len() {
        return Err(Error::input("gold clusterings do not line up with documents"));
    }
    let mut pairs = Vec::new();
    for (d, (m, g)) in marginals.iter().zip(gold).enumerate() {
        let g = g.as_ref().ok_or_else(|| Error::input(format!("document {d} has no gold entities")))?;
        pairs.extend(pairwise_prediction_pairs(m, g)?);
    }
    evaluate(&pairs, bin_size, num_samples, seed)
}
