//! Synthetic antecedent-score documents.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::sampler::AntecedentDistributions;
use super::{connected_components, AntecedentVector, Clustering, CorefDocument};
use crate::rng::stream_rng;
use crate::scalar::Real;

/// Score rows with i.i.d. `N(mean, sd²)` entries; `new_bias` is added to the
/// NEW option of every row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreLaw {
    pub mean: f64,
    pub sd: f64,
    pub new_bias: f64,
}

impl Default for ScoreLaw {
    fn default() -> Self {
        Self { mean: 0.0, sd: 1.0, new_bias: 0.0 }
    }
}

pub fn synthetic_document<T: Real, R: Rng>(num_mentions: usize, law: ScoreLaw, rng: &mut R) -> CorefDocument<T> {
    let normal = Normal::new(law.mean, law.sd).expect("valid score law");
    let rows = (0..num_mentions)
        .map(|i| {
            (0..=i)
                .map(|k| {
                    let bias = if k == 0 { law.new_bias } else { 0.0 };
                    T::lit(normal.sample(rng) + bias)
                })
                .collect()
        })
        .collect();
    CorefDocument::new(rows).expect("generated rows are well formed")
}

/// Gold clustering drawn from the model itself, so the model is calibrated
/// by construction.
pub fn self_consistent_gold<T: Real>(dists: &AntecedentDistributions<T>, seed: u64) -> Clustering {
    let mut rng = stream_rng(seed, u64::MAX);
    let a = dists
        .rows
        .iter()
        .map(|row| {
            let u = T::lit(rng.random::<f64>());
            let mut acc = T::zero();
            let k = row
                .iter()
                .position(|&p| {
                    acc += p;
                    u < acc
                })
                .unwrap_or(row.len() - 1);
            if k == 0 {
                None
            } else {
                Some(k - 1)
            }
        })
        .collect();
    connected_components(&AntecedentVector(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_documents_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let doc: CorefDocument<f64> = synthetic_document(5, ScoreLaw::default(), &mut rng);
        assert_eq!(doc.num_mentions(), 5);
        assert_eq!(doc.score_rows()[4].len(), 5);
    }
}
