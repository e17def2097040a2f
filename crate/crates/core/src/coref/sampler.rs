use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{connected_components, num_pairs, pair_index, AntecedentVector, Clustering, CorefDocument, UnionFind};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::{softmax, Real};

/// Normalized antecedent probabilities, one row per mention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntecedentDistributions<T> {
    pub rows: Vec<Vec<T>>,
}

impl<T: Real> AntecedentDistributions<T> {
    pub fn num_mentions(&self) -> usize {
        self.rows.len()
    }

    /// `log P(a) = Σᵢ log P(aᵢ)`.
    pub fn log_prob(&self, antecedents: &AntecedentVector) -> T {
        (0..self.rows.len()).map(|i| self.rows[i][antecedents.option(i)].ln()).sum()
    }
}

/// Softmax of every score row.
pub fn antecedent_distributions<T: Real>(doc: &CorefDocument<T>) -> Result<AntecedentDistributions<T>> {
    if doc.score_rows().iter().flatten().any(|s| !s.is_finite()) {
        return Err(Error::input("antecedent scores must be finite"));
    }
    Ok(AntecedentDistributions { rows: doc.score_rows().iter().map(|row| softmax(row)).collect() })
}

fn draw_option<T: Real, R: Rng>(row: &[T], rng: &mut R) -> usize {
    let u = T::lit(rng.random::<f64>());
    let mut acc = T::zero();
    for (k, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    // Rounding left `acc` just below 1: take the last option with mass.
    row.iter().rposition(|&p| p > T::zero()).unwrap_or(0)
}

/// One antecedent vector, drawn from stream `sample_index` of `seed`.
pub fn sample_antecedent_vector<T: Real>(
    dists: &AntecedentDistributions<T>,
    seed: u64,
    sample_index: u64,
) -> AntecedentVector {
    let mut rng = stream_rng(seed, sample_index);
    AntecedentVector(
        dists
            .rows
            .iter()
            .map(|row| match draw_option(row, &mut rng) {
                0 => None,
                k => Some(k - 1),
            })
            .collect(),
    )
}

pub fn sample_clustering<T: Real>(dists: &AntecedentDistributions<T>, seed: u64, sample_index: u64) -> Clustering {
    connected_components(&sample_antecedent_vector(dists, seed, sample_index))
}

/// Entity labels for sample `s`, without materializing a [`Clustering`].
fn sample_labels<T: Real>(dists: &AntecedentDistributions<T>, seed: u64, s: u64) -> Vec<usize> {
    let mut rng = stream_rng(seed, s);
    let mut uf = UnionFind::new(dists.num_mentions());
    for (i, row) in dists.rows.iter().enumerate() {
        let k = draw_option(row, &mut rng);
        if k > 0 {
            uf.union(i, k - 1);
        }
    }
    uf.canonical_labels()
}

/// Estimated `P(mentions i and j corefer)` for every pair `i < j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMarginals<T> {
    pub num_mentions: usize,
    /// Upper-triangular, row-major; see [`pair_index`].
    pub q: Vec<T>,
    pub num_samples: usize,
    pub seed: u64,
}

impl<T: Real> PairwiseMarginals<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.q[pair_index(self.num_mentions, a, b)]
    }

    /// `(i, j, q)` for every pair, `i < j`, in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let n = self.num_mentions;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j, self.q[pair_index(n, i, j)])))
    }
}

/// Fraction of `num_samples` clustering samples in which each pair shares an
/// entity. Counts are integers, so the parallel reduction is exact.
pub fn pairwise_marginals<T: Real>(
    dists: &AntecedentDistributions<T>,
    num_samples: usize,
    seed: u64,
) -> Result<PairwiseMarginals<T>> {
    if num_samples == 0 {
        return Err(Error::param("number of samples must be at least 1"));
    }
    let n = dists.num_mentions();
    let counts = (0..num_samples as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; num_pairs(n)],
            |mut acc, s| {
                let labels = sample_labels(dists, seed, s);
                let clustering = Clustering::from_labels(&labels);
                for entity in clustering.entities.iter().filter(|e| e.len() > 1) {
                    for (x, &i) in entity.iter().enumerate() {
                        for &j in &entity[x + 1..] {
                            acc[pair_index(n, i, j)] += 1;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; num_pairs(n)],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let total = T::from_count(num_samples);
    Ok(PairwiseMarginals {
        num_mentions: n,
        q: counts.into_iter().map(|c| T::from_u64(c).unwrap() / total).collect(),
        num_samples,
        seed,
    })
}

/// Sample counts per distinct clustering.
pub fn empirical_clustering_distribution<T: Real>(
    dists: &AntecedentDistributions<T>,
    num_samples: usize,
    seed: u64,
) -> BTreeMap<Clustering, usize> {
    (0..num_samples as u64)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc, s| {
            *acc.entry(Clustering::from_labels(&sample_labels(dists, seed, s))).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}
