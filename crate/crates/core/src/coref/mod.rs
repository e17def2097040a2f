//! Exact posterior sampling for a locally normalized antecedent model.
//!
//! Each mention independently picks NEW or one earlier mention; entities are
//! the connected components of the resulting antecedent graph. Independent
//! samples of the antecedent vector therefore give independent samples of
//! the entity clustering, and pairwise coreference marginals are sample
//! frequencies.

mod calibration;
mod enumerate;
mod sampler;
pub mod synth;
mod union_find;

pub use calibration::{coref_pairwise_calibration, pairwise_prediction_pairs};
pub use enumerate::{enumerate_clustering_distribution, ClusteringDistribution, MAX_ENUMERATION_MENTIONS};
pub use sampler::{
    antecedent_distributions, empirical_clustering_distribution, pairwise_marginals, sample_antecedent_vector,
    sample_clustering, AntecedentDistributions, PairwiseMarginals,
};
pub use union_find::UnionFind;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Per-mention antecedent scores. Row `i` has `i + 1` entries: index 0 is
/// NEW and index `j ≥ 1` is mention `j − 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorefDocument<T> {
    score_rows: Vec<Vec<T>>,
}

impl<T: Real> CorefDocument<T> {
    pub fn new(score_rows: Vec<Vec<T>>) -> Result<Self> {
        for (i, row) in score_rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(Error::input(format!("score row {i} has {} entries, expected {}", row.len(), i + 1)));
            }
            if row.iter().any(|s| !s.is_finite()) {
                return Err(Error::input(format!("score row {i} contains a non-finite score")));
            }
        }
        Ok(Self { score_rows })
    }

    pub fn num_mentions(&self) -> usize {
        self.score_rows.len()
    }

    pub fn score_rows(&self) -> &[Vec<T>] {
        &self.score_rows
    }
}

/// `None` is NEW; `Some(j)` links to the earlier mention `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntecedentVector(pub Vec<Option<usize>>);

impl AntecedentVector {
    pub fn is_valid(&self) -> bool {
        self.0.iter().enumerate().all(|(i, a)| a.is_none_or(|j| j < i))
    }

    /// Option index in the score row: 0 for NEW, `j + 1` for mention `j`.
    pub fn option(&self, i: usize) -> usize {
        self.0[i].map_or(0, |j| j + 1)
    }
}

/// A partition of mentions `0..n` into entities. Mentions are ascending
/// within an entity and entities are ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clustering {
    pub entities: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn from_labels(labels: &[usize]) -> Self {
        let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut entities = vec![Vec::new(); count];
        for (m, &l) in labels.iter().enumerate() {
            entities[l].push(m);
        }
        entities.retain(|e| !e.is_empty());
        entities.sort_by_key(|e| e[0]);
        Self { entities }
    }

    /// Builds a clustering from listed entities; mentions that are not
    /// listed become singletons.
    pub fn from_entities(num_mentions: usize, entities: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; num_mentions];
        for (e, members) in entities.iter().enumerate() {
            for &m in members {
                if m >= num_mentions {
                    return Err(Error::input(format!("mention {m} outside document of {num_mentions}")));
                }
                if label[m] != usize::MAX {
                    return Err(Error::input(format!("mention {m} appears in two entities")));
                }
                label[m] = e;
            }
        }
        for (next, l) in (entities.len()..).zip(label.iter_mut().filter(|l| **l == usize::MAX)) {
            *l = next;
        }
        Ok(Self::from_labels(&label))
    }

    pub fn num_mentions(&self) -> usize {
        self.entities.iter().map(Vec::len).sum()
    }

    /// Entity index for every mention.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.num_mentions()];
        for (e, members) in self.entities.iter().enumerate() {
            for &m in members {
                labels[m] = e;
            }
        }
        labels
    }

    pub fn is_partition_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for &m in self.entities.iter().flatten() {
            if m >= n || seen[m] {
                return false;
            }
            seen[m] = true;
        }
        seen.into_iter().all(|s| s) && self.entities.iter().all(|e| !e.is_empty())
    }
}

/// Entities of the antecedent graph with edges `(i, aᵢ)`.
pub fn connected_components(antecedents: &AntecedentVector) -> Clustering {
    let mut uf = UnionFind::new(antecedents.0.len());
    for (i, a) in antecedents.0.iter().enumerate() {
        if let Some(j) = *a {
            uf.union(i, j);
        }
    }
    Clustering::from_labels(&uf.canonical_labels())
}

/// Number of unordered mention pairs `i < j`.
pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `i < j`, in row-major upper-triangular order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}
