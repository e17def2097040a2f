use std::collections::BTreeMap;

use super::sampler::AntecedentDistributions;
use super::{num_pairs, pair_index, Clustering, UnionFind};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest document accepted by exhaustive enumeration (12! antecedent
/// vectors).
pub const MAX_ENUMERATION_MENTIONS: usize = 12;

/// Exact distribution over clusterings.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringDistribution<T> {
    pub num_mentions: usize,
    /// Sorted by clustering.
    pub outcomes: Vec<(Clustering, T)>,
}

impl<T: Real> ClusteringDistribution<T> {
    pub fn total_mass(&self) -> T {
        self.outcomes.iter().map(|(_, p)| *p).sum()
    }

    pub fn probability(&self, clustering: &Clustering) -> T {
        self.outcomes.binary_search_by(|(c, _)| c.cmp(clustering)).map_or(T::zero(), |i| self.outcomes[i].1)
    }

    /// Exact `P(i, j corefer)` for every pair, in [`pair_index`] order.
    pub fn pairwise_marginals(&self) -> Vec<T> {
        let n = self.num_mentions;
        let mut q = vec![T::zero(); num_pairs(n)];
        for (c, p) in &self.outcomes {
            for entity in &c.entities {
                for (x, &i) in entity.iter().enumerate() {
                    for &j in &entity[x + 1..] {
                        q[pair_index(n, i, j)] += *p;
                    }
                }
            }
        }
        q
    }

    /// Expected value of any function of the clustering.
    pub fn expectation(&self, mut f: impl FnMut(&Clustering) -> T) -> T {
        self.outcomes.iter().map(|(c, p)| *p * f(c)).sum()
    }

    /// Total-variation distance to empirical sample counts.
    pub fn total_variation(&self, counts: &BTreeMap<Clustering, usize>) -> T {
        let total = T::from_count(counts.values().sum());
        let mut tv = T::zero();
        for (c, p) in &self.outcomes {
            let f = counts.get(c).map_or(T::zero(), |&k| T::from_count(k) / total);
            tv += (*p - f).abs();
        }
        for (c, &k) in counts {
            if self.outcomes.binary_search_by(|(o, _)| o.cmp(c)).is_err() {
                tv += T::from_count(k) / total;
            }
        }
        tv / T::lit(2.0)
    }
}

/// Pushes the probability of every antecedent vector onto its connected
/// components.
pub fn enumerate_clustering_distribution<T: Real>(
    dists: &AntecedentDistributions<T>,
) -> Result<ClusteringDistribution<T>> {
    let n = dists.num_mentions();
    if n > MAX_ENUMERATION_MENTIONS {
        return Err(Error::TooLarge(format!("{n} mentions exceeds the limit of {MAX_ENUMERATION_MENTIONS}")));
    }
    let mut mass: BTreeMap<Clustering, T> = BTreeMap::new();
    let mut choice = vec![0usize; n];
    visit(dists, 0, T::one(), &mut choice, &mut mass);
    Ok(ClusteringDistribution { num_mentions: n, outcomes: mass.into_iter().collect() })
}

fn visit<T: Real>(
    dists: &AntecedentDistributions<T>,
    i: usize,
    prob: T,
    choice: &mut [usize],
    mass: &mut BTreeMap<Clustering, T>,
) {
    if i == choice.len() {
        let mut uf = UnionFind::new(choice.len());
        for (m, &k) in choice.iter().enumerate() {
            if k > 0 {
                uf.union(m, k - 1);
            }
        }
        *mass.entry(Clustering::from_labels(&uf.canonical_labels())).or_insert(T::zero()) += prob;
        return;
    }
    for (k, &p) in dists.rows[i].iter().enumerate() {
        if p > T::zero() {
            choice[i] = k;
            visit(dists, i + 1, prob * p, choice, mass);
        }
    }
}
