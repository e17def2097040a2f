//! Synthetic data generators with known ground truth.

use std::collections::BTreeSet;

use chrono::{Days, NaiveDate};
use rand::Rng;
use rand_distr::{Beta, Distribution, Normal};

use crate::calib::PredictionPair;
use crate::coref::synth::{synthetic_document, ScoreLaw};
use crate::events::{AnnotatedDocument, MentionAttributes};
use crate::rng::stream_rng;
use crate::scalar::Real;
use crate::seq::{BinaryDocument, TagLattice};

/// `q ~ Beta(a, b)`, `y ~ Bernoulli(q)`: calibrated by construction.
pub fn calibrated_pairs<T: Real>(n: usize, a: f64, b: f64, seed: u64) -> Vec<PredictionPair<T>> {
    let beta = Beta::new(a, b).expect("valid beta parameters");
    let mut rng = stream_rng(seed, 0);
    (0..n)
        .map(|_| {
            let q: f64 = beta.sample(&mut rng);
            let y = rng.random::<f64>() < q;
            PredictionPair { q: T::lit(q), y }
        })
        .collect()
}

/// Binary-feature corpus in which informative features appear as several
/// identical copies, so their evidence is counted repeatedly by a model
/// that assumes conditional independence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DuplicatedFeatureCorpus {
    pub informative: usize,
    pub copies: usize,
    pub noise: usize,
    /// `P(on | y)` for an informative feature pointing at `y`; the opposite
    /// class sees `1 − strength`.
    pub strength: f64,
    pub positive_rate: f64,
}

impl Default for DuplicatedFeatureCorpus {
    fn default() -> Self {
        Self { informative: 8, copies: 5, noise: 20, strength: 0.65, positive_rate: 0.5 }
    }
}

impl DuplicatedFeatureCorpus {
    pub fn num_features(&self) -> usize {
        self.informative * self.copies + self.noise
    }

    pub fn generate(&self, n: usize, seed: u64) -> Vec<BinaryDocument> {
        let mut rng = stream_rng(seed, 1);
        (0..n)
            .map(|_| {
                let y = rng.random::<f64>() < self.positive_rate;
                let mut features = Vec::new();
                for f in 0..self.informative {
                    // Even features indicate the positive class, odd the negative.
                    let p = if (f % 2 == 0) == y { self.strength } else { 1.0 - self.strength };
                    if rng.random::<f64>() < p {
                        features.extend((0..self.copies).map(|c| f * self.copies + c));
                    }
                }
                let base = self.informative * self.copies;
                for j in 0..self.noise {
                    if rng.random::<f64>() < 0.3 {
                        features.push(base + j);
                    }
                }
                BinaryDocument::new(features, y)
            })
            .collect()
    }
}

/// Lattice with i.i.d. `N(0, scale²)` potentials.
pub fn random_lattice<T: Real, R: Rng>(len: usize, num_tags: usize, scale: f64, rng: &mut R) -> TagLattice<T> {
    let normal = Normal::new(0.0, scale).expect("valid scale");
    let mut row = |k: usize| (0..k).map(|_| T::lit(normal.sample(rng))).collect::<Vec<T>>();
    let emissions = (0..len).map(|_| row(num_tags)).collect();
    let transitions = (0..num_tags).map(|_| row(num_tags)).collect();
    let start = row(num_tags);
    let stop = row(num_tags);
    TagLattice::new(emissions, transitions, Some(start), Some(stop)).expect("finite potentials")
}

/// Small annotated documents for the event pipeline: 2 to 4 mentions each,
/// every mention tagged with at most one of `countries` and marked as an
/// attack agent with probability one half, dated uniformly over `days`
/// days from `first_day`.
pub fn synthetic_event_corpus<T: Real>(
    num_docs: usize,
    countries: &[&str],
    first_day: NaiveDate,
    days: u64,
    seed: u64,
) -> Vec<AnnotatedDocument<T>> {
    let mut rng = stream_rng(seed, 2);
    (0..num_docs)
        .map(|d| {
            let n = rng.random_range(2..=4);
            let mentions = (0..n)
                .map(|_| {
                    let pick = rng.random_range(0..=countries.len());
                    MentionAttributes {
                        countries: countries.get(pick).map(|c| c.to_string()).into_iter().collect::<BTreeSet<_>>(),
                        attack_agent: rng.random_bool(0.5),
                    }
                })
                .collect();
            let date = first_day + Days::new(rng.random_range(0..days.max(1)));
            let coref = synthetic_document(n, ScoreLaw::default(), &mut rng);
            AnnotatedDocument::new(format!("doc{d:04}"), date, mentions, coref).expect("mention counts agree")
        })
        .collect()
}
