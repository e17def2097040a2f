use std::collections::BTreeMap;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::predicate::doc_attack_indicator;
use super::{AnnotatedDocument, Period};
use crate::coref::{antecedent_distributions, enumerate_clustering_distribution, sample_clustering};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::scalar::Real;

/// Posterior count samples for one country and period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventQueryResult {
    pub country: String,
    pub period_start: NaiveDate,
    /// Documents dated within the period; bounds every sample.
    pub num_documents: usize,
    /// `samples[s]`: number of qualifying documents under sample `s`.
    pub samples: Vec<u32>,
}

/// Stable 64-bit FNV-1a, used to key per-document random streams by id.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed for a document's clustering samples. Keyed by `doc_id` rather than
/// position, so adding or reordering documents leaves other draws intact.
pub fn document_seed(seed: u64, doc_id: &str) -> u64 {
    derive_seed(seed, fnv1a(doc_id.as_bytes()))
}

/// Per-document indicator samples for one country.
#[derive(Clone, Debug, PartialEq)]
pub struct EventAnalysis {
    pub country: String,
    pub num_samples: usize,
    docs: Vec<(String, NaiveDate)>,
    /// `indicators[d][s]`
    indicators: Vec<Vec<bool>>,
}

impl EventAnalysis {
    /// Draws `num_samples` clusterings per document (sample `s` of every
    /// document shares index `s`) and evaluates the document indicator.
    pub fn run<T: Real>(corpus: &[AnnotatedDocument<T>], country: &str, num_samples: usize, seed: u64) -> Result<Self> {
        if num_samples < 2 {
            return Err(Error::param("event aggregation needs at least 2 samples"));
        }
        let indicators = corpus
            .par_iter()
            .map(|doc| {
                let dists = antecedent_distributions(&doc.coref)?;
                let doc_seed = document_seed(seed, &doc.doc_id);
                (0..num_samples as u64)
                    .map(|s| doc_attack_indicator(&doc.mentions, country, &sample_clustering(&dists, doc_seed, s)))
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            country: country.to_owned(),
            num_samples,
            docs: corpus.iter().map(|d| (d.doc_id.clone(), d.date)).collect(),
            indicators,
        })
    }

    /// Count samples per period, for every period with at least one
    /// document, in chronological order.
    pub fn series(&self, period: Period) -> Vec<EventQueryResult> {
        let mut buckets: BTreeMap<NaiveDate, Vec<usize>> = BTreeMap::new();
        for (d, (_, date)) in self.docs.iter().enumerate() {
            buckets.entry(period.start(*date)).or_default().push(d);
        }
        buckets
            .into_iter()
            .map(|(start, docs)| {
                let mut samples = vec![0u32; self.num_samples];
                for &d in &docs {
                    for (count, &hit) in samples.iter_mut().zip(&self.indicators[d]) {
                        *count += hit as u32;
                    }
                }
                EventQueryResult {
                    country: self.country.clone(),
                    period_start: start,
                    num_documents: docs.len(),
                    samples,
                }
            })
            .collect()
    }

    /// Fraction of samples in which each document qualifies.
    pub fn indicator_means(&self) -> Vec<f64> {
        self.indicators.iter().map(|v| v.iter().filter(|&&b| b).count() as f64 / self.num_samples as f64).collect()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.docs.iter().map(|(id, _)| id.as_str())
    }
}

pub fn event_count_series<T: Real>(
    corpus: &[AnnotatedDocument<T>],
    country: &str,
    num_samples: usize,
    seed: u64,
    period: Period,
) -> Result<Vec<EventQueryResult>> {
    Ok(EventAnalysis::run(corpus, country, num_samples, seed)?.series(period))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlaggedDocument {
    pub doc_id: String,
    pub country: String,
    pub indicator_mean: f64,
}

/// Documents whose indicator mean lies in `[lo, hi]`.
pub fn high_uncertainty_documents(analysis: &EventAnalysis, lo: f64, hi: f64) -> Vec<FlaggedDocument> {
    analysis
        .doc_ids()
        .zip(analysis.indicator_means())
        .filter(|(_, m)| (lo..=hi).contains(m))
        .map(|(id, m)| FlaggedDocument { doc_id: id.to_owned(), country: analysis.country.clone(), indicator_mean: m })
        .collect()
}

/// Exact posterior mean count per period, by enumerating every document's
/// clustering distribution. Documents must be small enough to enumerate.
pub fn exact_period_means<T: Real>(
    corpus: &[AnnotatedDocument<T>],
    country: &str,
    period: Period,
) -> Result<Vec<(NaiveDate, T)>> {
    let mut means: BTreeMap<NaiveDate, T> = BTreeMap::new();
    for doc in corpus {
        let dist = enumerate_clustering_distribution(&antecedent_distributions(&doc.coref)?)?;
        let mut p = T::zero();
        for (c, mass) in &dist.outcomes {
            if doc_attack_indicator(&doc.mentions, country, c)? {
                p += *mass;
            }
        }
        *means.entry(period.start(doc.date)).or_insert(T::zero()) += p;
    }
    Ok(means.into_iter().collect())
}
