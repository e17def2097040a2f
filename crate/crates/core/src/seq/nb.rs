use serde::{Deserialize, Serialize};

use super::features::BinaryDocument;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bernoulli Naive Bayes over a fixed binary feature space. Index 0 of each
/// per-class array is the negative class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbModel<T> {
    pub log_prior: [T; 2],
    pub log_feature_on: [Vec<T>; 2],
    pub log_feature_off: [Vec<T>; 2],
    pub alpha: T,
    /// `Σⱼ log P(feature j off | class)`, cached for scoring.
    off_total: [T; 2],
}

impl<T: Real> NbModel<T> {
    pub fn num_features(&self) -> usize {
        self.log_feature_on[0].len()
    }

    /// Class log-odds `log P(y=1|x) − log P(y=0|x)`.
    pub fn log_odds(&self, features: &[usize]) -> T {
        let score = |c: usize| {
            let mut s = self.log_prior[c] + self.off_total[c];
            for &j in features.iter().filter(|&&j| j < self.num_features()) {
                s += self.log_feature_on[c][j] - self.log_feature_off[c][j];
            }
            s
        };
        score(1) - score(0)
    }
}

/// `P(on | class) = (count_on + α) / (n_class + 2α)`.
pub fn train_bernoulli_nb<T: Real>(docs: &[BinaryDocument], num_features: usize, alpha: T) -> Result<NbModel<T>> {
    if docs.is_empty() {
        return Err(Error::NoData);
    }
    if !(alpha > T::zero()) {
        return Err(Error::param("smoothing pseudocount must be positive"));
    }
    let mut class_count = [0usize; 2];
    let mut on_count = [vec![0usize; num_features], vec![0usize; num_features]];
    for doc in docs {
        let c = doc.label as usize;
        class_count[c] += 1;
        for &j in &doc.features {
            if j >= num_features {
                return Err(Error::input(format!("feature id {j} outside vocabulary of {num_features}")));
            }
            on_count[c][j] += 1;
        }
    }
    if class_count.contains(&0) {
        return Err(Error::Training("corpus contains a single class".into()));
    }

    let n = T::from_count(docs.len());
    let two = T::lit(2.0);
    let mut log_on = [Vec::new(), Vec::new()];
    let mut log_off = [Vec::new(), Vec::new()];
    let mut log_prior = [T::zero(); 2];
    let mut off_total = [T::zero(); 2];
    for c in 0..2 {
        let nc = T::from_count(class_count[c]);
        log_prior[c] = (nc / n).ln();
        let denom = nc + two * alpha;
        for &count in &on_count[c] {
            let p_on = (T::from_count(count) + alpha) / denom;
            let p_off = (nc - T::from_count(count) + alpha) / denom;
            log_on[c].push(p_on.ln());
            log_off[c].push(p_off.ln());
        }
        off_total[c] = log_off[c].iter().copied().sum();
    }
    Ok(NbModel { log_prior, log_feature_on: log_on, log_feature_off: log_off, alpha, off_total })
}

/// `P(y = 1 | features)`; ids outside the model's vocabulary are ignored.
pub fn nb_posterior<T: Real>(model: &NbModel<T>, features: &[usize]) -> T {
    sigmoid(model.log_odds(features))
}

pub(crate) fn sigmoid<T: Real>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}
