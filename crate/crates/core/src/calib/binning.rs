use std::cmp::Ordering;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::PredictionPair;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Contiguous bins over a sorted pair sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binning {
    pub bins: Vec<Range<usize>>,
    pub target_size: usize,
    /// Fewer pairs than the target size: one undersized bin.
    pub low_confidence: bool,
}

impl Binning {
    /// Equal-count bins for `n` sorted items. The k-th item (0-based) gets
    /// label `k / target_size`; a trailing bin smaller than the target is
    /// folded into its predecessor.
    pub fn adaptive(n: usize, target_size: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoData);
        }
        if target_size == 0 {
            return Err(Error::param("bin size must be positive"));
        }
        let mut bins: Vec<Range<usize>> =
            (0..n).step_by(target_size).map(|start| start..(start + target_size).min(n)).collect();
        if bins.len() >= 2 && bins.last().is_some_and(|b| b.len() < target_size) {
            let last = bins.pop().unwrap();
            bins.last_mut().unwrap().end = last.end;
        }
        Ok(Self { bins, target_size, low_confidence: n < target_size })
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.bins.iter().map(|b| b.len()).collect()
    }
}

/// Per-bin mean prediction, empirical frequency and size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinSummary<T> {
    pub q_hat: T,
    pub p_hat: T,
    pub size: usize,
}

impl<T: Real> BinSummary<T> {
    pub fn from_pairs(pairs: &[PredictionPair<T>]) -> Self {
        let n = T::from_count(pairs.len());
        let q_sum: T = pairs.iter().map(|p| p.q).sum();
        let positives = pairs.iter().filter(|p| p.y).count();
        Self { q_hat: q_sum / n, p_hat: T::from_count(positives) / n, size: pairs.len() }
    }

    /// Binomial standard error of `p_hat`, at most `0.5 / √size`.
    pub fn stderr(&self) -> T {
        (self.p_hat * (T::one() - self.p_hat) / T::from_count(self.size)).sqrt()
    }
}

/// Stable ascending sort by `q`; ties keep input order.
pub fn sort_pairs<T: Real>(pairs: &[PredictionPair<T>]) -> Vec<PredictionPair<T>> {
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.q.partial_cmp(&b.q).unwrap_or(Ordering::Equal));
    sorted
}

pub fn sort_and_bin<T: Real>(
    pairs: &[PredictionPair<T>],
    target_size: usize,
) -> Result<(Vec<PredictionPair<T>>, Binning)> {
    let binning = Binning::adaptive(pairs.len(), target_size)?;
    Ok((sort_pairs(pairs), binning))
}

pub fn bin_stats<T: Real>(binning: &Binning, sorted: &[PredictionPair<T>]) -> Vec<BinSummary<T>> {
    binning.bins.iter().map(|range| BinSummary::from_pairs(&sorted[range.clone()])).collect()
}

/// `√((1/N) Σᵢ |Bᵢ| (q̂ᵢ − p̂ᵢ)²)`
pub fn calibration_error<T: Real>(summaries: &[BinSummary<T>], n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::NoData);
    }
    Ok(weighted_rmse(summaries.iter().map(|b| (b.q_hat, b.p_hat, b.size)), n))
}

pub(crate) fn weighted_rmse<T: Real>(bins: impl Iterator<Item = (T, T, usize)>, n: usize) -> T {
    let total: T = bins.map(|(q, p, size)| T::from_count(size) * (q - p) * (q - p)).sum();
    (total / T::from_count(n)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(q: f64, y: u8) -> PredictionPair<f64> {
        PredictionPair::new(q, y == 1).unwrap()
    }

    #[test]
    fn ten_pairs_bin_size_three() {
        let pairs: Vec<_> = (0..10).map(|i| pair(i as f64 / 10.0, 0)).collect();
        let (_, b) = sort_and_bin(&pairs, 3).unwrap();
        assert_eq!(b.sizes(), vec![3, 3, 4]);
        assert!(!b.low_confidence);
    }

    #[test]
    fn fewer_pairs_than_bin_size() {
        let pairs: Vec<_> = (0..5).map(|i| pair(i as f64 / 5.0, 1)).collect();
        let (_, b) = sort_and_bin(&pairs, 10).unwrap();
        assert_eq!(b.sizes(), vec![5]);
        assert!(b.low_confidence);
    }

    #[test]
    fn ties_keep_input_order() {
        let pairs: Vec<_> = [1, 0, 1, 1, 0, 0].iter().map(|&y| pair(0.5, y)).collect();
        let (sorted, b) = sort_and_bin(&pairs, 3).unwrap();
        assert_eq!(b.sizes(), vec![3, 3]);
        assert_eq!(sorted, pairs);
        let stats = bin_stats(&b, &sorted);
        assert!((stats[0].p_hat - 2.0 / 3.0).abs() < 1e-15);
        assert!((stats[1].p_hat - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_and_zero_bin_size_rejected() {
        assert_eq!(sort_and_bin::<f64>(&[], 3).unwrap_err(), Error::NoData);
        assert!(matches!(sort_and_bin(&[pair(0.1, 0)], 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn stats_average_within_bin() {
        let s = BinSummary::from_pairs(&[pair(0.2, 0), pair(0.4, 1)]);
        assert!((s.q_hat - 0.3).abs() < 1e-15);
        assert_eq!(s.p_hat, 0.5);

        let s = BinSummary::from_pairs(&[pair(0.1, 0), pair(0.3, 0), pair(0.5, 1), pair(0.7, 1)]);
        assert!((s.q_hat - 0.4).abs() < 1e-15);
        assert_eq!(s.p_hat, 0.5);

        let s = BinSummary::from_pairs(&[pair(0.9, 1), pair(0.2, 1)]);
        assert_eq!(s.p_hat, 1.0);
    }

    #[test]
    fn calibration_error_examples() {
        let perfect = [BinSummary { q_hat: 0.3, p_hat: 0.3, size: 4 }];
        assert_eq!(calibration_error(&perfect, 4).unwrap(), 0.0);

        let one = [BinSummary::<f64> { q_hat: 0.7, p_hat: 0.5, size: 100 }];
        assert!((calibration_error(&one, 100).unwrap() - 0.2).abs() < 1e-12);

        let two = [BinSummary { q_hat: 0.6, p_hat: 0.5, size: 1 }, BinSummary { q_hat: 0.1, p_hat: 0.4, size: 3 }];
        assert!((calibration_error(&two, 4).unwrap() - 0.07f64.sqrt()).abs() < 1e-12);
        assert!((calibration_error(&two, 4).unwrap() - 0.2645751).abs() < 1e-7);

        assert_eq!(calibration_error::<f64>(&[], 0).unwrap_err(), Error::NoData);
    }

    #[test]
    fn works_in_single_precision() {
        let pairs: Vec<_> = (0..7).map(|i| PredictionPair::new(i as f32 / 7.0, i > 3).unwrap()).collect();
        let (sorted, b) = sort_and_bin(&pairs, 2).unwrap();
        assert_eq!(b.sizes(), vec![2, 2, 3]);
        let err = calibration_error(&bin_stats(&b, &sorted), 7).unwrap();
        assert!((0.0..=1.0).contains(&err));
    }

    proptest! {
        #[test]
        fn binning_partitions_index_range(n in 1usize..500, beta in 1usize..60) {
            let b = Binning::adaptive(n, beta).unwrap();
            let mut next = 0;
            for (i, r) in b.bins.iter().enumerate() {
                prop_assert_eq!(r.start, next);
                next = r.end;
                if i + 1 < b.len() {
                    prop_assert_eq!(r.len(), beta);
                } else if b.len() >= 2 {
                    prop_assert!(r.len() >= beta && r.len() < 2 * beta);
                } else {
                    prop_assert_eq!(r.len(), n);
                    prop_assert!(n < 2 * beta);
                }
            }
            prop_assert_eq!(next, n);
        }

        #[test]
        fn stderr_bounded_and_error_in_unit_interval(
            raw in prop::collection::vec((0.0f64..=1.0, any::<bool>()), 1..300),
            beta in 1usize..40,
        ) {
            let pairs: Vec<_> = raw.iter().map(|&(q, y)| PredictionPair::new(q, y).unwrap()).collect();
            let (sorted, b) = sort_and_bin(&pairs, beta).unwrap();
            let stats = bin_stats(&b, &sorted);
            for s in &stats {
                prop_assert!(s.stderr() <= 0.5 / (s.size as f64).sqrt() + 1e-15);
                prop_assert!((s.p_hat * s.size as f64 - (s.p_hat * s.size as f64).round()).abs() < 1e-9);
            }
            let err = calibration_error(&stats, pairs.len()).unwrap();
            prop_assert!((0.0..=1.0).contains(&err));
        }

        #[test]
        fn replicating_every_pair_preserves_error(
            raw in prop::collection::vec((0.0f64..=1.0, any::<bool>()), 1..120),
            beta in 1usize..20,
            copies in 2usize..5,
        ) {
            // Replicating each pair `copies` times and scaling the bin size by
            // the same factor reproduces exactly the same bins.
            let pairs: Vec<_> = raw.iter().map(|&(q, y)| PredictionPair::new(q, y).unwrap()).collect();
            let mut replicated = Vec::new();
            for p in &pairs {
                replicated.extend(std::iter::repeat_n(*p, copies));
            }
            let (s1, b1) = sort_and_bin(&pairs, beta).unwrap();
            let (s2, b2) = sort_and_bin(&replicated, beta * copies).unwrap();
            let e1 = calibration_error(&bin_stats(&b1, &s1), pairs.len()).unwrap();
            let e2 = calibration_error(&bin_stats(&b2, &s2), replicated.len()).unwrap();
            prop_assert!((e1 - e2).abs() < 1e-12);
        }
    }
}
