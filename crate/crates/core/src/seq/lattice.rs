//! Linear-chain potentials and exact marginal inference.
//!
//! A [`TagLattice`] holds log-potentials for a single sentence; HMM log
//! probabilities and externally trained CRF weights both fit. Inference runs
//! the forward and backward recursions in log space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{log_sum_exp, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TagLattice<T> {
    /// `emissions[t][k]`: score of tag `k` at position `t`.
    pub emissions: Vec<Vec<T>>,
    /// `transitions[j][k]`: score of tag `j` followed by tag `k`.
    pub transitions: Vec<Vec<T>>,
    pub start: Vec<T>,
    pub stop: Vec<T>,
}

impl<T: Real> TagLattice<T> {
    /// Validates shapes and finiteness. Missing start/stop scores are zero.
    pub fn new(
        emissions: Vec<Vec<T>>,
        transitions: Vec<Vec<T>>,
        start: Option<Vec<T>>,
        stop: Option<Vec<T>>,
    ) -> Result<Self> {
        let k = transitions.len();
        if k == 0 {
            return Err(Error::input("lattice has an empty tagset"));
        }
        if emissions.is_empty() {
            return Err(Error::input("lattice has no positions"));
        }
        if transitions.iter().any(|row| row.len() != k) {
            return Err(Error::input("transition matrix is not square"));
        }
        if let Some(t) = emissions.iter().position(|row| row.len() != k) {
            return Err(Error::input(format!("emission row {t} does not have {k} entries")));
        }
        let start = start.unwrap_or_else(|| vec![T::zero(); k]);
        let stop = stop.unwrap_or_else(|| vec![T::zero(); k]);
        if start.len() != k || stop.len() != k {
            return Err(Error::input("start/stop vectors do not match the tagset"));
        }
        let lattice = Self { emissions, transitions, start, stop };
        if !lattice.all_finite() {
            return Err(Error::input("lattice contains non-finite scores"));
        }
        Ok(lattice)
    }

    pub fn len(&self) -> usize {
        self.emissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emissions.is_empty()
    }

    pub fn num_tags(&self) -> usize {
        self.transitions.len()
    }

    fn all_finite(&self) -> bool {
        self.emissions.iter().chain(&self.transitions).chain([&self.start, &self.stop]).flatten().all(|x| x.is_finite())
    }

    /// Total score of one tag path.
    pub fn path_score(&self, tags: &[usize]) -> T {
        let mut score = self.start[tags[0]] + self.stop[tags[tags.len() - 1]];
        for (t, &k) in tags.iter().enumerate() {
            score += self.emissions[t][k];
            if t > 0 {
                score += self.transitions[tags[t - 1]][k];
            }
        }
        score
    }
}

/// Posterior marginals of a lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Marginals<T> {
    /// `single[t][k] = P(y_t = k | x)`
    pub single: Vec<Vec<T>>,
    /// `pair[t][j][k] = P(y_t = j, y_{t+1} = k | x)`
    pub pair: Vec<Vec<Vec<T>>>,
    pub log_partition: T,
}

impl<T: Real> Marginals<T> {
    /// Tag with the highest single marginal at each position.
    pub fn max_marginal_tags(&self) -> Vec<usize> {
        self.single
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold((0, T::neg_infinity()), |best, (k, &p)| if p > best.1 { (k, p) } else { best })
                    .0
            })
            .collect()
    }
}

pub fn forward_backward<T: Real>(lattice: &TagLattice<T>) -> Result<Marginals<T>> {
    if lattice.is_empty() {
        return Err(Error::input("lattice has no positions"));
    }
    if !lattice.all_finite() {
        return Err(Error::input("lattice contains non-finite scores"));
    }
    let len = lattice.len();
    let k = lattice.num_tags();
    let em = &lattice.emissions;
    let tr = &lattice.transitions;

    let mut alpha = vec![vec![T::zero(); k]; len];
    for j in 0..k {
        alpha[0][j] = lattice.start[j] + em[0][j];
    }
    let mut scratch = vec![T::zero(); k];
    for t in 1..len {
        for cur in 0..k {
            for prev in 0..k {
                scratch[prev] = alpha[t - 1][prev] + tr[prev][cur];
            }
            alpha[t][cur] = log_sum_exp(&scratch) + em[t][cur];
        }
    }

    let mut beta = vec![vec![T::zero(); k]; len];
    beta[len - 1].clone_from(&lattice.stop);
    for t in (0..len - 1).rev() {
        for cur in 0..k {
            for next in 0..k {
                scratch[next] = tr[cur][next] + em[t + 1][next] + beta[t + 1][next];
            }
            beta[t][cur] = log_sum_exp(&scratch);
        }
    }

    for j in 0..k {
        scratch[j] = alpha[len - 1][j] + lattice.stop[j];
    }
    let log_z = log_sum_exp(&scratch);
    if !log_z.is_finite() {
        return Err(Error::input("lattice partition function is not finite"));
    }

    let single = (0..len).map(|t| (0..k).map(|j| (alpha[t][j] + beta[t][j] - log_z).exp()).collect()).collect();
    let pair = (0..len - 1)
        .map(|t| {
            (0..k)
                .map(|j| {
                    (0..k).map(|n| (alpha[t][j] + tr[j][n] + em[t + 1][n] + beta[t + 1][n] - log_z).exp()).collect()
                })
                .collect()
        })
        .collect();

    Ok(Marginals { single, pair, log_partition: log_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::softmax;
    use proptest::prelude::*;

    /// Marginals by summing over every tag path.
    fn enumerate(lattice: &TagLattice<f64>) -> Marginals<f64> {
        let (len, k) = (lattice.len(), lattice.num_tags());
        let total = k.pow(len as u32);
        let mut paths = Vec::with_capacity(total);
        for code in 0..total {
            let mut c = code;
            let tags: Vec<usize> = (0..len)
                .map(|_| {
                    let tag = c % k;
                    c /= k;
                    tag
                })
                .collect();
            let w = lattice.path_score(&tags);
            paths.push((tags, w));
        }
        let z: f64 = paths.iter().map(|(_, w)| w.exp()).sum();
        let mut single = vec![vec![0.0; k]; len];
        let mut pair = vec![vec![vec![0.0; k]; k]; len.saturating_sub(1)];
        for (tags, w) in &paths {
            let p = w.exp() / z;
            for t in 0..len {
                single[t][tags[t]] += p;
                if t + 1 < len {
                    pair[t][tags[t]][tags[t + 1]] += p;
                }
            }
        }
        Marginals { single, pair, log_partition: z.ln() }
    }

    #[test]
    fn length_one_is_softmax() {
        let lattice = TagLattice::<f64>::new(
            vec![vec![0.5, -1.0, 2.0]],
            vec![vec![0.0; 3]; 3],
            Some(vec![0.1, 0.2, 0.3]),
            Some(vec![-0.3, 0.0, 0.4]),
        )
        .unwrap();
        let m = forward_backward(&lattice).unwrap();
        let expected = softmax(&[0.5 + 0.1 - 0.3, -1.0 + 0.2, 2.0 + 0.3 + 0.4]);
        for (a, b) in m.single[0].iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(m.pair.is_empty());
    }

    #[test]
    fn uniform_potentials_give_uniform_marginals() {
        let k = 4;
        let lattice = TagLattice::<f64>::new(vec![vec![0.7; k]; 5], vec![vec![-0.2; k]; k], None, None).unwrap();
        let m = forward_backward(&lattice).unwrap();
        for row in &m.single {
            for &p in row {
                assert!((p - 0.25).abs() < 1e-12);
            }
        }
        for t in &m.pair {
            for row in t {
                for &p in row {
                    assert!((p - 1.0 / 16.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn non_finite_rejected() {
        let err = TagLattice::new(vec![vec![f64::NAN, 0.0]], vec![vec![0.0; 2]; 2], None, None);
        assert!(err.is_err());
        let bad = TagLattice {
            emissions: vec![vec![f64::INFINITY]],
            transitions: vec![vec![0.0]],
            start: vec![0.0],
            stop: vec![0.0],
        };
        assert!(forward_backward(&bad).is_err());
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(TagLattice::new(vec![vec![0.0; 3]], vec![vec![0.0; 2]; 2], None, None).is_err());
        assert!(TagLattice::new(vec![vec![0.0; 2]], vec![vec![0.0; 2]; 2], Some(vec![0.0]), None).is_err());
        assert!(TagLattice::<f64>::new(vec![], vec![vec![0.0; 2]; 2], None, None).is_err());
    }

    #[test]
    fn single_precision_marginals_normalize() {
        let lattice = TagLattice::new(
            vec![vec![0.1f32, 0.9], vec![1.5, -0.5], vec![0.0, 0.3]],
            vec![vec![0.2, -0.4], vec![0.6, 0.1]],
            None,
            None,
        )
        .unwrap();
        let m = forward_backward(&lattice).unwrap();
        for row in &m.single {
            assert!((row.iter().sum::<f32>() - 1.0).abs() < 1e-5);
        }
    }

    fn lattice_strategy() -> impl Strategy<Value = TagLattice<f64>> {
        (1usize..=4, 1usize..=3).prop_flat_map(|(len, k)| {
            (
                prop::collection::vec(prop::collection::vec(-3.0f64..3.0, k), len),
                prop::collection::vec(prop::collection::vec(-3.0f64..3.0, k), k),
                prop::collection::vec(-3.0f64..3.0, k),
                prop::collection::vec(-3.0f64..3.0, k),
            )
                .prop_map(|(e, t, s, p)| TagLattice::new(e, t, Some(s), Some(p)).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matches_path_enumeration(lattice in lattice_strategy()) {
            let fast = forward_backward(&lattice).unwrap();
            let slow = enumerate(&lattice);
            prop_assert!((fast.log_partition - slow.log_partition).abs() < 1e-9);
            for (a, b) in fast.single.iter().flatten().zip(slow.single.iter().flatten()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
            for (a, b) in fast.pair.iter().flatten().flatten().zip(slow.pair.iter().flatten().flatten()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
            for (t, pair) in fast.pair.iter().enumerate() {
                for j in 0..lattice.num_tags() {
                    let row: f64 = pair[j].iter().sum();
                    prop_assert!((row - fast.single[t][j]).abs() < 1e-9);
                    let col: f64 = pair.iter().map(|r| r[j]).sum();
                    prop_assert!((col - fast.single[t + 1][j]).abs() < 1e-9);
                }
                prop_assert!((pair.iter().flatten().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }
}
