//! First-order HMM tagger with additive (Dirichlet MAP) smoothing.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::lattice::TagLattice;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One sentence as `(word, tag)` tokens.
pub type TaggedSentence = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HmmModel<T> {
    /// Sorted tagset; tag `k` is row/column `k` of both tables.
    pub tags: Vec<String>,
    pub words: HashMap<String, usize>,
    /// `(K+2) × (K+2)`; row/column `K` is START and `K+1` is STOP.
    pub log_transition: Vec<Vec<T>>,
    /// `K × (V+1)`; column `V` is the unknown-word column.
    pub log_emission: Vec<Vec<T>>,
    pub pseudocount: T,
}

impl<T: Real> HmmModel<T> {
    pub fn num_tags(&self) -> usize {
        self.tags.len()
    }

    pub fn start(&self) -> usize {
        self.tags.len()
    }

    pub fn stop(&self) -> usize {
        self.tags.len() + 1
    }

    pub fn unk(&self) -> usize {
        self.words.len()
    }

    pub fn tag_id(&self, tag: &str) -> Option<usize> {
        self.tags.binary_search_by(|t| t.as_str().cmp(tag)).ok()
    }

    /// Emission column for `word`, falling back to the unknown column.
    pub fn word_id(&self, word: &str) -> usize {
        self.words.get(word).copied().unwrap_or(self.unk())
    }

    /// Log-probability lattice for a sentence.
    pub fn lattice<S: AsRef<str>>(&self, words: &[S]) -> Result<TagLattice<T>> {
        let k = self.num_tags();
        let emissions = words
            .iter()
            .map(|w| {
                let col = self.word_id(w.as_ref());
                (0..k).map(|t| self.log_emission[t][col]).collect()
            })
            .collect();
        let transitions = (0..k).map(|j| self.log_transition[j][..k].to_vec()).collect();
        let start = self.log_transition[self.start()][..k].to_vec();
        let stop = (0..k).map(|j| self.log_transition[j][self.stop()]).collect();
        TagLattice::new(emissions, transitions, Some(start), Some(stop))
    }
}

/// Counts transitions (with START/STOP) and emissions, adding `pseudocount`
/// to every reachable cell: `P(t'|t) = (c(t,t') + α) / (c(t) + α(K+1))` and
/// `P(w|t) = (c(t,w) + α) / (c(t) + α(V+1))`.
pub fn train_hmm<T: Real>(sentences: &[TaggedSentence], pseudocount: T) -> Result<HmmModel<T>> {
    if sentences.iter().all(Vec::is_empty) {
        return Err(Error::Training("empty training corpus".into()));
    }
    if !(pseudocount > T::zero()) {
        return Err(Error::param("pseudocount must be positive"));
    }
    let tags: Vec<String> =
        sentences.iter().flatten().map(|(_, t)| t.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut words = HashMap::new();
    for (w, _) in sentences.iter().flatten() {
        let next = words.len();
        words.entry(w.clone()).or_insert(next);
    }
    let k = tags.len();
    let v = words.len();
    let (start, stop) = (k, k + 1);
    let tag_of = |t: &str| tags.binary_search_by(|x| x.as_str().cmp(t)).unwrap();

    let mut trans = vec![vec![0usize; k + 2]; k + 2];
    let mut emit = vec![vec![0usize; v + 1]; k];
    for sentence in sentences.iter().filter(|s| !s.is_empty()) {
        let mut prev = start;
        for (w, t) in sentence {
            let cur = tag_of(t);
            trans[prev][cur] += 1;
            emit[cur][words[w]] += 1;
            prev = cur;
        }
        trans[prev][stop] += 1;
    }

    let alpha = pseudocount;
    let mut log_transition = vec![vec![T::neg_infinity(); k + 2]; k + 2];
    for from in (0..k).chain([start]) {
        let total: usize = trans[from].iter().sum();
        let denom = T::from_count(total) + alpha * T::from_count(k + 1);
        for to in (0..k).chain([stop]) {
            log_transition[from][to] = ((T::from_count(trans[from][to]) + alpha) / denom).ln();
        }
    }
    log_transition[stop][stop] = T::zero();

    let log_emission = emit
        .iter()
        .map(|row| {
            let total: usize = row.iter().sum();
            let denom = T::from_count(total) + alpha * T::from_count(v + 1);
            row.iter().map(|&c| ((T::from_count(c) + alpha) / denom).ln()).collect()
        })
        .collect();

    Ok(HmmModel { tags, words, log_transition, log_emission, pseudocount })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::lattice::forward_backward;

    fn sentence(s: &str) -> TaggedSentence {
        s.split_whitespace()
            .map(|tok| {
                let (w, t) = tok.rsplit_once('/').unwrap();
                (w.to_string(), t.to_string())
            })
            .collect()
    }

    #[test]
    fn one_sentence_counts() {
        let m = train_hmm(&[sentence("a/X b/Y")], 1.0f64).unwrap();
        let (x, y) = (m.tag_id("X").unwrap(), m.tag_id("Y").unwrap());
        assert!((m.log_transition[x][y].exp() - 2.0 / 4.0).abs() < 1e-12);
        assert!((m.log_transition[x][m.stop()].exp() - 1.0 / 4.0).abs() < 1e-12);
        assert!((m.log_transition[m.start()][x].exp() - 2.0 / 4.0).abs() < 1e-12);
        // P(a | X) = (1 + 1) / (1 + 2 + 1)
        assert!((m.log_emission[x][m.word_id("a")].exp() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tables_normalize_and_have_full_support() {
        let corpus = [sentence("the/D dog/N runs/V"), sentence("a/D cat/N"), sentence("dogs/N run/V fast/R")];
        let m = train_hmm(&corpus, 1.0f64).unwrap();
        for row in m.log_transition.iter().chain(&m.log_emission) {
            let s: f64 = row.iter().map(|x| x.exp()).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let k = m.num_tags();
        for from in (0..k).chain([m.start()]) {
            for to in (0..k).chain([m.stop()]) {
                assert!(m.log_transition[from][to].exp() > 0.0);
            }
        }
        assert!(m.log_emission.iter().flatten().all(|x| x.exp() > 0.0));
    }

    #[test]
    fn unknown_words_use_unk_column() {
        let m = train_hmm(&[sentence("a/X b/Y")], 1.0f64).unwrap();
        assert_eq!(m.word_id("never-seen"), m.unk());
        let lattice = m.lattice(&["never-seen"]).unwrap();
        for t in 0..m.num_tags() {
            assert_eq!(lattice.emissions[0][t], m.log_emission[t][m.unk()]);
        }
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(train_hmm::<f64>(&[], 1.0), Err(Error::Training(_))));
        assert!(matches!(train_hmm::<f64>(&[vec![]], 1.0), Err(Error::Training(_))));
    }

    #[test]
    fn lattice_marginals_are_proper() {
        let corpus = [sentence("the/D dog/N runs/V"), sentence("the/D run/N")];
        let m = train_hmm(&corpus, 0.5f64).unwrap();
        let marg = forward_backward(&m.lattice(&["the", "dog", "zzz"]).unwrap()).unwrap();
        for row in &marg.single {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(marg.max_marginal_tags()[0], m.tag_id("D").unwrap());
    }
}
