use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// A document as a set of binary unigram features.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryDocument {
    /// Sorted, distinct feature ids.
    pub features: Vec<usize>,
    pub label: bool,
}

impl BinaryDocument {
    pub fn new(mut features: Vec<usize>, label: bool) -> Self {
        features.sort_unstable();
        features.dedup();
        Self { features, label }
    }
}

/// String-to-id mapping fixed at training time.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    index: HashMap<String, usize>,
    names: Vec<String>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vocabulary from every feature that appears in `docs`, in
    /// first-seen order.
    pub fn from_documents<'a, I, S>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a [S]>,
        S: AsRef<str> + 'a,
    {
        let mut vocab = Self::new();
        for doc in docs {
            for f in doc {
                vocab.insert(f.as_ref());
            }
        }
        vocab
    }

    pub fn insert(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.index.insert(name.to_owned(), id);
        self.names.push(name.to_owned());
        id
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Encodes a document; features outside the vocabulary are dropped.
    pub fn encode<S: AsRef<str>>(&self, features: &[S], label: bool) -> BinaryDocument {
        BinaryDocument::new(features.iter().filter_map(|f| self.get(f.as_ref())).collect(), label)
    }
}
