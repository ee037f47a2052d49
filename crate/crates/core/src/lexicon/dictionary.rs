use std::collections::HashSet;
use std::path::Path;

use super::read_text;
use crate::{Error, Result};

/// Lowercased word set deciding in-vocabulary (INV) vs out-of-vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    words: HashSet<String>,
}

impl Dictionary {
    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: HashSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        if words.is_empty() {
            return Err(Error::invalid("dictionary is empty"));
        }
        Ok(Dictionary { words })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        Dictionary::from_words(text.lines()).map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "dictionary has no words".into(),
        })
    }

    pub fn is_inv(&self, word: &str) -> Result<bool> {
        if word.is_empty() {
            return Err(Error::invalid("empty word"));
        }
        Ok(self.contains(word))
    }

    /// Membership without the empty-word check.
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
