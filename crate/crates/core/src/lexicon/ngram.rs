use std::collections::HashMap;
use std::path::Path;

use super::{read_text, tsv_pairs};
use crate::{Error, Result};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 5;

/// Frequencies of 2- to 5-word n-grams from a reference English corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NgramTable {
    counts: HashMap<String, u64>,
}

fn normalize<S: AsRef<str>>(words: &[S]) -> String {
    words
        .iter()
        .map(|w| w.as_ref().to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

impl NgramTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add an n-gram given as space-separated words.
    pub fn insert(&mut self, ngram: &str, frequency: u64) -> Result<()> {
        let words: Vec<&str> = ngram.split_whitespace().collect();
        if !(MIN_ORDER..=MAX_ORDER).contains(&words.len()) {
            return Err(Error::invalid(format!("n-gram {ngram:?} has {} words", words.len())));
        }
        if frequency == 0 {
            return Err(Error::invalid(format!("n-gram {ngram:?} has zero frequency")));
        }
        self.counts.insert(normalize(&words), frequency);
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let mut table = NgramTable::new();
        for row in tsv_pairs(path, &text) {
            let (line, gram, freq) = row?;
            let parse_err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line,
                message,
            };
            let freq: u64 = freq
                .parse()
                .map_err(|_| parse_err(format!("bad frequency {freq:?}")))?;
            table.insert(gram, freq).map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(table)
    }

    /// Exact-match frequency (case-insensitive), 0 when absent.
    pub fn lookup<S: AsRef<str>>(&self, words: &[S]) -> Result<u64> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&words.len()) {
            return Err(Error::invalid(format!(
                "n-gram lookup needs {MIN_ORDER}..={MAX_ORDER} words, got {}",
                words.len()
            )));
        }
        Ok(self.counts.get(&normalize(words)).copied().unwrap_or(0))
    }

    /// All contiguous 2..5-word windows of `words` present in the table, with
    /// their frequencies.
    pub fn matches<S: AsRef<str>>(&self, words: &[S]) -> Vec<(String, u64)> {
        let mut out = Vec::new();
        for n in MIN_ORDER..=MAX_ORDER.min(words.len()) {
            for window in words.windows(n) {
                let key = normalize(window);
                if let Some(&f) = self.counts.get(&key) {
                    out.push((key, f));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}
