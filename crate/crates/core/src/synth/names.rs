//! Pronounceable pseudo-words for hashtag names and vocabularies.

use std::collections::HashSet;

use rand::Rng;

const ONSETS: &[&str] = &["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st", "tr"];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u"];

pub fn syllable_word<R: Rng>(rng: &mut R, syllables: usize) -> String {
    (0..syllables)
        .map(|_| format!("{}{}", ONSETS[rng.gen_range(0..ONSETS.len())], VOWELS[rng.gen_range(0..VOWELS.len())]))
        .collect()
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    c.next()
        .map(|f| f.to_ascii_uppercase().to_string() + c.as_str())
        .unwrap_or_default()
}

/// Draws words nobody else in the scenario has used.
#[derive(Debug, Default)]
pub struct NameGen {
    used: HashSet<String>,
}

impl NameGen {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reserve a word so it is never generated.
    pub fn reserve(&mut self, w: &str) {
        self.used.insert(w.to_ascii_lowercase());
    }

    pub fn word<R: Rng>(&mut self, rng: &mut R) -> String {
        loop {
            let n = rng.gen_range(2..=3);
            let w = syllable_word(rng, n);
            if self.used.insert(w.clone()) {
                return w;
            }
        }
    }

    /// A camel-cased hashtag body of one or two words, unique as a whole.
    pub fn hashtag<R: Rng>(&mut self, rng: &mut R) -> String {
        loop {
            let parts = rng.gen_range(1..=2);
            let words: Vec<String> = (0..parts)
                .map(|_| {
                    let n = rng.gen_range(2..=3);
                    capitalize(&syllable_word(rng, n))
                })
                .collect();
            let h = words.concat();
            if self.used.insert(h.to_ascii_lowercase()) {
                return h;
            }
        }
    }
}
