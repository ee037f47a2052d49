use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{read_text, tsv_pairs};
use crate::{Error, Result};

/// Coarse Twitter tagset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PosTag {
    #[serde(rename = "^")]
    ProperNoun,
    #[serde(rename = "N")]
    CommonNoun,
    #[serde(rename = "O")]
    Pronoun,
    #[serde(rename = "V")]
    Verb,
    #[serde(rename = "A")]
    Adjective,
    #[serde(rename = "R")]
    Adverb,
    #[serde(rename = "D")]
    Determiner,
    #[serde(rename = "P")]
    Adposition,
    #[serde(rename = "X")]
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 9] = [
        PosTag::ProperNoun,
        PosTag::CommonNoun,
        PosTag::Pronoun,
        PosTag::Verb,
        PosTag::Adjective,
        PosTag::Adverb,
        PosTag::Determiner,
        PosTag::Adposition,
        PosTag::Other,
    ];

    pub fn symbol(self) -> char {
        match self {
            PosTag::ProperNoun => '^',
            PosTag::CommonNoun => 'N',
            PosTag::Pronoun => 'O',
            PosTag::Verb => 'V',
            PosTag::Adjective => 'A',
            PosTag::Adverb => 'R',
            PosTag::Determiner => 'D',
            PosTag::Adposition => 'P',
            PosTag::Other => 'X',
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for PosTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PosTag::ALL
            .into_iter()
            .find(|t| s.len() == 1 && s.starts_with(t.symbol()))
            .ok_or_else(|| Error::invalid(format!("unknown POS tag {s:?}")))
    }
}

/// Anything that assigns one tag per word.
pub trait PosTagger {
    fn tag(&self, words: &[&str]) -> Result<Vec<PosTag>>;
}

/// Word -> tag lookup with suffix and capitalization fallbacks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PosLexicon {
    entries: HashMap<String, PosTag>,
}

const SUFFIX_RULES: [(&str, PosTag); 6] = [
    ("ly", PosTag::Adverb),
    ("ing", PosTag::Verb),
    ("ed", PosTag::Verb),
    ("ous", PosTag::Adjective),
    ("ful", PosTag::Adjective),
    ("ive", PosTag::Adjective),
];

impl PosLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, word: &str, tag: PosTag) {
        self.entries.insert(word.to_lowercase(), tag);
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let mut lex = PosLexicon::new();
        for row in tsv_pairs(path, &text) {
            let (line, word, tag) = row?;
            let tag: PosTag = tag.parse().map_err(|e: Error| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            lex.insert(word, tag);
        }
        Ok(lex)
    }

    /// Tag a single word: lexicon, then numerals as `X`, suffix rules,
    /// capitalized as proper noun, otherwise common noun.
    pub fn tag_word(&self, word: &str) -> PosTag {
        let lower = word.to_lowercase();
        if let Some(&t) = self.entries.get(&lower) {
            return t;
        }
        if !lower.is_empty() && lower.chars().all(|c| c.is_ascii_digit()) {
            return PosTag::Other;
        }
        for (suffix, tag) in SUFFIX_RULES {
            // keep a stem of at least two characters so "red" or "fly" stay nouns
            if lower.len() >= suffix.len() + 2 && lower.ends_with(suffix) {
                return tag;
            }
        }
        if word.chars().next().is_some_and(char::is_uppercase) {
            return PosTag::ProperNoun;
        }
        PosTag::CommonNoun
    }
}

impl PosTagger for PosLexicon {
    fn tag(&self, words: &[&str]) -> Result<Vec<PosTag>> {
        if words.is_empty() {
            return Err(Error::invalid("cannot tag an empty word list"));
        }
        Ok(words.iter().map(|w| self.tag_word(w)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_then_fallbacks() {
        let mut lex = PosLexicon::new();
        lex.insert("high", PosTag::Adjective);
        lex.insert("school", PosTag::CommonNoun);
        assert_eq!(lex.tag(&["high", "school"]).unwrap(), vec![PosTag::Adjective, PosTag::CommonNoun]);
        assert_eq!(lex.tag(&["Wikipedia"]).unwrap(), vec![PosTag::ProperNoun]);
        assert!(lex.tag(&[]).is_err());
    }

    #[test]
    fn suffix_rules() {
        let lex = PosLexicon::new();
        let got = lex
            .tag(&["quickly", "Answering", "legalized", "famous", "hopeful", "massive", "blackout", "red", "2012"])
            .unwrap();
        use PosTag::*;
        assert_eq!(got, vec![Adverb, Verb, Verb, Adjective, Adjective, Adjective, CommonNoun, CommonNoun, Other]);
    }

    #[test]
    fn tag_symbols_round_trip() {
        for t in PosTag::ALL {
            assert_eq!(t.symbol().to_string().parse::<PosTag>().unwrap(), t);
        }
        assert!("Z".parse::<PosTag>().is_err());
    }
}
