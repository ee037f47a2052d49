use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_text, tsv_pairs};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityLabel {
    Begin(String),
    Inside(String),
    None,
}

impl EntityLabel {
    pub fn is_entity(&self) -> bool {
        !matches!(self, EntityLabel::None)
    }
}

impl fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityLabel::Begin(t) => write!(f, "B-{t}"),
            EntityLabel::Inside(t) => write!(f, "I-{t}"),
            EntityLabel::None => write!(f, "none"),
        }
    }
}

pub trait EntityTagger {
    fn tag(&self, words: &[&str]) -> Result<Vec<EntityLabel>>;
}

/// Phrase -> entity type gazetteer with longest-match BIO tagging.
///
/// The TSV label column holds the entity type (`person`, `product`, ...);
/// a `B-`/`I-` prefix is tolerated and stripped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityGazetteer {
    phrases: HashMap<String, String>,
    types: BTreeSet<String>,
    longest: usize,
}

fn entity_type(label: &str) -> &str {
    label
        .strip_prefix("B-")
        .or_else(|| label.strip_prefix("I-"))
        .unwrap_or(label)
}

impl EntityGazetteer {
    /// Build from `(phrase, type)` entries. When `allowed` is given every type
    /// must belong to it; otherwise the label set is whatever the entries use.
    pub fn from_entries<I, P, L>(entries: I, allowed: Option<&[&str]>) -> Result<Self>
    where
        I: IntoIterator<Item = (P, L)>,
        P: AsRef<str>,
        L: AsRef<str>,
    {
        let mut gaz = EntityGazetteer::default();
        for (phrase, label) in entries {
            let ty = entity_type(label.as_ref().trim());
            let valid = !ty.is_empty()
                && ty != "none"
                && ty.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
            if !valid {
                return Err(Error::invalid(format!("bad entity label {:?}", label.as_ref())));
            }
            if let Some(allowed) = allowed {
                if !allowed.contains(&ty) {
                    return Err(Error::invalid(format!("entity type {ty:?} not in the declared label set")));
                }
            }
            let words: Vec<String> = phrase
                .as_ref()
                .split_whitespace()
                .map(str::to_lowercase)
                .collect();
            if words.is_empty() {
                return Err(Error::invalid("empty gazetteer phrase"));
            }
            gaz.longest = gaz.longest.max(words.len());
            gaz.types.insert(ty.to_string());
            gaz.phrases.insert(words.join(" "), ty.to_string());
        }
        Ok(gaz)
    }

    pub fn load(path: &Path, allowed: Option<&[&str]>) -> Result<Self> {
        let text = read_text(path)?;
        let mut entries = Vec::new();
        for row in tsv_pairs(path, &text) {
            let (line, phrase, label) = row?;
            entries.push((line, phrase, label));
        }
        let mut gaz = EntityGazetteer::default();
        for (line, phrase, label) in entries {
            let one = EntityGazetteer::from_entries([(phrase, label)], allowed).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            gaz.longest = gaz.longest.max(one.longest);
            gaz.types.extend(one.types);
            gaz.phrases.extend(one.phrases);
        }
        Ok(gaz)
    }

    /// Entity types in use.
    pub fn types(&self) -> impl Iterator<Item = &str> {
        self.types.iter().map(String::as_str)
    }
}

impl EntityTagger for EntityGazetteer {
    fn tag(&self, words: &[&str]) -> Result<Vec<EntityLabel>> {
        if words.is_empty() {
            return Err(Error::invalid("cannot tag an empty word list"));
        }
        let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
        let mut out = Vec::with_capacity(words.len());
        let mut i = 0;
        while i < lower.len() {
            let max_len = self.longest.min(lower.len() - i);
            let hit = (1..=max_len)
                .rev()
                .find_map(|n| self.phrases.get(&lower[i..i + n].join(" ")).map(|t| (n, t)));
            match hit {
                Some((n, ty)) => {
                    out.push(EntityLabel::Begin(ty.clone()));
                    out.extend((1..n).map(|_| EntityLabel::Inside(ty.clone())));
                    i += n;
                }
                None => {
                    out.push(EntityLabel::None);
                    i += 1;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(t: &str) -> EntityLabel {
        EntityLabel::Begin(t.into())
    }
    fn i(t: &str) -> EntityLabel {
        EntityLabel::Inside(t.into())
    }

    #[test]
    fn person_phrase() {
        let g = EntityGazetteer::from_entries([("lil waynes", "person")], None).unwrap();
        assert_eq!(g.tag(&["lil", "waynes"]).unwrap(), vec![b("person"), i("person")]);
        assert_eq!(g.tag(&["blackout"]).unwrap(), vec![EntityLabel::None]);
        assert!(g.tag(&[]).is_err());
    }

    #[test]
    fn longest_match_wins() {
        let g = EntityGazetteer::from_entries([("golden", "product"), ("golden globes", "movie")], None).unwrap();
        assert_eq!(g.tag(&["Golden", "Globes", "golden"]).unwrap(), vec![b("movie"), i("movie"), b("product")]);
    }

    #[test]
    fn declared_label_set_enforced() {
        assert!(EntityGazetteer::from_entries([("x", "person")], Some(&["movie"])).is_err());
        assert!(EntityGazetteer::from_entries([("x", "B-person")], Some(&["person"])).is_ok());
        assert!(EntityGazetteer::from_entries([("x", "none")], None).is_err());
    }

    proptest! {
        #[test]
        fn output_is_well_formed_bio(words in prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 1..12)) {
            let g = EntityGazetteer::from_entries(
                [("a b", "person"), ("a", "product"), ("b c d", "movie"), ("c", "person")],
                None,
            ).unwrap();
            let labels = g.tag(&words).unwrap();
            prop_assert_eq!(labels.len(), words.len());
            for (k, l) in labels.iter().enumerate() {
                if let EntityLabel::Inside(t) = l {
                    prop_assert!(k > 0);
                    match &labels[k - 1] {
                        EntityLabel::Begin(p) | EntityLabel::Inside(p) => prop_assert_eq!(p, t),
                        EntityLabel::None => prop_assert!(false, "I- after none"),
                    }
                }
            }
        }
    }
}
