use std::collections::BTreeMap;

use crate::compound::{observation_window, CompoundCandidate};
use crate::corpus::{document_tokens, CorpusIndex, HashtagId, Timestamp};
use crate::Result;

/// All in-window tweets of one hashtag, concatenated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashtagDocument {
    pub key: String,
    pub hashtag: HashtagId,
    pub tokens: Vec<String>,
}

impl HashtagDocument {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Documents are identified by hashtag and window end, since the same
/// hashtag can be a constituent of compounds born at different times.
pub fn document_key(hashtag: &str, window_end: Timestamp) -> String {
    format!("{}@{}", hashtag.to_ascii_lowercase(), window_end)
}

/// One document per hashtag over `(from, to]`. Tokens exclude hashtags and
/// mentions; a hashtag with no tweets in the window yields an empty document.
pub fn build_documents(
    index: &CorpusIndex,
    hashtags: &[HashtagId],
    from: Timestamp,
    to: Timestamp,
) -> Result<Vec<HashtagDocument>> {
    hashtags
        .iter()
        .map(|h| {
            let tokens = index
                .tweets_of(h.canonical(), from, to)?
                .into_iter()
                .flat_map(|t| document_tokens(&t.text))
                .collect();
            Ok(HashtagDocument {
                key: document_key(h.canonical(), to),
                hashtag: h.clone(),
                tokens,
            })
        })
        .collect()
}

/// Documents for both constituents of every candidate over their
/// observation windows, deduplicated and ordered by key.
pub fn documents_for_candidates(
    index: &CorpusIndex,
    candidates: &[CompoundCandidate],
    obs_months: u32,
) -> Result<Vec<HashtagDocument>> {
    let mut docs = BTreeMap::new();
    for c in candidates {
        let (from, to) = observation_window(c.t0(), obs_months);
        for part in [&c.part_a, &c.part_b] {
            let key = document_key(part.canonical(), to);
            if let std::collections::btree_map::Entry::Vacant(slot) = docs.entry(key) {
                slot.insert(build_documents(index, std::slice::from_ref(part), from, to)?.remove(0));
            }
        }
    }
    Ok(docs.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Tweet;

    #[test]
    fn documents_concatenate_window_tweets() {
        let tweets = vec![
            Tweet::new("1", 10, "u", "one two three #x", None, None).unwrap(),
            Tweet::new("2", 20, "u", "#x four @bob five six", None, None).unwrap(),
            Tweet::new("3", 30, "u", "#x late", None, None).unwrap(),
            Tweet::new("4", 15, "u", "#y", None, None).unwrap(),
        ];
        let idx = CorpusIndex::from_tweets(tweets, None).unwrap();
        let hs = [HashtagId::new("x").unwrap(), HashtagId::new("y").unwrap(), HashtagId::new("zz").unwrap()];
        let docs = build_documents(&idx, &hs, 0, 25).unwrap();
        assert_eq!(docs[0].tokens, ["one", "two", "three", "four", "five", "six"]);
        assert!(docs[1].is_empty());
        assert!(docs[2].is_empty());
        assert_eq!(docs[0].key, "x@25");
    }
}
