//! Features of the constituents' in-window tweets and their users.

use std::collections::{BTreeMap, HashSet};

use crate::corpus::{word_tokens, BackgroundModel, CorpusIndex, Timestamp, Tweet};
use crate::lexicon::NgramTable;
use crate::topicmodel::{TopicModel, TopicRanking};
use crate::{Error, Result};

use super::measures::{entropy_of_counts, overlap_coefficient};

fn token_set(index: &CorpusIndex, ids: &[usize]) -> HashSet<u32> {
    ids.iter().flat_map(|&i| index.tokens(i).iter().copied()).collect()
}

/// Overlap coefficient of the two constituents' token sets.
pub fn word_overlap(index: &CorpusIndex, a: &[usize], b: &[usize]) -> f64 {
    overlap_coefficient(&token_set(index, a), &token_set(index, b))
}

/// Known n-grams (with table frequency) found inside any of the tweets.
pub fn valid_ngrams<'t>(tweets: impl IntoIterator<Item = &'t Tweet>, table: &NgramTable) -> BTreeMap<String, u64> {
    tweets
        .into_iter()
        .flat_map(|t| table.matches(&word_tokens(&t.text)))
        .collect()
}

/// Overlap coefficient of the valid n-gram sets and the mean table
/// frequency over their intersection.
pub fn ngram_overlap(a: &BTreeMap<String, u64>, b: &BTreeMap<String, u64>) -> (f64, f64) {
    let sa: HashSet<&str> = a.keys().map(String::as_str).collect();
    let sb: HashSet<&str> = b.keys().map(String::as_str).collect();
    let common: Vec<u64> = sa.intersection(&sb).map(|g| a[*g]).collect();
    let avg = if common.is_empty() {
        0.0
    } else {
        common.iter().sum::<u64>() as f64 / common.len() as f64
    };
    (overlap_coefficient(&sa, &sb), avg)
}

/// In-window tweets carrying both hashtags.
pub fn collocation_frequency(index: &CorpusIndex, a: &str, b: &str, from: Timestamp, to: Timestamp) -> Result<usize> {
    let b = b.to_ascii_lowercase();
    Ok(index
        .window_indices(a, from, to)?
        .iter()
        .filter(|&&i| index.tweet(i).has_hashtag(&b))
        .count())
}

/// A document statistic plus whether the document was empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DocumentStat {
    pub value: f64,
    pub empty: bool,
}

fn doc_counts(index: &CorpusIndex, ids: &[usize]) -> BTreeMap<u32, u64> {
    let mut counts = BTreeMap::new();
    for &i in ids {
        for &w in index.tokens(i) {
            *counts.entry(w).or_default() += 1;
        }
    }
    counts
}

/// KL(p_D || p_T) with `p_D` add-epsilon smoothed over the background's
/// support. Every document word must lie in that support.
pub fn clarity_from_counts(doc: &BTreeMap<u32, u64>, background: &BackgroundModel, epsilon: f64) -> DocumentStat {
    let n: u64 = doc.values().sum();
    if n == 0 {
        return DocumentStat { value: 0.0, empty: true };
    }
    let denom = n as f64 + epsilon * background.support_size() as f64;
    let kl: f64 = background
        .support()
        .map(|(w, pt)| {
            let pd = (doc.get(&w).copied().unwrap_or(0) as f64 + epsilon) / denom;
            pd * (pd / pt).ln()
        })
        .sum();
    DocumentStat {
        value: kl.max(0.0),
        empty: false,
    }
}

/// Clarity of a hashtag's in-window tweets against the language model of
/// everything before the window end.
pub fn hashtag_clarity(index: &CorpusIndex, h: &str, from: Timestamp, to: Timestamp, epsilon: f64) -> Result<DocumentStat> {
    let doc = doc_counts(index, index.window_indices(h, from, to)?);
    Ok(clarity_from_counts(&doc, &index.background_before(to + 1), epsilon))
}

pub fn word_diversity(index: &CorpusIndex, h: &str, from: Timestamp, to: Timestamp) -> Result<DocumentStat> {
    let doc = doc_counts(index, index.window_indices(h, from, to)?);
    Ok(DocumentStat {
        value: entropy_of_counts(doc.values().copied()),
        empty: doc.is_empty(),
    })
}

/// Mean number of shared top-`n` topic words between the two documents.
pub fn avg_topic_overlap(model: &TopicModel, key_a: &str, key_b: &str, n: usize, ranking: TopicRanking) -> Result<f64> {
    let find = |k: &str| {
        model
            .document(k)
            .ok_or_else(|| Error::invalid(format!("topic model has no document {k}")))
    };
    Ok(model.average_overlap(find(key_a)?, find(key_b)?, n, ranking))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UserFeatures {
    pub unique_users: (usize, usize),
    pub common_users: usize,
    pub unique_mentions: (usize, usize),
    pub common_mentions: usize,
    pub unique_retweets: (usize, usize),
    pub common_retweets: usize,
}

impl UserFeatures {
    pub fn values(&self) -> [f64; 9] {
        [
            self.unique_users.0,
            self.unique_users.1,
            self.common_users,
            self.unique_mentions.0,
            self.unique_mentions.1,
            self.common_mentions,
            self.unique_retweets.0,
            self.unique_retweets.1,
            self.common_retweets,
        ]
        .map(|v| v as f64)
    }
}

pub fn user_features(index: &CorpusIndex, a: &str, b: &str, from: Timestamp, to: Timestamp) -> Result<UserFeatures> {
    struct Sets<'a> {
        users: HashSet<&'a str>,
        mentions: HashSet<&'a str>,
        retweets: HashSet<&'a str>,
    }
    let collect = |h: &str| -> Result<Sets<'_>> {
        let tweets = index.tweets_of(h, from, to)?;
        Ok(Sets {
            users: tweets.iter().map(|t| t.user_id.as_str()).collect(),
            mentions: tweets.iter().flat_map(|t| t.mentions.iter().map(String::as_str)).collect(),
            retweets: tweets.iter().filter(|t| t.is_retweet()).map(|t| t.id.as_str()).collect(),
        })
    };
    let (sa, sb) = (collect(a)?, collect(b)?);
    Ok(UserFeatures {
        unique_users: (sa.users.len(), sb.users.len()),
        common_users: sa.users.intersection(&sb.users).count(),
        unique_mentions: (sa.mentions.len(), sb.mentions.len()),
        common_mentions: sa.mentions.intersection(&sb.mentions).count(),
        unique_retweets: (sa.retweets.len(), sb.retweets.len()),
        common_retweets: sa.retweets.intersection(&sb.retweets).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Tweet;

    fn tw(id: &str, ts: Timestamp, user: &str, text: &str, rt: bool) -> Tweet {
        Tweet::new(id, ts, user, text, None, rt.then(|| "orig".to_string())).unwrap()
    }

    fn index(tweets: Vec<Tweet>) -> CorpusIndex {
        CorpusIndex::from_tweets(tweets, None).unwrap()
    }

    #[test]
    fn ngram_overlap_examples() {
        let none = BTreeMap::new();
        assert_eq!(ngram_overlap(&none, &none), (0.0, 0.0));
        let one: BTreeMap<String, u64> = [("big apple".to_string(), 42)].into();
        assert_eq!(ngram_overlap(&one, &one), (1.0, 42.0));
        let a: BTreeMap<String, u64> = [("g1".into(), 10), ("g2".into(), 20), ("g3".into(), 5)].into();
        let b: BTreeMap<String, u64> = [("g1".into(), 10), ("g2".into(), 20)].into();
        assert_eq!(ngram_overlap(&a, &b), (1.0, 15.0));

        let mut t = NgramTable::new();
        t.insert("big apple", 42).unwrap();
        let tweets = [tw("1", 5, "u", "the Big Apple tonight", false)];
        assert_eq!(valid_ngrams(&tweets, &t).get("big apple"), Some(&42));
    }

    #[test]
    fn collocation_counts_tweets() {
        let idx = index(vec![
            tw("1", 10, "u", "#a #b", false),
            tw("2", 11, "u", "#a #a #B", false),
            tw("3", 12, "u", "#a", false),
            tw("4", 13, "u", "#b #a", false),
            tw("5", 50, "u", "#b #a late", false),
        ]);
        assert_eq!(collocation_frequency(&idx, "a", "b", 0, 20).unwrap(), 3);
        assert_eq!(collocation_frequency(&idx, "a", "zzz", 0, 20).unwrap(), 0);
    }

    #[test]
    fn word_overlap_on_tokens() {
        let idx = index(vec![
            tw("1", 10, "u", "#a x y", false),
            tw("2", 11, "u", "#b y z", false),
        ]);
        let a = idx.window_indices("a", 0, 20).unwrap();
        let b = idx.window_indices("b", 0, 20).unwrap();
        // {a,x,y} vs {b,y,z}
        assert!((word_overlap(&idx, a, b) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(word_overlap(&idx, a, a), 1.0);
        assert_eq!(word_overlap(&idx, a, &[]), 0.0);
    }

    #[test]
    fn clarity_two_word_universe() {
        let bg = BackgroundModel::from_counts(vec![5, 5]);
        let doc: BTreeMap<u32, u64> = [(0, 4)].into();
        let eps: f64 = 1e-6;
        let p1 = (4.0 + eps) / (4.0 + 2.0 * eps);
        let p2 = eps / (4.0 + 2.0 * eps);
        let oracle = p1 * (p1 / 0.5).ln() + p2 * (p2 / 0.5).ln();
        let got = clarity_from_counts(&doc, &bg, eps);
        assert!((got.value - oracle).abs() < 1e-9);
        assert!((got.value - 2f64.ln()).abs() < 1e-5);

        let same: BTreeMap<u32, u64> = [(0, 3), (1, 3)].into();
        assert!(clarity_from_counts(&same, &bg, eps).value.abs() < 1e-9);
        let empty = clarity_from_counts(&BTreeMap::new(), &bg, eps);
        assert_eq!(empty, DocumentStat { value: 0.0, empty: true });
    }

    #[test]
    fn diversity_examples() {
        let idx = index(vec![
            tw("1", 10, "u", "#a", false),
            tw("2", 11, "u", "#a", false),
            tw("3", 12, "u", "#a", false),
            tw("4", 13, "u", "#b w x y z", false),
        ]);
        assert_eq!(word_diversity(&idx, "a", 0, 20).unwrap().value, 0.0);
        let b = word_diversity(&idx, "b", 0, 20).unwrap().value;
        assert!((b - 5f64.ln()).abs() < 1e-12);
        assert!(word_diversity(&idx, "c", 0, 20).unwrap().empty);
    }

    #[test]
    fn user_examples() {
        let idx = index(vec![
            tw("1", 10, "ann", "#a hi @zed", false),
            tw("2", 11, "ann", "#b there @zed", false),
            tw("3", 12, "bob", "#b", false),
            tw("r1", 13, "cat", "RT #a", true),
            tw("r2", 14, "cat", "RT #a", true),
            tw("r3", 15, "dan", "RT #a #b", true),
            tw("r4", 16, "eve", "RT #b", true),
        ]);
        let f = user_features(&idx, "a", "b", 0, 20).unwrap();
        assert_eq!(f.unique_retweets, (3, 2));
        assert_eq!(f.common_retweets, 1);
        assert_eq!(f.unique_users, (3, 4));
        assert_eq!(f.common_users, 2);
        assert_eq!(f.unique_mentions, (1, 1));
        assert_eq!(f.common_mentions, 1);

        let disjoint = index(vec![tw("1", 10, "ann", "#a", false), tw("2", 11, "bob", "#b", false)]);
        assert_eq!(user_features(&disjoint, "a", "b", 0, 20).unwrap().common_users, 0);
    }
}
