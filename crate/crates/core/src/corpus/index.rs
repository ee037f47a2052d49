use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::time::{Timestamp, YearMonth};
use super::tokenize::word_tokens;
use super::tweet::Tweet;
use crate::{Error, Result};

const INDEX_FORMAT: &str = "hashmerge-index";
const INDEX_VERSION: u32 = 1;

/// Inclusive time range observed by an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeSpan {
    pub start: Timestamp,
    pub end: Timestamp,
}

#[derive(Debug, Clone)]
pub struct HashtagTimeline {
    pub display: String,
    pub first_seen: Timestamp,
    /// Indices into the tweet store, ascending by (timestamp, id).
    pub tweets: Vec<usize>,
    pub monthly: BTreeMap<YearMonth, u32>,
}

impl HashtagTimeline {
    pub fn total(&self) -> usize {
        self.tweets.len()
    }
}

/// Interned word vocabulary. Ids follow first occurrence in time order, so
/// appending later tweets never renumbers earlier words.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    words: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    fn intern(&mut self, w: &str) -> u32 {
        if let Some(&id) = self.ids.get(w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(w.to_string());
        self.ids.insert(w.to_string(), id);
        id
    }

    pub fn id(&self, w: &str) -> Option<u32> {
        self.ids.get(w).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Unigram model p(w|T) over a tweet collection, dense over the index
/// vocabulary (zero for words outside the collection).
#[derive(Debug, Clone)]
pub struct BackgroundModel {
    counts: Vec<u64>,
    total: u64,
}

impl BackgroundModel {
    /// Model from dense per-word counts indexed by vocabulary id.
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        BackgroundModel { counts, total }
    }

    pub fn total_tokens(&self) -> u64 {
        self.total
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts.get(id as usize).copied().unwrap_or(0)
    }

    pub fn probability(&self, id: u32) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(id) as f64 / self.total as f64
        }
    }

    /// Words with non-zero mass, in vocabulary id order.
    pub fn support(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        let total = self.total as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(id, &c)| (id as u32, c as f64 / total))
    }

    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Immutable per-hashtag timelines over a tweet stream.
#[derive(Debug, Clone)]
pub struct CorpusIndex {
    tweets: Vec<Tweet>,
    tokens: Vec<Vec<u32>>,
    hashtags: BTreeMap<String, HashtagTimeline>,
    vocab: Vocabulary,
    /// Per word id, the timestamps of every occurrence (ascending).
    word_times: Vec<Vec<Timestamp>>,
    /// `token_prefix[i]` = tokens in tweets `0..i`.
    token_prefix: Vec<u64>,
    span: Option<TimeSpan>,
    months: Vec<YearMonth>,
    skipped: usize,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format: String,
    version: u32,
    span: Option<TimeSpan>,
    skipped: usize,
    tweets: Vec<Tweet>,
}

impl CorpusIndex {
    /// Build from in-memory tweets. Ids must be unique. The span defaults to
    /// the min/max tweet timestamps; an explicit span must contain them.
    pub fn from_tweets(mut tweets: Vec<Tweet>, span: Option<TimeSpan>) -> Result<Self> {
        tweets.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
        let mut seen = HashSet::with_capacity(tweets.len());
        for t in &tweets {
            if !seen.insert(t.id.as_str()) {
                return Err(Error::invalid(format!("duplicate tweet id {}", t.id)));
            }
            if t.timestamp <= 0 {
                return Err(Error::invalid(format!("tweet {} has non-positive timestamp", t.id)));
            }
        }

        let observed = match (tweets.first(), tweets.last()) {
            (Some(f), Some(l)) => Some(TimeSpan {
                start: f.timestamp,
                end: l.timestamp,
            }),
            _ => None,
        };
        let span = match (span, observed) {
            (Some(s), Some(o)) => {
                if s.start > o.start || s.end < o.end {
                    return Err(Error::invalid("declared span does not contain all tweets"));
                }
                Some(s)
            }
            (Some(s), None) => Some(s),
            (None, o) => o,
        };
        if let Some(s) = span {
            if s.start > s.end {
                return Err(Error::invalid("span start after end"));
            }
        }

        let mut hashtags: BTreeMap<String, HashtagTimeline> = BTreeMap::new();
        let mut vocab = Vocabulary::default();
        let mut word_times: Vec<Vec<Timestamp>> = Vec::new();
        let mut tokens = Vec::with_capacity(tweets.len());
        let mut token_prefix = Vec::with_capacity(tweets.len() + 1);
        token_prefix.push(0u64);

        for (i, t) in tweets.iter_mut().enumerate() {
            if t.hashtags.is_empty() {
                t.derive_hashtags();
            }
            let mut in_tweet = HashSet::new();
            for h in &t.hashtags {
                if !in_tweet.insert(h.canonical().to_string()) {
                    continue;
                }
                let entry = hashtags
                    .entry(h.canonical().to_string())
                    .or_insert_with(|| HashtagTimeline {
                        display: h.display().to_string(),
                        first_seen: t.timestamp,
                        tweets: Vec::new(),
                        monthly: BTreeMap::new(),
                    });
                entry.tweets.push(i);
                *entry.monthly.entry(YearMonth::of(t.timestamp)).or_insert(0) += 1;
            }

            let ids: Vec<u32> = word_tokens(&t.text)
                .iter()
                .map(|w| vocab.intern(w))
                .collect();
            for &id in &ids {
                if id as usize == word_times.len() {
                    word_times.push(Vec::new());
                }
                word_times[id as usize].push(t.timestamp);
            }
            token_prefix.push(token_prefix[i] + ids.len() as u64);
            tokens.push(ids);
        }

        let months = span
            .map(|s| YearMonth::range(YearMonth::of(s.start), YearMonth::of(s.end)))
            .unwrap_or_default();

        Ok(CorpusIndex {
            tweets,
            tokens,
            hashtags,
            vocab,
            word_times,
            token_prefix,
            span,
            months,
            skipped: 0,
        })
    }

    pub(crate) fn with_skipped(mut self, skipped: usize) -> Self {
        self.skipped = skipped;
        self
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn tweet(&self, i: usize) -> &Tweet {
        &self.tweets[i]
    }

    /// Interned word tokens of tweet `i`.
    pub fn tokens(&self, i: usize) -> &[u32] {
        &self.tokens[i]
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn span(&self) -> Option<TimeSpan> {
        self.span
    }

    pub fn month_grid(&self) -> &[YearMonth] {
        &self.months
    }

    pub fn hashtag_count(&self) -> usize {
        self.hashtags.len()
    }

    /// Timelines keyed by canonical hashtag, in canonical order.
    pub fn hashtags(&self) -> impl Iterator<Item = (&str, &HashtagTimeline)> {
        self.hashtags.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn timeline(&self, hashtag: &str) -> Option<&HashtagTimeline> {
        self.hashtags.get(&hashtag.to_ascii_lowercase())
    }

    pub fn first_seen(&self, hashtag: &str) -> Option<Timestamp> {
        self.timeline(hashtag).map(|t| t.first_seen)
    }

    pub fn contains(&self, hashtag: &str) -> bool {
        self.timeline(hashtag).is_some()
    }

    /// Tweets containing the hashtag in a calendar month; 0 when absent.
    pub fn monthly_frequency(&self, hashtag: &str, month: YearMonth) -> u32 {
        self.timeline(hashtag)
            .and_then(|t| t.monthly.get(&month).copied())
            .unwrap_or(0)
    }

    fn window_range(&self, hashtag: &str, from: Timestamp, to: Timestamp) -> Result<&[usize]> {
        if from >= to {
            return Err(Error::invalid(format!("empty window ({from}, {to}]")));
        }
        let Some(tl) = self.timeline(hashtag) else {
            return Ok(&[]);
        };
        let lo = tl.tweets.partition_point(|&i| self.tweets[i].timestamp <= from);
        let hi = tl.tweets.partition_point(|&i| self.tweets[i].timestamp <= to);
        Ok(&tl.tweets[lo..hi])
    }

    /// Tweets containing the hashtag with timestamp in `(from, to]`.
    pub fn window_frequency(&self, hashtag: &str, from: Timestamp, to: Timestamp) -> Result<usize> {
        Ok(self.window_range(hashtag, from, to)?.len())
    }

    /// Store indices of the tweets in `(from, to]`, by timestamp then id.
    pub fn window_indices(&self, hashtag: &str, from: Timestamp, to: Timestamp) -> Result<&[usize]> {
        self.window_range(hashtag, from, to)
    }

    pub fn tweets_of(&self, hashtag: &str, from: Timestamp, to: Timestamp) -> Result<Vec<&Tweet>> {
        Ok(self
            .window_range(hashtag, from, to)?
            .iter()
            .map(|&i| &self.tweets[i])
            .collect())
    }

    /// Fails with `InsufficientHistory` unless `[from, to]` lies inside the span.
    pub fn ensure_covers(&self, from: Timestamp, to: Timestamp) -> Result<()> {
        match self.span {
            Some(s) if s.start <= from && to <= s.end => Ok(()),
            Some(s) => Err(Error::InsufficientHistory {
                needed: if to > s.end { to } else { from },
                covered_from: s.start,
                covered_to: s.end,
            }),
            None => Err(Error::InsufficientHistory {
                needed: to,
                covered_from: 0,
                covered_to: 0,
            }),
        }
    }

    /// Background unigram model over the whole corpus.
    pub fn background(&self) -> BackgroundModel {
        BackgroundModel {
            counts: self.word_times.iter().map(|t| t.len() as u64).collect(),
            total: *self.token_prefix.last().expect("prefix has a sentinel"),
        }
    }

    /// Background unigram model over tweets strictly before `cutoff`.
    pub fn background_before(&self, cutoff: Timestamp) -> BackgroundModel {
        let n = self.tweets.partition_point(|t| t.timestamp < cutoff);
        BackgroundModel {
            counts: self
                .word_times
                .iter()
                .map(|t| t.partition_point(|&ts| ts < cutoff) as u64)
                .collect(),
            total: self.token_prefix[n],
        }
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let file = IndexFile {
            format: INDEX_FORMAT.to_string(),
            version: INDEX_VERSION,
            span: self.span,
            skipped: self.skipped,
            tweets: self.tweets.clone(),
        };
        serde_json::to_writer(w, &file)?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let file: IndexFile = serde_json::from_reader(r)?;
        if file.format != INDEX_FORMAT {
            return Err(Error::Format(format!("expected {INDEX_FORMAT}, found {}", file.format)));
        }
        if file.version != INDEX_VERSION {
            return Err(Error::Format(format!("index version {} unsupported", file.version)));
        }
        Ok(CorpusIndex::from_tweets(file.tweets, file.span)?.with_skipped(file.skipped))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        CorpusIndex::read_from(BufReader::new(f))
    }
}
