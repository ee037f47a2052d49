use serde::{Deserialize, Serialize};

use crate::corpus::YearMonth;
use crate::{Error, Result};

fn default_words() -> usize {
    8
}

/// A planted compound `#AB` formed from `#A` and `#B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantConfig {
    pub part_a: String,
    pub part_b: String,
    /// Grid month (0-based) in which the compound is born.
    pub birth_month: u32,
    /// Seconds after the start of the birth month.
    #[serde(default)]
    pub birth_offset: i64,
    /// Topic whose vocabulary `#A` tweets use.
    pub topic_a: usize,
    pub topic_b: usize,
    /// Fraction of `#B`'s vocabulary replaced by words of `#A`'s.
    #[serde(default)]
    pub word_overlap: f64,
    /// Monthly counts before the birth, oldest first; the last entry is
    /// the month just before `t0`.
    pub pre_a: Vec<u32>,
    pub pre_b: Vec<u32>,
    /// Monthly counts after the birth, month 1 first.
    pub post_a: Vec<u32>,
    pub post_b: Vec<u32>,
    pub post_ab: Vec<u32>,
    pub users_a: u32,
    pub users_b: u32,
    /// Fraction of the smaller user pool shared by both constituents.
    #[serde(default)]
    pub user_overlap: f64,
    #[serde(default)]
    pub mention_rate: f64,
    #[serde(default)]
    pub retweet_rate: f64,
    /// Fraction of the last pre-birth month's tweets carrying both tags.
    #[serde(default)]
    pub cooccurrence_rate: f64,
}

impl PlantConfig {
    /// Joint `#A #B` tweets in the last month before the birth.
    pub fn cooccurrences(&self) -> u32 {
        let last = self.pre_a.last().copied().unwrap_or(0).min(self.pre_b.last().copied().unwrap_or(0));
        (self.cooccurrence_rate * f64::from(last)).round() as u32
    }

    /// Whether the scheduled counts make the compound popular over the
    /// first `months` months.
    pub fn popular_within(&self, months: usize) -> bool {
        let sum = |v: &[u32]| v.iter().take(months).map(|&c| u64::from(c)).sum::<u64>();
        let ab = sum(&self.post_ab);
        ab > sum(&self.post_a) && ab > sum(&self.post_b)
    }

    fn validate(&self, i: usize, topics: usize) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(format!("plant {i} ({}{}): {m}", self.part_a, self.part_b)));
        for (name, v) in [
            ("word_overlap", self.word_overlap),
            ("user_overlap", self.user_overlap),
            ("mention_rate", self.mention_rate),
            ("retweet_rate", self.retweet_rate),
            ("cooccurrence_rate", self.cooccurrence_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1]"));
            }
        }
        if self.topic_a >= topics || self.topic_b >= topics {
            return bad("topic out of range".into());
        }
        if self.pre_a.iter().all(|&c| c == 0) || self.pre_b.iter().all(|&c| c == 0) {
            return bad("both constituents need tweets before the compound is born".into());
        }
        if self.users_a == 0 || self.users_b == 0 {
            return bad("user pools must be non-empty".into());
        }
        if !(0..28 * 86_400).contains(&self.birth_offset) {
            return bad("birth_offset must fall within the first 28 days of the month".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub seed: u64,
    /// First month of the grid; the corpus spans `[start, start + months]`.
    pub start: YearMonth,
    pub months: u32,
    #[serde(default)]
    pub background_per_month: u32,
    pub background_vocab: Vec<String>,
    /// Word lists, one per topic.
    pub topics: Vec<Vec<String>>,
    #[serde(default = "default_words")]
    pub words_per_tweet: usize,
    pub plants: Vec<PlantConfig>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.months == 0 {
            return Err(Error::invalid("scenario needs at least one month"));
        }
        if self.background_vocab.is_empty() || self.topics.is_empty() || self.topics.iter().any(Vec::is_empty) {
            return Err(Error::invalid("background vocabulary and every topic need words"));
        }
        for (i, p) in self.plants.iter().enumerate() {
            p.validate(i, self.topics.len())?;
            let pre = p.pre_a.len().max(p.pre_b.len()) as u32;
            let post = p.post_a.len().max(p.post_b.len()).max(p.post_ab.len()) as u32;
            if pre > p.birth_month {
                return Err(Error::invalid(format!("plant {i}: {pre} pre-birth months start before the grid")));
            }
            if p.birth_month + post + u32::from(p.birth_offset > 0) > self.months {
                return Err(Error::invalid(format!("plant {i}: post-birth schedule runs past the grid")));
            }
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
