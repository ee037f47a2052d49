//! Candidate feature extraction over the pre-compounding observation
//! window.
//!
//! [`extract`] computes the schema-independent part of a candidate's
//! features ([`RawFeatures`]); a [`FeatureSchema`] built around a
//! [`ComboSchema`] turns that into a fixed-width [`FeatureVector`]. The
//! split lets the combination lists be re-derived from each training fold.

mod combo;
mod hashtag;
pub mod measures;
mod table;
mod tweets;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compound::{observation_window, segment_hashtag, CompoundCandidate};
use crate::corpus::{CorpusIndex, Timestamp};
use crate::lexicon::LexiconBundle;
use crate::topicmodel::{document_key, TopicModel, TopicRanking};
use crate::{Error, Result};

pub use combo::{ComboKeys, ComboSchema, NE_SLOTS, OOV_INV_NAMES, POS_SLOTS};
pub use hashtag::{char_length, combo_keys, compounding_zone, ngram_presence, pos_diversity, tag_entropy, word_count};
pub use table::{read_feature_csv, write_feature_csv, FeatureTable, SchemaFile};
pub use tweets::{
    avg_topic_overlap, clarity_from_counts, collocation_frequency, hashtag_clarity, ngram_overlap, user_features,
    valid_ngrams, word_diversity, word_overlap, DocumentStat, UserFeatures,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureGroup {
    HashtagContent,
    TweetContent,
    User,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 3] = [FeatureGroup::HashtagContent, FeatureGroup::TweetContent, FeatureGroup::User];

    pub fn name(self) -> &'static str {
        match self {
            FeatureGroup::HashtagContent => "hashtag_content",
            FeatureGroup::TweetContent => "tweet_content",
            FeatureGroup::User => "user",
        }
    }
}

impl std::fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FeatureGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown feature group {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub group: FeatureGroup,
    pub binary: bool,
}

use FeatureGroup::{HashtagContent as H, TweetContent as T, User as U};

/// Columns that do not depend on the combination schema, in vector order.
pub const BASE_FEATURES: [(&str, FeatureGroup, bool); 26] = [
    ("char_length", H, false),
    ("word_count", H, false),
    ("ngram_presence", H, true),
    ("pos_diversity", H, false),
    ("zone:OOV-OOV", H, true),
    ("zone:INV-OOV", H, true),
    ("zone:OOV-INV", H, true),
    ("zone:INV-INV", H, true),
    ("word_overlap", T, false),
    ("ngram_overlap", T, false),
    ("avg_common_ngram_freq", T, false),
    ("collocation_frequency", T, false),
    ("clarity_a", T, false),
    ("clarity_b", T, false),
    ("word_diversity_a", T, false),
    ("word_diversity_b", T, false),
    ("topic_overlap", T, false),
    ("unique_users_a", U, false),
    ("unique_users_b", U, false),
    ("common_users", U, false),
    ("unique_mentions_a", U, false),
    ("unique_mentions_b", U, false),
    ("common_mentions", U, false),
    ("unique_retweets_a", U, false),
    ("unique_retweets_b", U, false),
    ("common_retweets", U, false),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ObservationConfig {
    pub obs_months: u32,
    pub horizon_months: u32,
    pub lda_topics: usize,
    /// Words per topic compared by the topic-overlap feature.
    pub topic_top_n: usize,
    pub topic_ranking: TopicRanking,
    pub clarity_epsilon: f64,
}

impl Default for ObservationConfig {
    fn default() -> Self {
        ObservationConfig {
            obs_months: 6,
            horizon_months: 2,
            lda_topics: 30,
            topic_top_n: 100,
            topic_ranking: TopicRanking::default(),
            clarity_epsilon: 1e-6,
        }
    }
}

impl ObservationConfig {
    /// `any_horizon` lifts the restriction to the standard horizons.
    pub fn validate(&self, any_horizon: bool) -> Result<()> {
        if self.obs_months == 0 {
            return Err(Error::invalid("obs_months must be positive"));
        }
        if self.horizon_months == 0 {
            return Err(Error::invalid("horizon must be at least one month"));
        }
        if !any_horizon && !crate::compound::HORIZONS.contains(&self.horizon_months) {
            return Err(Error::invalid(format!("horizon must be one of 2, 6, 10; got {}", self.horizon_months)));
        }
        if self.clarity_epsilon.is_nan() || self.clarity_epsilon <= 0.0 {
            return Err(Error::invalid("clarity_epsilon must be positive"));
        }
        Ok(())
    }
}

/// Schema-independent features of one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct RawFeatures {
    /// Display form of the compound.
    pub compound: String,
    pub t0: Timestamp,
    /// Values aligned with [`BASE_FEATURES`].
    pub base: Vec<f64>,
    pub keys: ComboKeys,
    /// Non-fatal notes such as empty constituent documents.
    pub warnings: Vec<String>,
}

/// Compute [`RawFeatures`] from tweets in the observation window only.
pub fn extract(
    cand: &CompoundCandidate,
    index: &CorpusIndex,
    lex: &LexiconBundle,
    model: &TopicModel,
    config: &ObservationConfig,
) -> Result<RawFeatures> {
    let (from, to) = observation_window(cand.t0(), config.obs_months);
    index.ensure_covers(from, to)?;
    let (a, b) = (cand.part_a.canonical(), cand.part_b.canonical());
    let mut warnings = Vec::new();

    let words = segment_hashtag(&cand.compound, &lex.dictionary);
    let keys = combo_keys(cand, &lex.dictionary, &lex.pos, &lex.gazetteer)?;
    let mut base = vec![
        char_length(cand) as f64,
        words.len() as f64,
        f64::from(u8::from(ngram_presence(&words, &lex.ngrams))),
        pos_diversity(&words, &lex.pos)?,
    ];
    base.extend(keys.oov_inv_bits());

    let ia = index.window_indices(a, from, to)?;
    let ib = index.window_indices(b, from, to)?;
    let (ng_overlap, ng_freq) = ngram_overlap(
        &valid_ngrams(ia.iter().map(|&i| index.tweet(i)), &lex.ngrams),
        &valid_ngrams(ib.iter().map(|&i| index.tweet(i)), &lex.ngrams),
    );
    let mut doc_stat = |stat: DocumentStat, what: &str, h: &str| {
        if stat.empty {
            warnings.push(format!("{what}: no tokens for #{h} in window"));
        }
        stat.value
    };
    let clar_a = doc_stat(hashtag_clarity(index, a, from, to, config.clarity_epsilon)?, "clarity", a);
    let clar_b = doc_stat(hashtag_clarity(index, b, from, to, config.clarity_epsilon)?, "clarity", b);
    let div_a = doc_stat(word_diversity(index, a, from, to)?, "word_diversity", a);
    let div_b = doc_stat(word_diversity(index, b, from, to)?, "word_diversity", b);
    base.extend([
        word_overlap(index, ia, ib),
        ng_overlap,
        ng_freq,
        collocation_frequency(index, a, b, from, to)? as f64,
        clar_a,
        clar_b,
        div_a,
        div_b,
        avg_topic_overlap(
            model,
            &document_key(a, to),
            &document_key(b, to),
            config.topic_top_n,
            config.topic_ranking,
        )?,
    ]);
    base.extend(user_features(index, a, b, from, to)?.values());
    debug_assert_eq!(base.len(), BASE_FEATURES.len());
    if let Some(i) = base.iter().position(|v| !v.is_finite()) {
        return Err(Error::Format(format!(
            "non-finite {} for {}",
            BASE_FEATURES[i].0,
            cand.compound
        )));
    }

    Ok(RawFeatures {
        compound: cand.compound.display().to_string(),
        t0: cand.t0(),
        base,
        keys,
        warnings,
    })
}

/// [`extract`] over many candidates in parallel; output order follows input.
pub fn extract_all(
    cands: &[CompoundCandidate],
    index: &CorpusIndex,
    lex: &LexiconBundle,
    model: &TopicModel,
    config: &ObservationConfig,
) -> Result<Vec<RawFeatures>> {
    cands.par_iter().map(|c| extract(c, index, lex, model, config)).collect()
}

/// Full column layout: base features followed by the 40 schema slots.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSchema {
    pub combo: ComboSchema,
    columns: Vec<Column>,
    id: String,
}

fn fnv1a(parts: impl Iterator<Item = u8>) -> u64 {
    parts.fold(0xcbf29ce484222325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100000001b3))
}

impl FeatureSchema {
    pub fn new(combo: ComboSchema) -> Self {
        let mut columns: Vec<Column> = BASE_FEATURES
            .iter()
            .map(|&(name, group, binary)| Column {
                name: name.to_string(),
                group,
                binary,
            })
            .collect();
        columns.extend(combo.slot_names().into_iter().map(|name| Column {
            name,
            group: FeatureGroup::HashtagContent,
            binary: true,
        }));
        let digest = fnv1a(columns.iter().flat_map(|c| c.name.bytes().chain([0])));
        FeatureSchema {
            combo,
            columns,
            id: format!("{digest:016x}"),
        }
    }

    /// Schema with the combination lists derived from `rows`.
    pub fn derive<'a>(rows: impl IntoIterator<Item = &'a RawFeatures> + Clone) -> Self {
        FeatureSchema::new(ComboSchema::derive(rows.into_iter().map(|r| &r.keys).collect::<Vec<_>>()))
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn values(&self, raw: &RawFeatures) -> Vec<f64> {
        let mut v = raw.base.clone();
        v.extend(self.combo.slot_bits(&raw.keys));
        v
    }

    pub fn vector(&self, raw: &RawFeatures) -> FeatureVector {
        FeatureVector {
            schema_id: self.id.clone(),
            values: self.values(raw),
        }
    }
}

/// Feature values laid out by a [`FeatureSchema`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub schema_id: String,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn get(&self, schema: &FeatureSchema, name: &str) -> Option<f64> {
        if schema.id() != self.schema_id {
            return None;
        }
        schema.position(name).map(|i| self.values[i])
    }
}

pub fn featurize(
    cand: &CompoundCandidate,
    index: &CorpusIndex,
    lex: &LexiconBundle,
    model: &TopicModel,
    schema: &FeatureSchema,
    config: &ObservationConfig,
) -> Result<FeatureVector> {
    Ok(schema.vector(&extract(cand, index, lex, model, config)?))
}

#[cfg(test)]
mod tests;
