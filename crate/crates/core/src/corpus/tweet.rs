use std::fmt;

use serde::{Deserialize, Serialize};

use super::time::Timestamp;
use super::tokenize::{extract_hashtags, extract_mentions};
use crate::{Error, Result};

/// Case-insensitive hashtag identity with the first observed casing kept
/// for segmentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HashtagId {
    canonical: String,
    display: String,
}

impl HashtagId {
    pub fn new(display: &str) -> Result<Self> {
        let display = display.strip_prefix('#').unwrap_or(display);
        let mut bytes = display.bytes();
        let valid = matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic() || b == b'_')
            && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_');
        if !valid {
            return Err(Error::invalid(format!("not a hashtag: {display:?}")));
        }
        Ok(HashtagId {
            canonical: display.to_ascii_lowercase(),
            display: display.to_string(),
        })
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn display(&self) -> &str {
        &self.display
    }

    /// Number of characters in the canonical form.
    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }
}

impl fmt::Display for HashtagId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.display)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub timestamp: Timestamp,
    #[serde(rename = "user")]
    pub user_id: String,
    pub text: String,
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default)]
    pub retweet_of: Option<String>,
    #[serde(skip)]
    pub hashtags: Vec<HashtagId>,
}

impl Tweet {
    /// Build a tweet, deriving hashtags from the text and mentions from `@`
    /// handles when none are supplied.
    pub fn new(
        id: impl Into<String>,
        timestamp: Timestamp,
        user_id: impl Into<String>,
        text: impl Into<String>,
        mentions: Option<Vec<String>>,
        retweet_of: Option<String>,
    ) -> Result<Self> {
        let id = id.into();
        let text = text.into();
        if id.is_empty() {
            return Err(Error::invalid("empty tweet id"));
        }
        if timestamp <= 0 {
            return Err(Error::invalid(format!("non-positive timestamp {timestamp}")));
        }
        let mentions = mentions
            .unwrap_or_else(|| extract_mentions(&text).into_iter().map(String::from).collect());
        let mut tweet = Tweet {
            id,
            timestamp,
            user_id: user_id.into(),
            text,
            mentions,
            retweet_of,
            hashtags: Vec::new(),
        };
        tweet.derive_hashtags();
        Ok(tweet)
    }

    pub(crate) fn derive_hashtags(&mut self) {
        self.hashtags = extract_hashtags(&self.text)
            .into_iter()
            .map(|h| HashtagId::new(h).expect("extractor yields valid hashtags"))
            .collect();
    }

    pub fn has_hashtag(&self, canonical: &str) -> bool {
        self.hashtags.iter().any(|h| h.canonical() == canonical)
    }

    pub fn is_retweet(&self) -> bool {
        self.retweet_of.is_some()
    }
}
