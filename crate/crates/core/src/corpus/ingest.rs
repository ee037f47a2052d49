use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use super::index::{CorpusIndex, TimeSpan};
use super::time::parse_timestamp;
use super::tweet::Tweet;
use crate::{Error, Result};

/// Predicate deciding which tweets enter the index (e.g. a language filter).
pub type TweetFilter = Arc<dyn Fn(&Tweet) -> bool + Send + Sync>;

#[derive(Clone, Default)]
pub struct IngestOptions {
    /// Defaults to accepting every tweet.
    pub filter: Option<TweetFilter>,
    /// Declared observation span; defaults to the min/max tweet timestamps.
    pub span: Option<TimeSpan>,
}

impl fmt::Debug for IngestOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IngestOptions")
            .field("filter", &self.filter.as_ref().map(|_| "<fn>"))
            .field("span", &self.span)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestStats {
    pub lines: usize,
    pub accepted: usize,
    pub malformed: usize,
    pub filtered: usize,
}

fn string_field(obj: &serde_json::Map<String, Value>, key: &str) -> std::result::Result<String, String> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Number(n)) if key == "id" => Ok(n.to_string()),
        Some(_) => Err(format!("field {key:?} has the wrong type")),
        None => Err(format!("missing field {key:?}")),
    }
}

/// Parse one JSONL record.
pub fn parse_tweet_line(line: &str) -> std::result::Result<Tweet, String> {
    let value: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let obj = value.as_object().ok_or("line is not a JSON object")?;
    let id = string_field(obj, "id")?;
    let user = string_field(obj, "user")?;
    let text = string_field(obj, "text")?;
    let timestamp = match obj.get("timestamp") {
        Some(Value::Number(n)) => n.as_i64().ok_or("timestamp is not an integer")?,
        Some(Value::String(s)) => parse_timestamp(s).map_err(|e| e.to_string())?,
        Some(_) => return Err("field \"timestamp\" has the wrong type".into()),
        None => return Err("missing field \"timestamp\"".into()),
    };
    let retweet_of = match obj.get("retweet_of") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(Value::Number(n)) => Some(n.to_string()),
        Some(_) => return Err("field \"retweet_of\" has the wrong type".into()),
    };
    let mentions = match obj.get("mentions") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .map(|v| v.as_str().map(String::from).ok_or("mention is not a string"))
                .collect::<std::result::Result<Vec<_>, _>>()?,
        ),
        Some(_) => return Err("field \"mentions\" has the wrong type".into()),
    };
    Tweet::new(id, timestamp, user, text, mentions, retweet_of).map_err(|e| e.to_string())
}

/// Ingest a JSONL tweet stream. Blank lines are ignored; malformed lines and
/// duplicate ids are skipped and counted, and more than half malformed is fatal.
pub fn ingest_jsonl(path: &Path, options: &IngestOptions) -> Result<(CorpusIndex, IngestStats)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(BufReader::new(file), path, options)
}

pub fn ingest_reader<R: BufRead>(
    reader: R,
    path: &Path,
    options: &IngestOptions,
) -> Result<(CorpusIndex, IngestStats)> {
    let mut stats = IngestStats::default();
    let mut tweets = Vec::new();
    let mut ids = HashSet::new();
    let mut first_error: Option<String> = None;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        stats.lines += 1;
        let parsed = parse_tweet_line(&line).and_then(|t| {
            if ids.contains(&t.id) {
                Err(format!("duplicate tweet id {:?}", t.id))
            } else {
                Ok(t)
            }
        });
        match parsed {
            Ok(t) => {
                if options.filter.as_ref().is_some_and(|f| !f(&t)) {
                    stats.filtered += 1;
                    continue;
                }
                ids.insert(t.id.clone());
                tweets.push(t);
            }
            Err(msg) => {
                stats.malformed += 1;
                first_error.get_or_insert_with(|| format!("line {}: {msg}", lineno + 1));
            }
        }
    }

    if stats.malformed * 2 > stats.lines {
        return Err(Error::TooManyMalformed {
            path: path.to_path_buf(),
            malformed: stats.malformed,
            total: stats.lines,
            first_error: first_error.unwrap_or_default(),
        });
    }
    stats.accepted = tweets.len();
    let index = CorpusIndex::from_tweets(tweets, options.span)?.with_skipped(stats.malformed);
    Ok((index, stats))
}
