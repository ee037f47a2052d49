//! Tweet ingestion and the immutable hashtag timeline index.

mod index;
mod ingest;
pub mod time;
pub mod tokenize;
mod tweet;

pub use index::{BackgroundModel, CorpusIndex, HashtagTimeline, TimeSpan, Vocabulary};
pub use ingest::{ingest_jsonl, ingest_reader, parse_tweet_line, IngestOptions, IngestStats, TweetFilter};
pub use time::{add_months, parse_timestamp, Timestamp, YearMonth};
pub use tokenize::{document_tokens, extract_hashtags, extract_mentions, word_tokens};
pub use tweet::{HashtagId, Tweet};
