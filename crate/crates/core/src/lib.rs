//! Hashtag compound mining and popularity prediction.
//!
//! The pipeline runs in stages, each backed by one module:
//!
//! - [`corpus`]: JSONL tweet ingestion and an immutable per-hashtag timeline index.
//! - [`lexicon`]: dictionary, n-gram table, POS lexicon and entity gazetteer.
//! - [`compound`]: `#AB = #A + #B` detection, eligibility filtering, popularity
//!   labels, trend categories and hashtag segmentation.
//! - [`topicmodel`]: collapsed Gibbs LDA over hashtag documents.
//! - [`features`]: hashtag-content, tweet-content and user features.
//! - [`learn`]: logistic regression, linear SVM, cross validation and metrics.
//! - [`analysis`]: chi-square / information-gain ranking and group ablation.
//! - [`synth`]: deterministic synthetic corpora with planted compounds.

pub mod analysis;
pub mod compound;
pub mod corpus;
pub mod error;
pub mod features;
pub mod learn;
pub mod lexicon;
pub mod synth;
pub mod topicmodel;

pub use error::{Error, Result};
