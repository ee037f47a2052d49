//! Collapsed Gibbs sampling LDA over hashtag documents.

mod documents;
mod lda;

pub use documents::{build_documents, document_key, documents_for_candidates, HashtagDocument};
pub use lda::{fit_lda, fit_lda_observed, GibbsState, LdaConfig, TopicModel, TopicRanking};
