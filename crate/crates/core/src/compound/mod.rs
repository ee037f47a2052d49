//! Compound detection (`#AB = #A + #B`), eligibility, popularity labels,
//! monthly trend categories and hashtag segmentation.

mod detect;
mod label;
mod segment;
mod tsv;

pub use detect::{detect_candidates, filter_eligible, observation_window, CompoundCandidate, MIN_COMPOUND_LEN};
pub use label::{classify_trend, label_candidate, Popularity, PopularityLabel, TrendCategory, HORIZONS};
pub use segment::{segment_hashtag, CamelDictionarySegmenter, Segmenter};
pub use tsv::{read_candidates, write_candidates, LabelCell, LabeledCandidate};
