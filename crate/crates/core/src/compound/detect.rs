use serde::{Deserialize, Serialize};

use crate::corpus::{add_months, CorpusIndex, HashtagId, Timestamp};
use crate::{Error, Result};

/// Minimum canonical length of a compound hashtag.
pub const MIN_COMPOUND_LEN: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompoundCandidate {
    pub compound: HashtagId,
    /// Byte (= character, hashtags are ASCII) offset of the split in the
    /// canonical compound.
    pub split_index: usize,
    pub part_a: HashtagId,
    pub part_b: HashtagId,
    pub compound_first_seen: Timestamp,
    pub a_first_seen: Timestamp,
    pub b_first_seen: Timestamp,
}

impl CompoundCandidate {
    /// Compounding time `t0`.
    pub fn t0(&self) -> Timestamp {
        self.compound_first_seen
    }

    pub(crate) fn from_index(index: &CorpusIndex, compound: &str, split_index: usize) -> Result<Self> {
        let canon = compound.to_ascii_lowercase();
        if split_index == 0 || split_index >= canon.len() || !canon.is_char_boundary(split_index) {
            return Err(Error::invalid(format!("split {split_index} out of range for {compound}")));
        }
        let lookup = |h: &str| {
            index
                .timeline(h)
                .map(|tl| (HashtagId::new(&tl.display), tl.first_seen))
                .ok_or_else(|| Error::invalid(format!("hashtag #{h} not in index")))
        };
        let (c, t0) = lookup(&canon)?;
        let (a, ta) = lookup(&canon[..split_index])?;
        let (b, tb) = lookup(&canon[split_index..])?;
        Ok(CompoundCandidate {
            compound: c?,
            split_index,
            part_a: a?,
            part_b: b?,
            compound_first_seen: t0,
            a_first_seen: ta,
            b_first_seen: tb,
        })
    }
}

/// The observation window `(t0 - months, t0)` as a half-open `(from, to]`
/// pair over integer seconds.
pub fn observation_window(t0: Timestamp, months: u32) -> (Timestamp, Timestamp) {
    (add_months(t0, -(months as i32)), t0 - 1)
}

/// Hashtags of length >= 6 first seen inside `[from, to]` that split into
/// exactly one pair of strictly earlier hashtags. Output is sorted by
/// canonical compound.
pub fn detect_candidates(index: &CorpusIndex, from: Timestamp, to: Timestamp) -> Vec<CompoundCandidate> {
    let mut out = Vec::new();
    for (canon, tl) in index.hashtags() {
        if canon.len() < MIN_COMPOUND_LEN || tl.first_seen < from || tl.first_seen > to {
            continue;
        }
        let t0 = tl.first_seen;
        let precedes = |h: &str| index.first_seen(h).is_some_and(|t| t < t0);
        let mut valid = (1..canon.len()).filter(|&i| precedes(&canon[..i]) && precedes(&canon[i..]));
        if let (Some(split), None) = (valid.next(), valid.next()) {
            out.push(CompoundCandidate::from_index(index, canon, split).expect("parts exist in index"));
        }
    }
    out
}

/// Keep candidates whose constituents each occur in at least `min_support`
/// tweets during the `obs_months` before compounding.
pub fn filter_eligible(
    candidates: Vec<CompoundCandidate>,
    index: &CorpusIndex,
    min_support: usize,
    obs_months: u32,
) -> Vec<CompoundCandidate> {
    candidates
        .into_iter()
        .filter(|c| {
            let (from, to) = observation_window(c.t0(), obs_months);
            let support = |h: &HashtagId| index.window_frequency(h.canonical(), from, to).unwrap_or(0);
            support(&c.part_a) >= min_support && support(&c.part_b) >= min_support
        })
        .collect()
}
