use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::detect::CompoundCandidate;
use crate::corpus::{add_months, CorpusIndex};
use crate::{Error, Result};

/// Prediction horizons in months.
pub const HORIZONS: [u32; 3] = [2, 6, 10];

const TREND_MONTHS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Popularity {
    Popular,
    Unpopular,
}

impl Popularity {
    pub fn as_class(self) -> u8 {
        match self {
            Popularity::Popular => 1,
            Popularity::Unpopular => 0,
        }
    }
}

impl fmt::Display for Popularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Popularity::Popular => "Popular",
            Popularity::Unpopular => "Unpopular",
        })
    }
}

impl FromStr for Popularity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Popular" => Ok(Popularity::Popular),
            "Unpopular" => Ok(Popularity::Unpopular),
            _ => Err(Error::invalid(format!("unknown label {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopularityLabel {
    pub value: Popularity,
    pub horizon_months: u32,
    pub freq_ab: usize,
    pub freq_a: usize,
    pub freq_b: usize,
}

impl PopularityLabel {
    /// Popular iff the compound strictly out-frequencies both constituents.
    pub fn from_counts(horizon_months: u32, freq_ab: usize, freq_a: usize, freq_b: usize) -> Self {
        let value = if freq_ab > freq_a && freq_ab > freq_b {
            Popularity::Popular
        } else {
            Popularity::Unpopular
        };
        PopularityLabel {
            value,
            horizon_months,
            freq_ab,
            freq_a,
            freq_b,
        }
    }
}

/// Label from cumulative usage over `(t0, t0 + horizon]`. The index must
/// cover the whole horizon.
pub fn label_candidate(index: &CorpusIndex, cand: &CompoundCandidate, horizon_months: u32) -> Result<PopularityLabel> {
    if horizon_months == 0 {
        return Err(Error::invalid("horizon must be at least one month"));
    }
    let from = cand.t0();
    let to = add_months(from, horizon_months as i32);
    index.ensure_covers(from, to)?;
    let freq = |h: &str| index.window_frequency(h, from, to);
    Ok(PopularityLabel::from_counts(
        horizon_months,
        freq(cand.compound.canonical())?,
        freq(cand.part_a.canonical())?,
        freq(cand.part_b.canonical())?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrendCategory {
    AlwaysHigher,
    AllButOneMonth,
    AllButTwoMonths,
    Other,
}

impl TrendCategory {
    pub fn from_failures(failed_months: usize) -> Self {
        match failed_months {
            0 => TrendCategory::AlwaysHigher,
            1 => TrendCategory::AllButOneMonth,
            2 => TrendCategory::AllButTwoMonths,
            _ => TrendCategory::Other,
        }
    }
}

impl fmt::Display for TrendCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrendCategory::AlwaysHigher => "AlwaysHigher",
            TrendCategory::AllButOneMonth => "AllButOneMonth",
            TrendCategory::AllButTwoMonths => "AllButTwoMonths",
            TrendCategory::Other => "Other",
        })
    }
}

impl FromStr for TrendCategory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "AlwaysHigher" => Ok(TrendCategory::AlwaysHigher),
            "AllButOneMonth" => Ok(TrendCategory::AllButOneMonth),
            "AllButTwoMonths" => Ok(TrendCategory::AllButTwoMonths),
            "Other" => Ok(TrendCategory::Other),
            _ => Err(Error::invalid(format!("unknown trend {s:?}"))),
        }
    }
}

/// Trend over the 10 months after compounding. Month `m` is the window
/// `(t0 + (m-1) months, t0 + m months]`; a month fails when the compound
/// does not exceed both constituents in it. Only defined for compounds that
/// are popular at 10 months.
pub fn classify_trend(index: &CorpusIndex, cand: &CompoundCandidate) -> Result<TrendCategory> {
    let label = label_candidate(index, cand, TREND_MONTHS)?;
    if label.value != Popularity::Popular {
        return Err(Error::invalid(format!("{} is not popular at 10 months", cand.compound)));
    }
    let t0 = cand.t0();
    let mut failed = 0;
    for m in 1..=TREND_MONTHS as i32 {
        let (from, to) = (add_months(t0, m - 1), add_months(t0, m));
        let f = |h: &str| index.window_frequency(h, from, to);
        let (ab, a, b) = (f(cand.compound.canonical())?, f(cand.part_a.canonical())?, f(cand.part_b.canonical())?);
        if !(ab > a && ab > b) {
            failed += 1;
        }
    }
    Ok(TrendCategory::from_failures(failed))
}
