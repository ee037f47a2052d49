//! `compound\tpartA\tpartB\tsplit_index\tcompound_first_seen\tlabel_T2\tlabel_T6\tlabel_T10`
//! with an optional trailing `trend` column.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use super::detect::CompoundCandidate;
use super::label::{Popularity, TrendCategory};
use crate::corpus::{CorpusIndex, HashtagId};
use crate::{Error, Result};

const HEADER: &str = "compound\tpartA\tpartB\tsplit_index\tcompound_first_seen\tlabel_T2\tlabel_T6\tlabel_T10";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelCell {
    /// Not computed (`-`).
    Unlabeled,
    /// Horizon not covered by the data (`NA`).
    NotAvailable,
    Value(Popularity),
}

impl fmt::Display for LabelCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelCell::Unlabeled => f.write_str("-"),
            LabelCell::NotAvailable => f.write_str("NA"),
            LabelCell::Value(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for LabelCell {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "-" => Ok(LabelCell::Unlabeled),
            "NA" => Ok(LabelCell::NotAvailable),
            other => other.parse().map(LabelCell::Value),
        }
    }
}

impl LabelCell {
    pub fn value(self) -> Option<Popularity> {
        match self {
            LabelCell::Value(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCandidate {
    pub candidate: CompoundCandidate,
    /// Labels at 2, 6 and 10 months.
    pub labels: [LabelCell; 3],
    pub trend: Option<TrendCategory>,
}

impl LabeledCandidate {
    pub fn unlabeled(candidate: CompoundCandidate) -> Self {
        LabeledCandidate {
            candidate,
            labels: [LabelCell::Unlabeled; 3],
            trend: None,
        }
    }

    pub fn label_at(&self, horizon: u32) -> Option<Popularity> {
        let slot = super::HORIZONS.iter().position(|&h| h == horizon)?;
        self.labels[slot].value()
    }
}

/// Write rows sorted by canonical compound then first appearance.
pub fn write_candidates<W: Write>(mut w: W, rows: &[LabeledCandidate], with_trend: bool) -> Result<()> {
    let mut sorted: Vec<&LabeledCandidate> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        (a.candidate.compound.canonical(), a.candidate.t0()).cmp(&(b.candidate.compound.canonical(), b.candidate.t0()))
    });
    let io = |e| Error::io("<candidates>", e);
    write!(w, "{HEADER}").map_err(io)?;
    if with_trend {
        write!(w, "\ttrend").map_err(io)?;
    }
    writeln!(w).map_err(io)?;
    for r in sorted {
        let c = &r.candidate;
        write!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.compound.display(),
            c.part_a.display(),
            c.part_b.display(),
            c.split_index,
            c.compound_first_seen,
            r.labels[0],
            r.labels[1],
            r.labels[2]
        )
        .map_err(io)?;
        if with_trend {
            match r.trend {
                Some(t) => write!(w, "\t{t}").map_err(io)?,
                None => write!(w, "\t-").map_err(io)?,
            }
        }
        writeln!(w).map_err(io)?;
    }
    Ok(())
}

/// Read candidate rows, resolving constituents against the index.
pub fn read_candidates<R: BufRead>(r: R, index: &CorpusIndex) -> Result<Vec<LabeledCandidate>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<candidates>", e))?;
        if i == 0 && line.starts_with("compound\t") {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| Error::Parse {
            path: "<candidates>".into(),
            line: i + 1,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 8 && cols.len() != 9 {
            return Err(bad(format!("expected 8 or 9 columns, found {}", cols.len())));
        }
        let compound = HashtagId::new(cols[0]).map_err(|e| bad(e.to_string()))?;
        let split: usize = cols[3].parse().map_err(|_| bad(format!("bad split index {:?}", cols[3])))?;
        let t0: i64 = cols[4].parse().map_err(|_| bad(format!("bad timestamp {:?}", cols[4])))?;
        let candidate = CompoundCandidate::from_index(index, compound.canonical(), split).map_err(|e| bad(e.to_string()))?;
        let a = HashtagId::new(cols[1]).map_err(|e| bad(e.to_string()))?;
        let b = HashtagId::new(cols[2]).map_err(|e| bad(e.to_string()))?;
        if candidate.part_a.canonical() != a.canonical() || candidate.part_b.canonical() != b.canonical() {
            return Err(bad("constituents do not match the split".into()));
        }
        if candidate.t0() != t0 {
            return Err(bad(format!("first appearance {t0} disagrees with index ({})", candidate.t0())));
        }
        let mut labels = [LabelCell::Unlabeled; 3];
        for (slot, col) in labels.iter_mut().zip(&cols[5..8]) {
            *slot = col.parse().map_err(|e: Error| bad(e.to_string()))?;
        }
        let trend = match cols.get(8) {
            None | Some(&"-") => None,
            Some(t) => Some(t.parse().map_err(|e: Error| bad(e.to_string()))?),
        };
        out.push(LabeledCandidate { candidate, labels, trend });
    }
    Ok(out)
}
