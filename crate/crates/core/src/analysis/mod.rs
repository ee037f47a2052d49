//! Feature diagnostics: chi-square and information-gain rankings over
//! discretized features, and feature-group ablation.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::features::FeatureGroup;
use crate::learn::{cross_validate, Dataset, Design, EvalReport, Examples, ModelKind, TrainConfig};
use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 10;

/// Bin index of every value: binary columns keep their 0/1 value,
/// continuous ones get at most `bins` equal-frequency bins with duplicate
/// cut points merged.
pub fn discretize(values: &[f64], binary: bool, bins: usize) -> Vec<usize> {
    if binary {
        return values.iter().map(|&v| usize::from(v != 0.0)).collect();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut cuts: Vec<f64> = (1..bins).map(|i| sorted[i * n / bins]).collect();
    cuts.dedup();
    // the smallest value never opens a bin of its own
    cuts.retain(|&c| c > sorted[0]);
    values.iter().map(|&v| cuts.partition_point(|&c| c <= v)).collect()
}

fn contingency(bins: &[usize], labels: &[u8]) -> Vec<[f64; 2]> {
    let k = bins.iter().max().map_or(0, |m| m + 1);
    let mut t = vec![[0.0; 2]; k];
    for (&b, &l) in bins.iter().zip(labels) {
        t[b][l as usize] += 1.0;
    }
    t
}

/// Plain Pearson chi-square of a bin x class table.
pub fn chi_square(bins: &[usize], labels: &[u8]) -> f64 {
    let t = contingency(bins, labels);
    let n = labels.len() as f64;
    let class = [0, 1].map(|c| t.iter().map(|r| r[c]).sum::<f64>());
    t.iter()
        .map(|row| {
            let total = row[0] + row[1];
            (0..2)
                .map(|c| {
                    let e = total * class[c] / n;
                    if e > 0.0 {
                        (row[c] - e).powi(2) / e
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
        })
        .sum()
}

fn entropy2(a: f64, b: f64) -> f64 {
    let n = a + b;
    [a, b]
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| -(c / n) * (c / n).ln())
        .sum()
}

/// `H(label) - H(label | bin)`.
pub fn information_gain(bins: &[usize], labels: &[u8]) -> f64 {
    let t = contingency(bins, labels);
    let n = labels.len() as f64;
    let pos = labels.iter().filter(|&&l| l == 1).count() as f64;
    let cond: f64 = t.iter().map(|r| (r[0] + r[1]) / n * entropy2(r[0], r[1])).sum();
    (entropy2(n - pos, pos) - cond).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    ChiSquare,
    InfoGain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub rank: usize,
    pub feature: String,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub statistic: Statistic,
    pub entries: Vec<RankedFeature>,
}

impl FeatureRanking {
    pub fn write_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e| Error::io("<ranking>", e);
        writeln!(w, "rank\tstatistic\tfeature").map_err(io)?;
        for e in &self.entries {
            writeln!(w, "{}\t{}\t{}", e.rank, e.statistic, e.feature).map_err(io)?;
        }
        Ok(())
    }

    pub fn rank_of(&self, feature: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.feature == feature).map(|e| e.rank)
    }
}

fn rank(d: &Design, bins: usize, statistic: Statistic) -> Result<FeatureRanking> {
    if !d.y.contains(&0) || !d.y.contains(&1) {
        return Err(Error::SingleClass);
    }
    if bins < 2 {
        return Err(Error::invalid("need at least 2 bins"));
    }
    let stats: Vec<f64> = (0..d.columns.len())
        .into_par_iter()
        .map(|j| {
            let col: Vec<f64> = d.x.iter().map(|r| r[j]).collect();
            let b = discretize(&col, d.columns[j].binary, bins);
            match statistic {
                Statistic::ChiSquare => chi_square(&b, &d.y),
                Statistic::InfoGain => information_gain(&b, &d.y),
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..stats.len()).collect();
    // stable: equal statistics keep column order
    order.sort_by(|&a, &b| stats[b].total_cmp(&stats[a]));
    Ok(FeatureRanking {
        statistic,
        entries: order
            .into_iter()
            .enumerate()
            .map(|(r, j)| RankedFeature {
                rank: r + 1,
                feature: d.columns[j].name.clone(),
                statistic: stats[j],
            })
            .collect(),
    })
}

pub fn chi_square_rank(d: &Design, bins: usize) -> Result<FeatureRanking> {
    rank(d, bins, Statistic::ChiSquare)
}

pub fn info_gain_rank(d: &Design, bins: usize) -> Result<FeatureRanking> {
    rank(d, bins, Statistic::InfoGain)
}

/// The seven group combinations, by report key.
pub const COMBINATIONS: [(&str, &[FeatureGroup]); 7] = {
    use FeatureGroup::{HashtagContent as H, TweetContent as T, User as U};
    [
        ("all", &[H, T, U]),
        ("tweet+user", &[T, U]),
        ("tweet+hashtag", &[T, H]),
        ("hashtag+user", &[H, U]),
        ("tweet", &[T]),
        ("user", &[U]),
        ("hashtag", &[H]),
    ]
};

/// Data that can be restricted to a subset of feature groups.
pub trait GroupMask: Examples + Sized {
    fn masked(&self, groups: &[FeatureGroup]) -> Result<Self>;
}

impl GroupMask for Design {
    fn masked(&self, groups: &[FeatureGroup]) -> Result<Self> {
        let d = self.select_groups(groups);
        if d.columns.is_empty() {
            return Err(Error::invalid("no features left after masking"));
        }
        Ok(d)
    }
}

impl GroupMask for Dataset {
    fn masked(&self, groups: &[FeatureGroup]) -> Result<Self> {
        self.with_groups(groups)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationEntry {
    pub groups: Vec<FeatureGroup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<EvalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub kind: ModelKind,
    pub folds: usize,
    pub seed: u64,
    pub combinations: BTreeMap<String, AblationEntry>,
}

impl AblationReport {
    pub fn accuracy(&self, combination: &str) -> Option<f64> {
        self.combinations.get(combination)?.report.as_ref().map(|r| r.accuracy)
    }
}

/// Cross-validate every group combination with the same folds.
pub fn ablate<E: GroupMask>(data: &E, kind: ModelKind, config: &TrainConfig, folds: usize, seed: u64) -> AblationReport {
    let combinations = COMBINATIONS
        .par_iter()
        .map(|&(name, groups)| {
            let result = data
                .masked(groups)
                .and_then(|d| cross_validate(&d, kind, config, folds, seed));
            let entry = AblationEntry {
                groups: groups.to_vec(),
                error: result.as_ref().err().map(|e| e.to_string()),
                report: result.ok(),
            };
            (name.to_string(), entry)
        })
        .collect();
    AblationReport {
        kind,
        folds,
        seed,
        combinations,
    }
}
