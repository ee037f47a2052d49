//! Design matrices, labeled feature datasets, standardization and
//! stratified splits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compound::Popularity;
use crate::features::{Column, ComboSchema, FeatureGroup, FeatureSchema, FeatureTable, RawFeatures};
use crate::{Error, Result};

/// A plain numeric matrix with labels (1 = popular, 0 = unpopular).
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub columns: Vec<Column>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<u8>,
}

impl Design {
    pub fn new(columns: Vec<Column>, x: Vec<Vec<f64>>, y: Vec<u8>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::invalid(format!("{} rows but {} labels", x.len(), y.len())));
        }
        if let Some(r) = x.iter().position(|r| r.len() != columns.len()) {
            return Err(Error::invalid(format!("row {r} has {} values, expected {}", x[r].len(), columns.len())));
        }
        if x.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("design matrix has non-finite entries"));
        }
        if let Some(bad) = y.iter().find(|&&v| v > 1) {
            return Err(Error::invalid(format!("label {bad} is not 0/1")));
        }
        Ok(Design { columns, x, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn subset(&self, idx: &[usize]) -> Design {
        Design {
            columns: self.columns.clone(),
            x: idx.iter().map(|&i| self.x[i].clone()).collect(),
            y: idx.iter().map(|&i| self.y[i]).collect(),
        }
    }

    /// Keep only the columns of the given groups.
    pub fn select_groups(&self, groups: &[FeatureGroup]) -> Design {
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&j| groups.contains(&self.columns[j].group))
            .collect();
        Design {
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            x: self.x.iter().map(|r| keep.iter().map(|&j| r[j]).collect()).collect(),
            y: self.y.clone(),
        }
    }
}

/// Labeled candidates kept in schema-independent form so that the
/// combination lists can be derived from whichever rows are used for
/// training.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub rows: Vec<RawFeatures>,
    pub labels: Vec<u8>,
    pub groups: Vec<FeatureGroup>,
}

impl Dataset {
    pub fn new(rows: Vec<RawFeatures>, labels: Vec<u8>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::invalid(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        Ok(Dataset {
            rows,
            labels,
            groups: FeatureGroup::ALL.to_vec(),
        })
    }

    /// Labeled rows of a feature table; unlabeled rows are dropped.
    pub fn from_table(table: FeatureTable) -> Result<Self> {
        let (rows, labels): (Vec<_>, Vec<_>) = table
            .rows
            .into_iter()
            .zip(table.labels)
            .filter_map(|(r, l)| l.map(|l| (r, l.as_class())))
            .unzip();
        Dataset::new(rows, labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn with_groups(&self, groups: &[FeatureGroup]) -> Result<Dataset> {
        if groups.is_empty() {
            return Err(Error::invalid("at least one feature group is required"));
        }
        Ok(Dataset {
            groups: groups.to_vec(),
            ..self.clone()
        })
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            groups: self.groups.clone(),
        }
    }

    /// Combination schema derived from the given rows.
    pub fn derive_schema(&self, idx: &[usize]) -> ComboSchema {
        ComboSchema::derive(idx.iter().map(|&i| &self.rows[i].keys).collect::<Vec<_>>())
    }

    /// Numeric view of `idx` under `combo`, restricted to the selected groups.
    pub fn design(&self, combo: &ComboSchema, idx: &[usize]) -> Design {
        let schema = FeatureSchema::new(combo.clone());
        let full = Design {
            columns: schema.columns().to_vec(),
            x: idx.iter().map(|&i| schema.values(&self.rows[i])).collect(),
            y: idx.iter().map(|&i| self.labels[i]).collect(),
        };
        full.select_groups(&self.groups)
    }

    /// Design over all rows with the schema derived from all rows.
    pub fn full_design(&self) -> (ComboSchema, Design) {
        let all: Vec<usize> = (0..self.len()).collect();
        let combo = self.derive_schema(&all);
        let d = self.design(&combo, &all);
        (combo, d)
    }
}

pub(crate) fn label_of(class: u8) -> Popularity {
    if class == 1 {
        Popularity::Popular
    } else {
        Popularity::Unpopular
    }
}

/// Per-column z-score parameters. Binary columns pass through unchanged and
/// zero-variance columns map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub binary: Vec<bool>,
}

pub fn standardize_fit(d: &Design) -> Standardizer {
    let m = d.columns.len();
    let n = d.len().max(1) as f64;
    let mut mean = vec![0.0; m];
    for r in &d.x {
        for (s, v) in mean.iter_mut().zip(r) {
            *s += v;
        }
    }
    mean.iter_mut().for_each(|s| *s /= n);
    let mut var = vec![0.0; m];
    for r in &d.x {
        for j in 0..m {
            var[j] += (r[j] - mean[j]).powi(2);
        }
    }
    Standardizer {
        mean,
        std: var.into_iter().map(|v| (v / n).sqrt()).collect(),
        binary: d.columns.iter().map(|c| c.binary).collect(),
    }
}

impl Standardizer {
    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                if self.binary[j] {
                    v
                } else if self.std[j] > 1e-12 {
                    (v - self.mean[j]) / self.std[j]
                } else {
                    0.0
                }
            })
            .collect()
    }
}

pub fn standardize_apply(stats: &Standardizer, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| stats.apply_row(r)).collect()
}

/// Stratified folds: each class is shuffled, the classes are concatenated
/// and rows are dealt round-robin.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::invalid("need at least 2 folds"));
    }
    if k > labels.len() {
        return Err(Error::invalid(format!("{k} folds for {} rows", labels.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(labels.len());
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        order.extend(idx);
    }
    let mut folds = vec![Vec::new(); k];
    for (i, row) in order.into_iter().enumerate() {
        folds[i % k].push(row);
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Indices of a class-balanced subsample: the majority class is randomly
/// down-sampled to the minority size. Output is in row order.
pub fn balance_classes(labels: &[u8], seed: u64) -> Result<Vec<usize>> {
    let pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 1).collect();
    let neg: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 0).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::SingleClass);
    }
    let (mut major, minor) = if pos.len() >= neg.len() { (pos, neg) } else { (neg, pos) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    major.shuffle(&mut rng);
    major.truncate(minor.len());
    let mut out: Vec<usize> = major.into_iter().chain(minor).collect();
    out.sort_unstable();
    Ok(out)
}
