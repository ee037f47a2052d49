//! Popular/unpopular classifiers and their evaluation.

mod data;
mod linear;
mod metrics;

use rayon::prelude::*;

use crate::features::ComboSchema;
use crate::Result;

pub use data::{
    balance_classes, standardize_apply, standardize_fit, stratified_folds, Dataset, Design, Standardizer,
};
pub use linear::{
    gradient, objective, train, train_linsvm, train_logreg, train_with_history, LinearModel, ModelKind, Prediction,
    TrainConfig,
};
pub use metrics::{roc_auc, ClassMetrics, EvalReport, FoldResult};

/// Anything that can produce train/test designs for a split. Candidate
/// datasets re-derive their combination lists from the training rows.
pub trait Examples: Sync {
    fn labels(&self) -> &[u8];

    fn split(&self, train: &[usize], test: &[usize]) -> (Design, Design, Option<ComboSchema>);

    /// Train on every row.
    fn fit(&self, kind: ModelKind, config: &TrainConfig) -> Result<LinearModel> {
        let all: Vec<usize> = (0..self.labels().len()).collect();
        let (d, _, combo) = self.split(&all, &[]);
        let mut m = train(kind, &d, config)?;
        m.combo = combo;
        Ok(m)
    }
}

impl Examples for Design {
    fn labels(&self) -> &[u8] {
        &self.y
    }

    fn split(&self, train: &[usize], test: &[usize]) -> (Design, Design, Option<ComboSchema>) {
        (self.subset(train), self.subset(test), None)
    }
}

impl Examples for Dataset {
    fn labels(&self) -> &[u8] {
        &self.labels
    }

    fn split(&self, train: &[usize], test: &[usize]) -> (Design, Design, Option<ComboSchema>) {
        let combo = self.derive_schema(train);
        (self.design(&combo, train), self.design(&combo, test), Some(combo))
    }
}

struct FoldOutput {
    result: FoldResult,
    test: Vec<usize>,
    predicted: Vec<u8>,
    scores: Vec<f64>,
}

fn run_fold<E: Examples>(
    data: &E,
    kind: ModelKind,
    config: &TrainConfig,
    fold: usize,
    train_idx: &[usize],
    test_idx: &[usize],
) -> Result<FoldOutput> {
    let (tr, te, _) = data.split(train_idx, test_idx);
    let model = train(kind, &tr, config)?;
    let mut predicted = Vec::with_capacity(te.len());
    let mut scores = Vec::with_capacity(te.len());
    for row in &te.x {
        let p = model.predict(row)?;
        predicted.push(p.label.as_class());
        scores.push(p.score);
    }
    let hits = predicted.iter().zip(&te.y).filter(|(p, y)| p == y).count();
    Ok(FoldOutput {
        result: FoldResult {
            fold,
            train_rows: tr.len(),
            test_rows: te.len(),
            accuracy: hits as f64 / te.len().max(1) as f64,
            roc_area: roc_auc(&scores, &te.y),
        },
        test: test_idx.to_vec(),
        predicted,
        scores,
    })
}

fn pooled(labels: &[u8], outputs: Vec<FoldOutput>) -> EvalReport {
    let mut l = Vec::new();
    let mut p = Vec::new();
    let mut s = Vec::new();
    let mut folds = Vec::new();
    for o in outputs {
        l.extend(o.test.iter().map(|&i| labels[i]));
        p.extend(o.predicted);
        s.extend(o.scores);
        folds.push(o.result);
    }
    EvalReport::from_predictions(&l, &p, &s, folds)
}

/// Stratified k-fold cross-validation; metrics use the pooled test
/// predictions. Folds train in parallel and report in fold order.
pub fn cross_validate<E: Examples>(
    data: &E,
    kind: ModelKind,
    config: &TrainConfig,
    folds: usize,
    seed: u64,
) -> Result<EvalReport> {
    let labels = data.labels();
    let parts = stratified_folds(labels, folds, seed)?;
    let outputs = (0..parts.len())
        .into_par_iter()
        .map(|k| {
            let train_idx: Vec<usize> = parts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .flat_map(|(_, f)| f.iter().copied())
                .collect();
            let mut train_idx = train_idx;
            train_idx.sort_unstable();
            run_fold(data, kind, config, k, &train_idx, &parts[k])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pooled(labels, outputs))
}

/// Stratified 9:1 split: the test set is the first of ten stratified folds.
pub fn holdout_split(labels: &[u8], seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let parts = stratified_folds(labels, 10, seed)?;
    let mut train: Vec<usize> = parts[1..].concat();
    train.sort_unstable();
    Ok((train, parts[0].clone()))
}

pub fn holdout_evaluate<E: Examples>(data: &E, kind: ModelKind, config: &TrainConfig, seed: u64) -> Result<EvalReport> {
    let (train_idx, test_idx) = holdout_split(data.labels(), seed)?;
    let out = run_fold(data, kind, config, 0, &train_idx, &test_idx)?;
    Ok(pooled(data.labels(), vec![out]))
}
