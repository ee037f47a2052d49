//! Classification metrics over pooled predictions.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Mann-Whitney AUC of `scores` for the positive class (label 1); ties
/// count one half. 0.5 when either class is absent.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let n_pos = labels.iter().filter(|&&l| l == 1).count() as f64;
    let n_neg = labels.len() as f64 - n_pos;
    if n_pos == 0.0 || n_neg == 0.0 {
        return 0.5;
    }
    // midranks over tie groups
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += order[i..=j].iter().filter(|&&k| labels[k] == 1).count() as f64 * mid;
        i = j + 1;
    }
    (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub support: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub accuracy: f64,
    pub roc_area: f64,
}

/// Weighted-average metrics. `confusion[actual][predicted]`, index 1 is
/// the popular class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    pub roc_area: f64,
    pub per_class: [ClassMetrics; 2],
    pub confusion: [[usize; 2]; 2],
    pub folds: Vec<FoldResult>,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl EvalReport {
    pub fn from_predictions(labels: &[u8], predicted: &[u8], scores: &[f64], folds: Vec<FoldResult>) -> Self {
        let mut confusion = [[0usize; 2]; 2];
        for (&a, &p) in labels.iter().zip(predicted) {
            confusion[a as usize][p as usize] += 1;
        }
        let n = labels.len();
        let per_class = [0, 1].map(|c| {
            let tp = confusion[c][c];
            let support = confusion[c][0] + confusion[c][1];
            let precision = ratio(tp, confusion[0][c] + confusion[1][c]);
            let recall = ratio(tp, support);
            let f_score = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                support,
                precision,
                recall,
                f_score,
            }
        });
        let weighted = |f: fn(&ClassMetrics) -> f64| {
            per_class.iter().map(|m| m.support as f64 * f(m)).sum::<f64>() / n.max(1) as f64
        };
        EvalReport {
            rows: n,
            accuracy: ratio(confusion[0][0] + confusion[1][1], n),
            precision: weighted(|m| m.precision),
            recall: weighted(|m| m.recall),
            f_score: weighted(|m| m.f_score),
            // the AUC of the negative class under negated scores is the same
            roc_area: roc_auc(scores, labels),
            per_class,
            confusion,
            folds,
        }
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>9} {:>9} {:>9} {:>9} {:>9}", "", "accuracy", "precision", "recall", "f-score", "roc-area")?;
        writeln!(
            f,
            "{:<10} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            "weighted", self.accuracy, self.precision, self.recall, self.f_score, self.roc_area
        )?;
        for (name, m) in ["unpopular", "popular"].iter().zip(&self.per_class) {
            writeln!(f, "{:<10} {:>9} {:>9.4} {:>9.4} {:>9.4} {:>9}", name, "", m.precision, m.recall, m.f_score, "")?;
        }
        writeln!(f, "confusion (rows actual, cols predicted: unpopular popular)")?;
        writeln!(f, "  unpopular {:>6} {:>6}", self.confusion[0][0], self.confusion[0][1])?;
        write!(f, "  popular   {:>6} {:>6}", self.confusion[1][0], self.confusion[1][1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Pairwise definition of AUC.
    fn auc_oracle(scores: &[f64], labels: &[u8]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                if labels[i] == 1 && labels[j] == 0 {
                    den += 1.0;
                    num += if scores[i] > scores[j] {
                        1.0
                    } else if scores[i] == scores[j] {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
        if den == 0.0 {
            0.5
        } else {
            num / den
        }
    }

    #[test]
    fn auc_examples() {
        assert_eq!(roc_auc(&[0.1, 0.2, 0.8, 0.9], &[0, 0, 1, 1]), 1.0);
        assert_eq!(roc_auc(&[0.9, 0.8, 0.2, 0.1], &[0, 0, 1, 1]), 0.0);
        assert_eq!(roc_auc(&[0.3; 4], &[0, 1, 0, 1]), 0.5);
        assert_eq!(roc_auc(&[0.3, 0.4], &[1, 1]), 0.5);
    }

    #[test]
    fn report_arithmetic() {
        let labels = [1, 1, 1, 0, 0];
        let pred = [1, 1, 0, 0, 1];
        let r = EvalReport::from_predictions(&labels, &pred, &[0.9, 0.8, 0.4, 0.1, 0.6], vec![]);
        assert_eq!(r.confusion, [[1, 1], [1, 2]]);
        assert!((r.accuracy - 0.6).abs() < 1e-12);
        // popular: p = 2/3, r = 2/3; unpopular: p = 1/2, r = 1/2
        assert!((r.precision - (3.0 * 2.0 / 3.0 + 2.0 * 0.5) / 5.0).abs() < 1e-12);
        assert!((r.recall - r.accuracy).abs() < 1e-12);
        let total: usize = r.confusion.iter().flatten().sum();
        assert_eq!(total, 5);
        assert!(r.to_string().contains("weighted"));
    }

    proptest! {
        #[test]
        fn auc_matches_pairwise(data in prop::collection::vec((0u8..5, 0u8..2), 1..40)) {
            let scores: Vec<f64> = data.iter().map(|d| f64::from(d.0)).collect();
            let labels: Vec<u8> = data.iter().map(|d| d.1).collect();
            prop_assert!((roc_auc(&scores, &labels) - auc_oracle(&scores, &labels)).abs() < 1e-12);
        }

        #[test]
        fn metrics_bounded(data in prop::collection::vec((0u8..2, 0u8..2, 0.0f64..1.0), 1..40)) {
            let l: Vec<u8> = data.iter().map(|d| d.0).collect();
            let p: Vec<u8> = data.iter().map(|d| d.1).collect();
            let s: Vec<f64> = data.iter().map(|d| d.2).collect();
            let r = EvalReport::from_predictions(&l, &p, &s, vec![]);
            for v in [r.accuracy, r.precision, r.recall, r.f_score, r.roc_area] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            prop_assert_eq!(r.confusion.iter().flatten().sum::<usize>(), l.len());
        }
    }
}
