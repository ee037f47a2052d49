//! L2-regularized logistic regression and linear SVM trained by full-batch
//! (sub)gradient descent.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compound::Popularity;
use crate::features::{ComboSchema, FeatureGroup, FeatureSchema, RawFeatures};
use crate::{Error, Result};

use super::data::{label_of, standardize_apply, standardize_fit, Design, Standardizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Logreg,
    Linsvm,
}

impl ModelKind {
    pub fn threshold(self) -> f64 {
        match self {
            ModelKind::Logreg => 0.5,
            ModelKind::Linsvm => 0.0,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Logreg => "logreg",
            ModelKind::Linsvm => "linsvm",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logreg" => Ok(ModelKind::Logreg),
            "linsvm" | "svm" => Ok(ModelKind::Linsvm),
            _ => Err(Error::invalid(format!("unknown model kind {s:?} (logreg or linsvm)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 500,
            l2: 1e-3,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning rate must be positive"));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::invalid("l2 must be non-negative"));
        }
        Ok(())
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Regularized training objective: mean loss plus `l2 / 2 * |w|^2`; the
/// bias is not regularized.
pub fn objective(kind: ModelKind, w: &[f64], b: f64, x: &[Vec<f64>], y: &[u8], l2: f64) -> f64 {
    let n = x.len() as f64;
    let loss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| {
            let z = dot(w, xi) + b;
            match kind {
                ModelKind::Logreg => softplus(z) - f64::from(yi) * z,
                ModelKind::Linsvm => (1.0 - (2.0 * f64::from(yi) - 1.0) * z).max(0.0),
            }
        })
        .sum();
    loss / n + 0.5 * l2 * dot(w, w)
}

/// Gradient (a subgradient for the hinge loss) of [`objective`].
pub fn gradient(kind: ModelKind, w: &[f64], b: f64, x: &[Vec<f64>], y: &[u8], l2: f64) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (xi, &yi) in x.iter().zip(y) {
        let z = dot(w, xi) + b;
        let coef = match kind {
            ModelKind::Logreg => sigmoid(z) - f64::from(yi),
            ModelKind::Linsvm => {
                let s = 2.0 * f64::from(yi) - 1.0;
                if s * z < 1.0 {
                    -s
                } else {
                    0.0
                }
            }
        };
        if coef != 0.0 {
            for (g, v) in gw.iter_mut().zip(xi) {
                *g += coef * v;
            }
            gb += coef;
        }
    }
    for (g, wj) in gw.iter_mut().zip(w) {
        *g = *g / n + l2 * wj;
    }
    (gw, gb / n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Popularity,
    pub score: f64,
}

/// A trained linear classifier together with everything needed to score a
/// raw feature row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub format: String,
    pub version: u32,
    pub kind: ModelKind,
    pub columns: Vec<String>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: TrainConfig,
    pub standardizer: Standardizer,
    /// Combination lists the model was trained with, when trained on
    /// candidate features.
    pub combo: Option<ComboSchema>,
    pub groups: Vec<FeatureGroup>,
    pub final_loss: f64,
}

/// Standardize, then run full-batch gradient descent. Returns the model and
/// the objective before each epoch plus after the last.
pub fn train_with_history(kind: ModelKind, d: &Design, config: &TrainConfig) -> Result<(LinearModel, Vec<f64>)> {
    config.validate()?;
    if d.len() < 2 || !d.y.contains(&0) || !d.y.contains(&1) {
        return Err(Error::SingleClass);
    }
    let stats = standardize_fit(d);
    let x = standardize_apply(&stats, &d.x);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut w: Vec<f64> = (0..d.columns.len()).map(|_| rng.gen_range(-0.01..0.01)).collect();
    let mut b = 0.0;
    let mut history = Vec::with_capacity(config.epochs + 1);
    for _ in 0..config.epochs {
        history.push(objective(kind, &w, b, &x, &d.y, config.l2));
        let (gw, gb) = gradient(kind, &w, b, &x, &d.y, config.l2);
        for (wj, g) in w.iter_mut().zip(&gw) {
            *wj -= config.learning_rate * g;
        }
        b -= config.learning_rate * gb;
    }
    let final_loss = objective(kind, &w, b, &x, &d.y, config.l2);
    history.push(final_loss);
    let mut groups: Vec<FeatureGroup> = d.columns.iter().map(|c| c.group).collect();
    groups.sort_unstable();
    groups.dedup();
    let model = LinearModel {
        format: "hashmerge-model".into(),
        version: 1,
        kind,
        columns: d.columns.iter().map(|c| c.name.clone()).collect(),
        weights: w,
        bias: b,
        config: *config,
        standardizer: stats,
        combo: None,
        groups,
        final_loss,
    };
    Ok((model, history))
}

pub fn train(kind: ModelKind, d: &Design, config: &TrainConfig) -> Result<LinearModel> {
    train_with_history(kind, d, config).map(|(m, _)| m)
}

pub fn train_logreg(d: &Design, config: &TrainConfig) -> Result<LinearModel> {
    train(ModelKind::Logreg, d, config)
}

pub fn train_linsvm(d: &Design, config: &TrainConfig) -> Result<LinearModel> {
    train(ModelKind::Linsvm, d, config)
}

impl LinearModel {
    /// Score of an unstandardized row laid out like [`LinearModel::columns`].
    pub fn score(&self, row: &[f64]) -> f64 {
        let z = dot(&self.weights, &self.standardizer.apply_row(row)) + self.bias;
        match self.kind {
            ModelKind::Logreg => sigmoid(z),
            ModelKind::Linsvm => z,
        }
    }

    pub fn predict(&self, row: &[f64]) -> Result<Prediction> {
        if row.len() != self.weights.len() {
            return Err(Error::Schema(format!("row has {} values, model expects {}", row.len(), self.weights.len())));
        }
        let score = self.score(row);
        Ok(Prediction {
            label: label_of(u8::from(score > self.kind.threshold())),
            score,
        })
    }

    /// Lay out a raw candidate row with the model's combination lists and
    /// groups, then predict.
    pub fn predict_raw(&self, raw: &RawFeatures) -> Result<Prediction> {
        let combo = self
            .combo
            .clone()
            .ok_or_else(|| Error::Schema("model was not trained on candidate features".into()))?;
        let schema = FeatureSchema::new(combo);
        let values = schema.values(raw);
        let row: Vec<f64> = schema
            .columns()
            .iter()
            .zip(values)
            .filter(|(c, _)| self.groups.contains(&c.group))
            .map(|(_, v)| v)
            .collect();
        self.predict(&row)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(f), self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: LinearModel = serde_json::from_str(&text)?;
        if m.format != "hashmerge-model" || m.version != 1 {
            return Err(Error::Format(format!("{} is not a version 1 model file", path.display())));
        }
        if m.weights.len() != m.columns.len() || m.standardizer.mean.len() != m.columns.len() {
            return Err(Error::Format("model weights do not match its columns".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Column;

    fn cols(n: usize) -> Vec<Column> {
        (0..n)
            .map(|i| Column {
                name: format!("f{i}"),
                group: FeatureGroup::User,
                binary: false,
            })
            .collect()
    }

    fn random_data(seed: u64, n: usize, m: usize) -> (Vec<Vec<f64>>, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = (0..n).map(|_| (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let y = (0..n).map(|_| rng.gen_range(0..2)).collect();
        (x, y)
    }

    fn separable() -> Design {
        let x = vec![
            vec![0.0, 0.1],
            vec![0.2, -0.3],
            vec![-0.5, 0.4],
            vec![3.0, 3.1],
            vec![2.7, 3.4],
            vec![3.3, 2.6],
        ];
        Design::new(cols(2), x, vec![0, 0, 0, 1, 1, 1]).unwrap()
    }

    fn accuracy(m: &LinearModel, d: &Design) -> f64 {
        let hits = d
            .x
            .iter()
            .zip(&d.y)
            .filter(|(r, &y)| m.predict(r).unwrap().label.as_class() == y)
            .count();
        hits as f64 / d.len() as f64
    }

    #[test]
    fn separable_toy_is_fit() {
        let d = separable();
        for kind in [ModelKind::Logreg, ModelKind::Linsvm] {
            let m = train(kind, &d, &TrainConfig::default()).unwrap();
            assert_eq!(accuracy(&m, &d), 1.0, "{kind}");
        }
    }

    #[test]
    fn logreg_gradient_matches_finite_differences() {
        let (x, y) = random_data(11, 30, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = 0.3;
        let h = 1e-5;
        let (gw, gb) = gradient(ModelKind::Logreg, &w, b, &x, &y, 0.1);
        let f = |w: &[f64], b: f64| objective(ModelKind::Logreg, w, b, &x, &y, 0.1);
        let mut worst: f64 = 0.0;
        for j in 0..4 {
            let (mut p, mut q) = (w.clone(), w.clone());
            p[j] += h;
            q[j] -= h;
            let fd = (f(&p, b) - f(&q, b)) / (2.0 * h);
            worst = worst.max((fd - gw[j]).abs() / fd.abs().max(1e-8));
        }
        let fd = (f(&w, b + h) - f(&w, b - h)) / (2.0 * h);
        worst = worst.max((fd - gb).abs() / fd.abs().max(1e-8));
        assert!(worst < 1e-4, "relative error {worst}");
    }

    #[test]
    fn hinge_subgradient_matches_away_from_kinks() {
        let (x, y) = random_data(12, 25, 3);
        let w = vec![0.4, -0.2, 0.7];
        let b = -0.1;
        let h = 1e-5;
        for (xi, &yi) in x.iter().zip(&y) {
            let margin = (2.0 * f64::from(yi) - 1.0) * (dot(&w, xi) + b);
            assert!((margin - 1.0).abs() > 1e-3, "fixture point sits on a kink");
        }
        let (gw, _) = gradient(ModelKind::Linsvm, &w, b, &x, &y, 0.01);
        for j in 0..3 {
            let (mut p, mut q) = (w.clone(), w.clone());
            p[j] += h;
            q[j] -= h;
            let fd = (objective(ModelKind::Linsvm, &p, b, &x, &y, 0.01) - objective(ModelKind::Linsvm, &q, b, &x, &y, 0.01))
                / (2.0 * h);
            assert!((fd - gw[j]).abs() / fd.abs().max(1e-8) < 1e-4);
        }
    }

    #[test]
    fn strong_regularization_shrinks_weights() {
        let d = separable();
        let weak = train_logreg(&d, &TrainConfig::default()).unwrap();
        let strong = train_logreg(
            &d,
            &TrainConfig {
                l2: 1e4,
                learning_rate: 1e-5,
                epochs: 2000,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        let norm = |m: &LinearModel| dot(&m.weights, &m.weights).sqrt();
        assert!(norm(&strong) < 1e-3 * norm(&weak).max(1.0));
    }

    #[test]
    fn predict_examples() {
        let mut m = train_logreg(&separable(), &TrainConfig::default()).unwrap();
        m.weights = vec![0.0, 0.0];
        m.bias = 0.0;
        assert_eq!(m.predict(&[4.0, -1.0]).unwrap().score, 0.5);
        assert_eq!(m.predict(&[4.0, -1.0]).unwrap().label, Popularity::Unpopular);

        // hand-computed sigmoid on standardized inputs
        m.weights = vec![0.5, -1.0];
        m.bias = 0.25;
        let z0 = (1.0 - m.standardizer.mean[0]) / m.standardizer.std[0];
        let z1 = (2.0 - m.standardizer.mean[1]) / m.standardizer.std[1];
        let hand = 1.0 / (1.0 + (-(0.5 * z0 - z1 + 0.25f64)).exp());
        assert!((m.predict(&[1.0, 2.0]).unwrap().score - hand).abs() < 1e-12);
        // monotone in the positively weighted feature
        let mut prev = f64::NEG_INFINITY;
        for v in [-3.0, -1.0, 0.0, 2.0, 5.0] {
            let s = m.predict(&[v, 2.0]).unwrap().score;
            assert!(s > prev);
            prev = s;
        }
        assert!(m.predict(&[1.0]).is_err());

        let mut svm = train_linsvm(&separable(), &TrainConfig::default()).unwrap();
        svm.weights = vec![1.0, 0.0];
        svm.bias = 0.0;
        let p = svm.predict(&[svm.standardizer.mean[0] + 1e-3, 0.0]).unwrap();
        assert_eq!(p.label, Popularity::Popular);
        assert!(p.score > 0.0);
    }

    #[test]
    fn single_class_is_rejected() {
        let d = Design::new(cols(1), vec![vec![1.0], vec![2.0]], vec![1, 1]).unwrap();
        assert!(matches!(train_logreg(&d, &TrainConfig::default()), Err(Error::SingleClass)));
    }

    #[test]
    fn deterministic_and_loss_decreasing() {
        let (x, y) = random_data(3, 60, 5);
        let d = Design::new(cols(5), x, y).unwrap();
        let (a, hist) = train_with_history(ModelKind::Logreg, &d, &TrainConfig::default()).unwrap();
        let (b, _) = train_with_history(ModelKind::Logreg, &d, &TrainConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!(hist.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn model_file_round_trip() {
        let m = train_linsvm(&separable(), &TrainConfig::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.json");
        m.save(&p).unwrap();
        assert_eq!(LinearModel::load(&p).unwrap(), m);
    }
}
