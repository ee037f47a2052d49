//! Pipeline settings loaded from an optional JSON file. Command-line flags
//! take precedence over anything set here.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use hashmerge::compound::HORIZONS;
use hashmerge::learn::ModelKind;
use hashmerge::lexicon::LexiconPaths;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dictionary: Option<PathBuf>,
    pub ngrams: Option<PathBuf>,
    pub pos: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub obs_months: Option<u32>,
    pub horizons: Option<Vec<u32>>,
    pub min_support: Option<usize>,
    pub topics: Option<usize>,
    pub lda_iterations: Option<usize>,
    pub seed: Option<u64>,
    pub kind: Option<ModelKind>,
    pub learning_rate: Option<f64>,
    pub epochs: Option<usize>,
    pub l2: Option<f64>,
    pub folds: Option<usize>,
    pub balance: Option<bool>,
}

impl PipelineConfig {
    /// Relative resource paths resolve against the config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: PipelineConfig =
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.dictionary, &mut cfg.ngrams, &mut cfg.pos, &mut cfg.gazetteer].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// The horizons this run may label at.
    pub fn check_horizon(&self, horizon: u32, any_horizon: bool) -> Result<()> {
        if horizon == 0 {
            bail!("horizon must be at least one month");
        }
        if any_horizon {
            return Ok(());
        }
        let allowed = self.horizons.clone().unwrap_or_else(|| HORIZONS.to_vec());
        if let Some(h) = allowed.iter().find(|h| !HORIZONS.contains(h)) {
            bail!("configured horizon {h} is not one of 2, 6, 10 (pass --any-horizon to allow it)");
        }
        if !allowed.contains(&horizon) {
            bail!("horizon {horizon} is not one of {allowed:?} (pass --any-horizon to allow it)");
        }
        Ok(())
    }
}

/// Resource paths given on the command line, each falling back to the config.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ResourceArgs {
    /// Dictionary file, one word per line.
    #[arg(long)]
    pub dictionary: Option<PathBuf>,
    /// N-gram frequency table, `ngram<TAB>frequency`.
    #[arg(long)]
    pub ngrams: Option<PathBuf>,
    /// POS lexicon, `word<TAB>tag`.
    #[arg(long)]
    pub pos: Option<PathBuf>,
    /// Entity gazetteer, `phrase<TAB>label`.
    #[arg(long)]
    pub gazetteer: Option<PathBuf>,
}

impl ResourceArgs {
    pub fn resolve(&self, cfg: &PipelineConfig) -> Result<LexiconPaths> {
        let pick = |flag: &Option<PathBuf>, conf: &Option<PathBuf>, what: &str| -> Result<PathBuf> {
            let p = flag
                .clone()
                .or_else(|| conf.clone())
                .with_context(|| format!("no {what} path given (use --{what} or the config file)"))?;
            if !p.is_file() {
                bail!("{what} file not found: {}", p.display());
            }
            Ok(p)
        };
        Ok(LexiconPaths {
            dictionary: pick(&self.dictionary, &cfg.dictionary, "dictionary")?,
            ngrams: pick(&self.ngrams, &cfg.ngrams, "ngrams")?,
            pos: pick(&self.pos, &cfg.pos, "pos")?,
            gazetteer: pick(&self.gazetteer, &cfg.gazetteer, "gazetteer")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizons_are_restricted_unless_overridden() {
        let cfg = PipelineConfig::default();
        assert!(cfg.check_horizon(6, false).is_ok());
        assert!(cfg.check_horizon(3, false).is_err());
        assert!(cfg.check_horizon(3, true).is_ok());
        let narrow = PipelineConfig {
            horizons: Some(vec![2]),
            ..PipelineConfig::default()
        };
        assert!(narrow.check_horizon(10, false).is_err());
    }

    #[test]
    fn relative_resources_follow_the_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pipeline.json");
        std::fs::write(&path, r#"{"dictionary": "res/dict.txt", "seed": 3, "kind": "linsvm"}"#).unwrap();
        let cfg = PipelineConfig::load(&path).unwrap();
        assert_eq!(cfg.dictionary.unwrap(), dir.path().join("res/dict.txt"));
        assert_eq!(cfg.seed, Some(3));
        assert_eq!(cfg.kind, Some(ModelKind::Linsvm));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pipeline.json");
        std::fs::write(&path, r#"{"topicz": 3}"#).unwrap();
        assert!(PipelineConfig::load(&path).is_err());
    }
}
