//! `hashmerge` command-line front end. Each subcommand reads and writes
//! explicit artifact files; nothing is carried between runs implicitly.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ResourceArgs;
use hashmerge::learn::ModelKind;

#[derive(Debug, Parser)]
#[command(name = "hashmerge", version, about = "Hashtag compound detection and popularity prediction")]
pub struct Cli {
    /// Pipeline settings as JSON; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Allow replacing existing output files.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a JSONL tweet stream into a timeline index.
    Ingest(IngestArgs),
    /// List compound candidates found in an index.
    Detect(DetectArgs),
    /// Attach popularity labels at 2, 6 and 10 months plus the trend category.
    Label(LabelArgs),
    /// Fit the topic model over constituent documents.
    FitLda(FitLdaArgs),
    /// Extract the feature matrix for a candidate list.
    Featurize(FeaturizeArgs),
    /// Train a linear classifier on a feature matrix.
    Train(TrainArgs),
    /// Evaluate a classifier by cross-validation or a held-out split.
    Evaluate {
        #[command(subcommand)]
        mode: EvaluateMode,
    },
    /// Rank features by chi-square or information gain.
    RankFeatures(RankArgs),
    /// Cross-validate every feature-group combination.
    Ablate(AblateArgs),
    /// Generate a synthetic corpus with planted compounds.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Tweets as JSON lines.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Declared start of the collection (seconds or RFC 3339).
    #[arg(long)]
    pub span_start: Option<String>,
    #[arg(long)]
    pub span_end: Option<String>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Minimum constituent tweets in the observation window.
    #[arg(long)]
    pub min_support: Option<usize>,
    #[arg(long)]
    pub obs_months: Option<u32>,
    /// Keep every detected candidate, skipping the support filter.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub candidates: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitLdaArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub candidates: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub topics: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub obs_months: Option<u32>,
    /// Document-topic prior; defaults to 50 / topics.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub candidates: PathBuf,
    /// Topic model from `fit-lda`.
    #[arg(long)]
    pub lda: PathBuf,
    #[command(flatten)]
    pub resources: ResourceArgs,
    /// Feature matrix CSV.
    #[arg(long)]
    pub output: PathBuf,
    /// Optional JSON schema sidecar.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Label horizon in months.
    #[arg(long)]
    pub horizon: Option<u32>,
    #[arg(long)]
    pub any_horizon: bool,
    #[arg(long)]
    pub obs_months: Option<u32>,
    /// Top words per topic for topic overlap.
    #[arg(long)]
    pub topic_top_n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifierArgs {
    /// logreg or linsvm.
    #[arg(long)]
    pub kind: Option<ModelKind>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub l2: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Feature matrix CSV from `featurize`.
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Down-sample the majority class to a 50/50 split (default).
    #[arg(long, overrides_with = "no_balance")]
    pub balance: bool,
    #[arg(long)]
    pub no_balance: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    /// Feature groups to use, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<hashmerge::features::FeatureGroup>,
    /// Model JSON.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum EvaluateMode {
    /// Stratified k-fold cross-validation.
    Cv(CvArgs),
    /// Train on nine tenths, test on the rest.
    Holdout(HoldoutArgs),
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    #[arg(long)]
    pub folds: Option<usize>,
    /// Report JSON.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct HoldoutArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StatisticArg {
    Chi2,
    Ig,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "chi2")]
    pub statistic: StatisticArg,
    #[arg(long, default_value_t = hashmerge::analysis::DEFAULT_BINS)]
    pub bins: usize,
    /// Ranking TSV.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    #[arg(long)]
    pub folds: Option<usize>,
    /// Ablation JSON.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scenario JSON; without it the balanced signal preset is used.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 400)]
    pub candidates: usize,
    /// Planted signal strength in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub strength: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 200)]
    pub background_per_month: u32,
    /// Tweets as JSON lines.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Planted candidates with their intended labels.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory for dictionary, n-gram, POS and gazetteer files.
    #[arg(long)]
    pub resources: Option<PathBuf>,
    /// Also write the resolved scenario JSON.
    #[arg(long)]
    pub save_scenario: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    match std::panic::catch_unwind(|| commands::run(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(2),
    }
}
