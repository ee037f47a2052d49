use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

use hashmerge::analysis::{ablate, chi_square_rank, info_gain_rank};
use hashmerge::compound::{
    classify_trend, detect_candidates, filter_eligible, label_candidate, read_candidates, write_candidates, LabelCell,
    LabeledCandidate, Popularity, HORIZONS,
};
use hashmerge::corpus::{ingest_jsonl, parse_timestamp, CorpusIndex, IngestOptions, TimeSpan};
use hashmerge::features::{extract_all, read_feature_csv, write_feature_csv, FeatureSchema, FeatureTable, ObservationConfig, SchemaFile};
use hashmerge::learn::{balance_classes, cross_validate, holdout_evaluate, Dataset, Examples, ModelKind, TrainConfig};
use hashmerge::lexicon::LexiconBundle;
use hashmerge::synth::{generate, signal_scenario, ScenarioConfig, SignalOptions};
use hashmerge::topicmodel::{documents_for_candidates, fit_lda, LdaConfig, TopicModel};
use hashmerge::Error;

use crate::config::PipelineConfig;
use crate::{ClassifierArgs, Cli, Command, DataArgs, EvaluateMode, StatisticArg};

const DEFAULT_SEED: u64 = 0;
const DEFAULT_FOLDS: usize = 10;
const DEFAULT_MIN_SUPPORT: usize = 50;

struct Ctx {
    cfg: PipelineConfig,
    force: bool,
}

impl Ctx {
    fn create(&self, path: &Path) -> Result<BufWriter<File>> {
        if path.exists() && !self.force {
            bail!("{} already exists (pass --force to overwrite)", path.display());
        }
        let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        Ok(BufWriter::new(f))
    }

    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.cfg.seed).unwrap_or(DEFAULT_SEED)
    }

    fn obs_months(&self, flag: Option<u32>) -> u32 {
        flag.or(self.cfg.obs_months).unwrap_or(6)
    }

    fn train_config(&self, c: &ClassifierArgs, seed: u64) -> (ModelKind, TrainConfig) {
        let d = TrainConfig::default();
        let kind = c.kind.or(self.cfg.kind).unwrap_or(ModelKind::Logreg);
        let tc = TrainConfig {
            learning_rate: c.learning_rate.or(self.cfg.learning_rate).unwrap_or(d.learning_rate),
            epochs: c.epochs.or(self.cfg.epochs).unwrap_or(d.epochs),
            l2: c.l2.or(self.cfg.l2).unwrap_or(d.l2),
            seed,
        };
        (kind, tc)
    }

    /// Load labeled rows from a feature CSV, balancing classes unless disabled.
    fn dataset(&self, a: &DataArgs) -> Result<(Dataset, u64)> {
        let seed = self.seed(a.seed);
        let table = read_feature_csv(open(&a.features)?).with_context(|| format!("reading {}", a.features.display()))?;
        let data = Dataset::from_table(table)?;
        let balance = if a.no_balance {
            false
        } else {
            a.balance || self.cfg.balance.unwrap_or(true)
        };
        if !balance {
            return Ok((data, seed));
        }
        let keep = balance_classes(&data.labels, seed)?;
        eprintln!("balanced {} labeled rows to {}", data.len(), keep.len());
        Ok((data.subset(&keep), seed))
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn load_index(path: &Path) -> Result<CorpusIndex> {
    CorpusIndex::load(path).with_context(|| format!("loading index {}", path.display()))
}

fn load_candidates(path: &Path, index: &CorpusIndex) -> Result<Vec<LabeledCandidate>> {
    read_candidates(open(path)?, index).with_context(|| format!("reading candidates {}", path.display()))
}

fn write_json<T: serde::Serialize>(ctx: &Ctx, path: &Path, value: &T) -> Result<()> {
    let mut w = ctx.create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn label_row(index: &CorpusIndex, row: &LabeledCandidate) -> Result<LabeledCandidate> {
    let c = &row.candidate;
    let mut labels = [LabelCell::NotAvailable; 3];
    for (slot, &h) in labels.iter_mut().zip(HORIZONS.iter()) {
        match label_candidate(index, c, h) {
            Ok(l) => *slot = LabelCell::Value(l.value),
            Err(Error::InsufficientHistory { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let trend = match labels[2] {
        LabelCell::Value(Popularity::Popular) => Some(classify_trend(index, c)?),
        _ => None,
    };
    Ok(LabeledCandidate {
        candidate: c.clone(),
        labels,
        trend,
    })
}

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    let ctx = Ctx { cfg, force: cli.force };
    match &cli.command {
        Command::Ingest(a) => {
            let ts = |s: &Option<String>| s.as_deref().map(parse_timestamp).transpose();
            let span = match (ts(&a.span_start)?, ts(&a.span_end)?) {
                (Some(start), Some(end)) => Some(TimeSpan { start, end }),
                (None, None) => None,
                _ => bail!("--span-start and --span-end must be given together"),
            };
            let (index, stats) = ingest_jsonl(
                &a.input,
                &IngestOptions {
                    span,
                    ..IngestOptions::default()
                },
            )?;
            let mut w = ctx.create(&a.output)?;
            index.write_to(&mut w)?;
            w.flush()?;
            eprintln!(
                "{} lines, {} tweets indexed, {} malformed, {} hashtags",
                stats.lines,
                stats.accepted,
                stats.malformed,
                index.hashtag_count()
            );
        }
        Command::Detect(a) => {
            let index = load_index(&a.index)?;
            let span = index.span().context("index is empty")?;
            let mut found = detect_candidates(&index, span.start, span.end);
            let total = found.len();
            if !a.all {
                let support = a.min_support.or(ctx.cfg.min_support).unwrap_or(DEFAULT_MIN_SUPPORT);
                found = filter_eligible(found, &index, support, ctx.obs_months(a.obs_months));
            }
            let rows: Vec<LabeledCandidate> = found.into_iter().map(LabeledCandidate::unlabeled).collect();
            let mut w = ctx.create(&a.output)?;
            write_candidates(&mut w, &rows, false)?;
            w.flush()?;
            eprintln!("{total} candidates detected, {} kept", rows.len());
        }
        Command::Label(a) => {
            let index = load_index(&a.index)?;
            let rows = load_candidates(&a.candidates, &index)?
                .iter()
                .map(|r| label_row(&index, r))
                .collect::<Result<Vec<_>>>()?;
            let mut w = ctx.create(&a.output)?;
            write_candidates(&mut w, &rows, true)?;
            w.flush()?;
        }
        Command::FitLda(a) => {
            let index = load_index(&a.index)?;
            let cands: Vec<_> = load_candidates(&a.candidates, &index)?.into_iter().map(|r| r.candidate).collect();
            let docs = documents_for_candidates(&index, &cands, ctx.obs_months(a.obs_months))?;
            let d = LdaConfig::default();
            let lda = LdaConfig {
                topics: a.topics.or(ctx.cfg.topics).unwrap_or(d.topics),
                alpha: a.alpha.or(d.alpha),
                beta: a.beta.unwrap_or(d.beta),
                iterations: a.iterations.or(ctx.cfg.lda_iterations).unwrap_or(d.iterations),
                seed: ctx.seed(a.seed),
            };
            let model = fit_lda(&docs, &lda)?;
            if a.output.exists() && !ctx.force {
                bail!("{} already exists (pass --force to overwrite)", a.output.display());
            }
            model.save(&a.output)?;
            eprintln!("fitted {} topics over {} documents", lda.topics, docs.len());
        }
        Command::Featurize(a) => {
            let paths = a.resources.resolve(&ctx.cfg)?;
            let index = load_index(&a.index)?;
            let cands: Vec<_> = load_candidates(&a.candidates, &index)?.into_iter().map(|r| r.candidate).collect();
            let model = TopicModel::load(&a.lda).with_context(|| format!("loading topic model {}", a.lda.display()))?;
            let lex = LexiconBundle::load(&paths)?;
            let d = ObservationConfig::default();
            let horizon = a.horizon.unwrap_or(d.horizon_months);
            ctx.cfg.check_horizon(horizon, a.any_horizon)?;
            let config = ObservationConfig {
                obs_months: ctx.obs_months(a.obs_months),
                horizon_months: horizon,
                lda_topics: model.topics,
                topic_top_n: a.topic_top_n.unwrap_or(d.topic_top_n),
                ..d
            };
            config.validate(a.any_horizon)?;
            let rows = extract_all(&cands, &index, &lex, &model, &config)?;
            let labels = cands
                .iter()
                .map(|c| match label_candidate(&index, c, horizon) {
                    Ok(l) => Ok(Some(l.value)),
                    Err(Error::InsufficientHistory { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<hashmerge::Result<Vec<_>>>()?;
            for w in rows.iter().flat_map(|r| r.warnings.iter().map(move |w| (&r.compound, w))) {
                eprintln!("warning: {}: {}", w.0, w.1);
            }
            let table = FeatureTable {
                schema: FeatureSchema::derive(&rows),
                rows,
                labels,
            };
            if let Some(p) = &a.schema {
                write_json(&ctx, p, &SchemaFile::new(&table.schema, config))?;
            }
            let mut w = ctx.create(&a.output)?;
            write_feature_csv(&mut w, &table)?;
            w.flush()?;
            let labeled = table.labels.iter().filter(|l| l.is_some()).count();
            eprintln!("{} candidates featurized, {labeled} labeled at {horizon} months", table.rows.len());
        }
        Command::Train(a) => {
            let (data, seed) = ctx.dataset(&a.data)?;
            let data = if a.groups.is_empty() { data } else { data.with_groups(&a.groups)? };
            let (kind, tc) = ctx.train_config(&a.classifier, seed);
            let model = data.fit(kind, &tc)?;
            if a.output.exists() && !ctx.force {
                bail!("{} already exists (pass --force to overwrite)", a.output.display());
            }
            model.save(&a.output)?;
            eprintln!("{kind} trained on {} rows, final loss {:.6}", data.len(), model.final_loss);
        }
        Command::Evaluate { mode } => {
            let (report, output) = match mode {
                EvaluateMode::Cv(a) => {
                    let (data, seed) = ctx.dataset(&a.data)?;
                    let (kind, tc) = ctx.train_config(&a.classifier, seed);
                    let folds = a.folds.or(ctx.cfg.folds).unwrap_or(DEFAULT_FOLDS);
                    (cross_validate(&data, kind, &tc, folds, seed)?, &a.output)
                }
                EvaluateMode::Holdout(a) => {
                    let (data, seed) = ctx.dataset(&a.data)?;
                    let (kind, tc) = ctx.train_config(&a.classifier, seed);
                    (holdout_evaluate(&data, kind, &tc, seed)?, &a.output)
                }
            };
            write_json(&ctx, output, &report)?;
            println!("{report}");
        }
        Command::RankFeatures(a) => {
            let (data, _) = ctx.dataset(&a.data)?;
            let (_, design) = data.full_design();
            let ranking = match a.statistic {
                StatisticArg::Chi2 => chi_square_rank(&design, a.bins)?,
                StatisticArg::Ig => info_gain_rank(&design, a.bins)?,
            };
            let mut w = ctx.create(&a.output)?;
            ranking.write_tsv(&mut w)?;
            w.flush()?;
            for e in ranking.entries.iter().take(10) {
                println!("{:>3}  {:>12.4}  {}", e.rank, e.statistic, e.feature);
            }
        }
        Command::Ablate(a) => {
            let (data, seed) = ctx.dataset(&a.data)?;
            let (kind, tc) = ctx.train_config(&a.classifier, seed);
            let folds = a.folds.or(ctx.cfg.folds).unwrap_or(DEFAULT_FOLDS);
            let report = ablate(&data, kind, &tc, folds, seed);
            write_json(&ctx, &a.output, &report)?;
            for (name, entry) in &report.combinations {
                match (&entry.report, &entry.error) {
                    (Some(r), _) => println!("{name:<16} {:.4}", r.accuracy),
                    (None, Some(e)) => println!("{name:<16} error: {e}"),
                    (None, None) => println!("{name:<16} -"),
                }
            }
        }
        Command::Synth(a) => {
            let scenario = match &a.scenario {
                Some(p) => ScenarioConfig::load(p).with_context(|| format!("loading scenario {}", p.display()))?,
                None => signal_scenario(&SignalOptions {
                    candidates: a.candidates,
                    seed: ctx.seed(a.seed),
                    strength: a.strength,
                    background_per_month: a.background_per_month,
                    ..SignalOptions::default()
                })?,
            };
            let out = generate(&scenario)?;
            let mut w = ctx.create(&a.corpus)?;
            out.write_corpus(&mut w)?;
            w.flush()?;
            let mut w = ctx.create(&a.manifest)?;
            out.write_manifest(&mut w)?;
            w.flush()?;
            if let Some(dir) = &a.resources {
                std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
                out.write_resources(dir)?;
            }
            if let Some(p) = &a.save_scenario {
                write_json(&ctx, p, &scenario)?;
            }
            eprintln!(
                "{} tweets, {} planted compounds, span {}..{}",
                out.tweets.len(),
                out.manifest.len(),
                out.span.0,
                out.span.1
            );
        }
    }
    Ok(())
}
