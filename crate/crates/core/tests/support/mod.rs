//! End-to-end pipeline used by the integration tests.

#![allow(dead_code)]

use std::io::Cursor;
use std::path::Path;

use hashmerge::compound::{detect_candidates, filter_eligible, label_candidate, CompoundCandidate, Popularity};
use hashmerge::corpus::{ingest_reader, CorpusIndex, IngestOptions, TimeSpan};
use hashmerge::features::{extract_all, ObservationConfig, RawFeatures};
use hashmerge::learn::{cross_validate, Dataset, EvalReport, ModelKind, TrainConfig};
use hashmerge::lexicon::{Dictionary, EntityGazetteer, LexiconBundle, NgramTable, PosLexicon};
use hashmerge::synth::{generate, signal_scenario, SignalOptions, SynthOutput};
use hashmerge::topicmodel::{documents_for_candidates, fit_lda, LdaConfig, TopicModel};

pub const SEED: u64 = 7;

pub fn lda_config() -> LdaConfig {
    LdaConfig {
        topics: 10,
        iterations: 30,
        seed: SEED,
        ..LdaConfig::default()
    }
}

pub fn lexicons(out: &SynthOutput) -> LexiconBundle {
    let r = &out.resources;
    let mut ngrams = NgramTable::new();
    for (g, f) in &r.ngrams {
        ngrams.insert(g, *f).unwrap();
    }
    let mut pos = PosLexicon::new();
    for (w, t) in &r.pos {
        pos.insert(w, *t);
    }
    LexiconBundle {
        dictionary: Dictionary::from_words(r.dictionary.clone()).unwrap(),
        ngrams,
        pos,
        gazetteer: EntityGazetteer::from_entries(r.gazetteer.clone(), None).unwrap(),
    }
}

/// Serialize the corpus and ingest it back, as the command line does.
pub fn ingest(out: &SynthOutput) -> (Vec<u8>, CorpusIndex) {
    let mut bytes = Vec::new();
    out.write_corpus(&mut bytes).unwrap();
    let opts = IngestOptions {
        span: Some(TimeSpan {
            start: out.span.0,
            end: out.span.1,
        }),
        ..IngestOptions::default()
    };
    let (index, _) = ingest_reader(Cursor::new(&bytes), Path::new("<synth>"), &opts).unwrap();
    (bytes, index)
}

pub fn eligible(index: &CorpusIndex) -> Vec<CompoundCandidate> {
    let span = index.span().unwrap();
    filter_eligible(detect_candidates(index, span.start, span.end), index, 50, 6)
}

pub struct Featurized {
    pub candidates: Vec<CompoundCandidate>,
    pub model: TopicModel,
    pub rows: Vec<RawFeatures>,
    pub labels: Vec<u8>,
}

pub fn featurize(index: &CorpusIndex, lex: &LexiconBundle, horizon: u32) -> Featurized {
    let candidates = eligible(index);
    let config = ObservationConfig {
        horizon_months: horizon,
        lda_topics: 10,
        ..ObservationConfig::default()
    };
    let docs = documents_for_candidates(index, &candidates, config.obs_months).unwrap();
    let model = fit_lda(&docs, &lda_config()).unwrap();
    let rows = extract_all(&candidates, index, lex, &model, &config).unwrap();
    let labels = candidates
        .iter()
        .map(|c| u8::from(label_candidate(index, c, horizon).unwrap().value == Popularity::Popular))
        .collect();
    Featurized {
        candidates,
        model,
        rows,
        labels,
    }
}

pub struct Run {
    pub corpus: Vec<u8>,
    pub candidates: usize,
    pub report: EvalReport,
}

/// synth -> ingest -> detect -> label -> LDA -> features -> 10-fold CV.
pub fn run(candidates: usize, strength: f64, kind: ModelKind) -> Run {
    let cfg = signal_scenario(&SignalOptions {
        candidates,
        seed: SEED,
        strength,
        ..SignalOptions::default()
    })
    .unwrap();
    let out = generate(&cfg).unwrap();
    let (corpus, index) = ingest(&out);
    let f = featurize(&index, &lexicons(&out), 2);
    let data = Dataset::new(f.rows, f.labels).unwrap();
    let report = cross_validate(&data, kind, &TrainConfig::default(), 10, SEED).unwrap();
    Run {
        corpus,
        candidates: data.len(),
        report,
    }
}
