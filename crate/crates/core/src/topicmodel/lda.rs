use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::documents::HashtagDocument;
use crate::{Error, Result};

const MODEL_FORMAT: &str = "hashmerge-lda";
const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub topics: usize,
    /// Symmetric document-topic prior; `None` means 50 / K.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            topics: 30,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
        }
    }
}

/// How words are ranked within a topic for a given document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicRanking {
    /// Rank by topic-word probability among words occurring in the document.
    #[default]
    DocumentVocabulary,
    /// Rank by topic-word probability over the whole vocabulary.
    Global,
}

/// Fitted LDA state. Count matrices are stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    format: String,
    version: u32,
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub iterations: usize,
    pub vocab: Vec<String>,
    pub doc_keys: Vec<String>,
    /// K x V
    topic_word: Vec<u32>,
    /// K
    topic_totals: Vec<u64>,
    /// D x K
    doc_topic: Vec<u32>,
    /// Distinct word ids per document, ascending.
    doc_words: Vec<Vec<u32>>,
}

/// Sampler state handed to observers after every sweep.
pub struct GibbsState<'a> {
    pub topics: usize,
    pub vocab_size: usize,
    pub topic_word: &'a [u32],
    pub topic_totals: &'a [u64],
    pub doc_topic: &'a [u32],
    pub assignments: &'a [Vec<u32>],
}

impl GibbsState<'_> {
    /// Token totals from the topic-word and doc-topic sides.
    pub fn token_totals(&self) -> (u64, u64) {
        let tw = self.topic_word.iter().map(|&c| c as u64).sum();
        let dt = self.doc_topic.iter().map(|&c| c as u64).sum();
        (tw, dt)
    }
}

pub fn fit_lda(docs: &[HashtagDocument], config: &LdaConfig) -> Result<TopicModel> {
    fit_lda_observed(docs, config, |_, _| {})
}

/// Collapsed Gibbs sampling for `config.iterations` sweeps. `observer` is
/// called after each sweep with the 1-based sweep number.
pub fn fit_lda_observed<F>(docs: &[HashtagDocument], config: &LdaConfig, mut observer: F) -> Result<TopicModel>
where
    F: FnMut(usize, &GibbsState<'_>),
{
    let k = config.topics;
    if k < 2 {
        return Err(Error::invalid("LDA needs at least two topics"));
    }
    if config.beta <= 0.0 || config.alpha.is_some_and(|a| a <= 0.0) {
        return Err(Error::invalid("Dirichlet priors must be positive"));
    }
    if docs.iter().all(HashtagDocument::is_empty) {
        return Err(Error::EmptyDocuments);
    }
    let alpha = config.alpha.unwrap_or(50.0 / k as f64);
    let beta = config.beta;

    let vocab: Vec<String> = docs
        .iter()
        .flat_map(|d| d.tokens.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ids: HashMap<&str, u32> = vocab.iter().enumerate().map(|(i, w)| (w.as_str(), i as u32)).collect();
    let v = vocab.len();
    let words: Vec<Vec<u32>> = docs
        .iter()
        .map(|d| d.tokens.iter().map(|t| ids[t.as_str()]).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut topic_word = vec![0u32; k * v];
    let mut topic_totals = vec![0u64; k];
    let mut doc_topic = vec![0u32; docs.len() * k];
    let mut z: Vec<Vec<u32>> = Vec::with_capacity(docs.len());
    for (d, ws) in words.iter().enumerate() {
        let zs: Vec<u32> = ws
            .iter()
            .map(|&w| {
                let t = rng.gen_range(0..k);
                topic_word[t * v + w as usize] += 1;
                topic_totals[t] += 1;
                doc_topic[d * k + t] += 1;
                t as u32
            })
            .collect();
        z.push(zs);
    }

    let vbeta = v as f64 * beta;
    let mut weights = vec![0.0f64; k];
    for sweep in 1..=config.iterations {
        for (d, ws) in words.iter().enumerate() {
            for (i, &w) in ws.iter().enumerate() {
                let w = w as usize;
                let old = z[d][i] as usize;
                topic_word[old * v + w] -= 1;
                topic_totals[old] -= 1;
                doc_topic[d * k + old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    let p = (doc_topic[d * k + t] as f64 + alpha) * (topic_word[t * v + w] as f64 + beta)
                        / (topic_totals[t] as f64 + vbeta);
                    total += p;
                    weights[t] = total;
                }
                let u = rng.gen::<f64>() * total;
                let new = weights.iter().position(|&c| u < c).unwrap_or(k - 1);

                topic_word[new * v + w] += 1;
                topic_totals[new] += 1;
                doc_topic[d * k + new] += 1;
                z[d][i] = new as u32;
            }
        }
        observer(
            sweep,
            &GibbsState {
                topics: k,
                vocab_size: v,
                topic_word: &topic_word,
                topic_totals: &topic_totals,
                doc_topic: &doc_topic,
                assignments: &z,
            },
        );
    }

    let doc_words = words
        .iter()
        .map(|ws| ws.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
        .collect();
    Ok(TopicModel {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        topics: k,
        alpha,
        beta,
        seed: config.seed,
        iterations: config.iterations,
        vocab,
        doc_keys: docs.iter().map(|d| d.key.clone()).collect(),
        topic_word,
        topic_totals,
        doc_topic,
        doc_words,
    })
}

impl TopicModel {
    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn topic_word_count(&self, topic: usize, word: usize) -> u32 {
        self.topic_word[topic * self.vocab.len() + word]
    }

    pub fn doc_topic_count(&self, doc: usize, topic: usize) -> u32 {
        self.doc_topic[doc * self.topics + topic]
    }

    /// phi_k(w) = (n_kw + beta) / (n_k + V beta)
    pub fn phi(&self, topic: usize, word: usize) -> f64 {
        let v = self.vocab.len() as f64;
        (self.topic_word_count(topic, word) as f64 + self.beta) / (self.topic_totals[topic] as f64 + v * self.beta)
    }

    pub fn document(&self, key: &str) -> Option<usize> {
        self.doc_keys.iter().position(|k| k == key)
    }

    fn ranked(&self, topic: usize, candidates: impl Iterator<Item = usize>, n: usize) -> Vec<&str> {
        // phi is monotone in the count within a topic, so rank on integers
        let mut ws: Vec<usize> = candidates.collect();
        ws.sort_by(|&a, &b| {
            self.topic_word_count(topic, b)
                .cmp(&self.topic_word_count(topic, a))
                .then_with(|| self.vocab[a].cmp(&self.vocab[b]))
        });
        ws.truncate(n);
        ws.into_iter().map(|w| self.vocab[w].as_str()).collect()
    }

    /// Top `n` words of a topic by phi, ties broken lexicographically.
    pub fn top_words(&self, topic: usize, n: usize) -> Result<Vec<&str>> {
        if topic >= self.topics {
            return Err(Error::invalid(format!("topic {topic} out of range")));
        }
        Ok(self.ranked(topic, 0..self.vocab.len(), n))
    }

    /// Top `n` words of a topic for one document under the given ranking.
    pub fn document_top_words(&self, doc: usize, topic: usize, n: usize, ranking: TopicRanking) -> Vec<&str> {
        match ranking {
            TopicRanking::DocumentVocabulary => {
                self.ranked(topic, self.doc_words[doc].iter().map(|&w| w as usize), n)
            }
            TopicRanking::Global => self.ranked(topic, 0..self.vocab.len(), n),
        }
    }

    /// Mean over topics of the number of shared top-`n` words between two
    /// documents.
    pub fn average_overlap(&self, doc_a: usize, doc_b: usize, n: usize, ranking: TopicRanking) -> f64 {
        let total: usize = (0..self.topics)
            .map(|k| {
                let a: BTreeSet<&str> = self.document_top_words(doc_a, k, n, ranking).into_iter().collect();
                self.document_top_words(doc_b, k, n, ranking)
                    .into_iter()
                    .filter(|w| a.contains(w))
                    .count()
            })
            .sum();
        total as f64 / self.topics as f64
    }

    /// Per-topic token totals, for diagnostics.
    pub fn topic_sizes(&self) -> BTreeMap<usize, u64> {
        self.topic_totals.iter().copied().enumerate().collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        serde_json::to_writer(&mut w, self)?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        let m: TopicModel = serde_json::from_reader(BufReader::new(f))?;
        if m.format != MODEL_FORMAT || m.version != MODEL_VERSION {
            return Err(Error::Format(format!("not a {MODEL_FORMAT} v{MODEL_VERSION} file")));
        }
        let (k, v, d) = (m.topics, m.vocab.len(), m.doc_keys.len());
        if m.topic_word.len() != k * v || m.doc_topic.len() != d * k || m.doc_words.len() != d || m.topic_totals.len() != k {
            return Err(Error::Format("inconsistent LDA matrix shapes".into()));
        }
        Ok(m)
    }
}
