//! Deterministic synthetic corpora with planted compounds.
//!
//! Monthly counts are scheduled, not sampled: the `n` tweets of an interval
//! `(lo, hi)` sit at `lo + 1 + floor(j * (hi - lo - 1) / n)`. Randomness
//! (from a single seeded stream) only picks words, users, mentions and
//! retweets.

mod config;
mod names;
mod preset;

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compound::{
    segment_hashtag, write_candidates, CompoundCandidate, LabelCell, LabeledCandidate, Popularity, TrendCategory,
    HORIZONS, MIN_COMPOUND_LEN,
};
use crate::corpus::{add_months, HashtagId, Timestamp, Tweet};
use crate::lexicon::{Dictionary, LexiconPaths, PosTag};
use crate::{Error, Result};

pub use config::{PlantConfig, ScenarioConfig};
pub use names::{syllable_word, NameGen};
pub use preset::{plant_signal, signal_scenario, single_plant_scenario, spread, SignalOptions};

/// Generated lexicon resources, as written to disk.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynthResources {
    pub dictionary: Vec<String>,
    pub ngrams: Vec<(String, u64)>,
    pub pos: Vec<(String, PosTag)>,
    pub gazetteer: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    /// Sorted by timestamp, then id.
    pub tweets: Vec<Tweet>,
    pub manifest: Vec<LabeledCandidate>,
    pub resources: SynthResources,
    pub span: (Timestamp, Timestamp),
}

fn place(lo: Timestamp, hi: Timestamp, n: u32) -> impl Iterator<Item = Timestamp> {
    let width = hi - lo - 1;
    (0..n).map(move |j| lo + 1 + (i64::from(j) * width) / i64::from(n))
}

/// Tweets of one hashtag role within one plant.
struct Voice<'a> {
    tags: Vec<&'a str>,
    vocab: &'a [String],
    users: &'a [String],
}

struct Writer<'c> {
    cfg: &'c ScenarioConfig,
    rng: ChaCha8Rng,
    tweets: Vec<Tweet>,
}

impl Writer<'_> {
    fn emit(&mut self, id: String, ts: Timestamp, voice: &Voice<'_>, rates: (f64, f64)) -> Result<()> {
        let mut words: Vec<String> = voice.tags.iter().map(|t| format!("#{t}")).collect();
        for _ in 0..self.cfg.words_per_tweet {
            words.push(voice.vocab.choose(&mut self.rng).expect("non-empty vocab").clone());
        }
        let user = voice.users.choose(&mut self.rng).expect("non-empty pool").clone();
        if self.rng.gen_bool(rates.0) {
            words.push(format!("@{}", voice.users.choose(&mut self.rng).expect("non-empty pool")));
        }
        let retweet_of = self.rng.gen_bool(rates.1).then(|| format!("src-{id}"));
        if retweet_of.is_some() {
            words.insert(0, "RT".into());
        }
        self.tweets.push(Tweet::new(id, ts, user, words.join(" "), None, retweet_of)?);
        Ok(())
    }
}

fn trend_failures(p: &PlantConfig) -> usize {
    let at = |v: &[u32], m: usize| v.get(m).copied().unwrap_or(0);
    (0..10)
        .filter(|&m| {
            let ab = at(&p.post_ab, m);
            !(ab > at(&p.post_a, m) && ab > at(&p.post_b, m))
        })
        .count()
}

/// Labels implied by the schedule, `NA` where the grid ends too early.
fn scheduled_labels(p: &PlantConfig, t0: Timestamp, end: Timestamp) -> ([LabelCell; 3], Option<TrendCategory>) {
    let labels = HORIZONS.map(|h| {
        if add_months(t0, h as i32) > end {
            LabelCell::NotAvailable
        } else if p.popular_within(h as usize) {
            LabelCell::Value(Popularity::Popular)
        } else {
            LabelCell::Value(Popularity::Unpopular)
        }
    });
    let trend = (labels[2] == LabelCell::Value(Popularity::Popular))
        .then(|| TrendCategory::from_failures(trend_failures(p)));
    (labels, trend)
}

/// Every planted compound must have exactly its intended split and no
/// other hashtag may look like a compound.
fn check_splits(first_seen: &HashMap<String, Timestamp>, intended: &HashMap<String, usize>) -> Result<()> {
    for (h, &t) in first_seen {
        if h.len() < MIN_COMPOUND_LEN {
            continue;
        }
        let splits: Vec<usize> = (1..h.len())
            .filter(|&k| {
                let earlier = |s: &str| first_seen.get(s).is_some_and(|&f| f < t);
                earlier(&h[..k]) && earlier(&h[k..])
            })
            .collect();
        let ok = match intended.get(h) {
            Some(&k) => splits == [k],
            None => splits.is_empty(),
        };
        if !ok {
            return Err(Error::invalid(format!("hashtag #{h} has unintended compound splits {splits:?}")));
        }
    }
    Ok(())
}

pub fn generate(cfg: &ScenarioConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let grid_start = cfg.start.start();
    let grid_end = add_months(grid_start, cfg.months as i32);
    let mut w = Writer {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        tweets: Vec::new(),
    };

    let mut intended = HashMap::new();
    let mut roles = HashMap::new();
    let mut births = Vec::with_capacity(cfg.plants.len());
    for (i, p) in cfg.plants.iter().enumerate() {
        let a = HashtagId::new(&p.part_a)?;
        let b = HashtagId::new(&p.part_b)?;
        let ab = HashtagId::new(&format!("{}{}", p.part_a, p.part_b))?;
        for h in [&a, &b, &ab] {
            if roles.insert(h.canonical().to_string(), i).is_some() {
                return Err(Error::invalid(format!("hashtag #{} is used by more than one role", h.canonical())));
            }
        }
        intended.insert(ab.canonical().to_string(), a.len());

        let t0 = add_months(grid_start, p.birth_month as i32) + p.birth_offset;
        births.push((a, b, ab.clone(), t0));

        let shared = (p.user_overlap * f64::from(p.users_a.min(p.users_b))).round() as u32;
        let pool = |own: &str, size: u32| -> Vec<String> {
            (0..shared)
                .map(|k| format!("p{i}s{k}"))
                .chain((shared..size).map(|k| format!("p{i}{own}{k}")))
                .collect()
        };
        let (users_a, users_b) = (pool("a", p.users_a), pool("b", p.users_b));
        let vocab_a = &cfg.topics[p.topic_a];
        let mut vocab_b = cfg.topics[p.topic_b].clone();
        let k = ((p.word_overlap * vocab_b.len() as f64).round() as usize).min(vocab_b.len());
        for (j, word) in vocab_a.iter().cycle().take(k).enumerate() {
            vocab_b[j] = word.clone();
        }
        let (sa, sb, sab) = (p.part_a.as_str(), p.part_b.as_str(), format!("{}{}", p.part_a, p.part_b));
        let voice_a = Voice { tags: vec![sa], vocab: vocab_a, users: &users_a };
        let voice_b = Voice { tags: vec![sb], vocab: &vocab_b, users: &users_b };
        let voice_joint = Voice { tags: vec![sa, sb], vocab: vocab_a, users: &users_a };
        let voice_ab = Voice { tags: vec![&sab], vocab: vocab_a, users: &users_a };

        let rates = (p.mention_rate, p.retweet_rate);
        let joint = p.cooccurrences();
        for (series, voice, role) in [(&p.pre_a, &voice_a, 'a'), (&p.pre_b, &voice_b, 'b')] {
            let n = series.len();
            for (k, &count) in series.iter().enumerate() {
                let back = (n - k) as i32;
                let (lo, hi) = (add_months(t0, -back), add_months(t0, -back + 1));
                for (j, ts) in place(lo, hi, count).enumerate() {
                    let id = format!("p{i:04}-{role}-pre{k:02}-{j:04}");
                    let last = k + 1 == n;
                    if last && role == 'a' && (j as u32) < joint {
                        w.emit(id, ts, &voice_joint, rates)?;
                    } else if last && role == 'b' && (j as u32) < joint {
                        // the joint tweets already count toward #B
                        continue;
                    } else {
                        w.emit(id, ts, voice, rates)?;
                    }
                }
            }
        }
        w.emit(format!("p{i:04}-ab-birth"), t0, &voice_ab, rates)?;
        for (series, voice, role) in [(&p.post_ab, &voice_ab, "ab"), (&p.post_a, &voice_a, "a"), (&p.post_b, &voice_b, "b")] {
            for (m, &count) in series.iter().enumerate() {
                let (lo, hi) = (add_months(t0, m as i32), add_months(t0, m as i32 + 1));
                for (j, ts) in place(lo, hi, count).enumerate() {
                    w.emit(format!("p{i:04}-{role}-post{m:02}-{j:04}"), ts, voice, rates)?;
                }
            }
        }
    }

    let bg_users: Vec<String> = (0..100).map(|k| format!("bg{k}")).collect();
    let quiet = (0.0, 0.0);
    let bg = Voice { tags: vec![], vocab: &cfg.background_vocab, users: &bg_users };
    w.emit("bg-start".into(), grid_start, &bg, quiet)?;
    for m in 0..cfg.months as i32 {
        let (lo, hi) = (add_months(grid_start, m), add_months(grid_start, m + 1));
        for (j, ts) in place(lo, hi, cfg.background_per_month).enumerate() {
            w.emit(format!("bg-{m:03}-{j:05}"), ts, &bg, quiet)?;
        }
    }
    w.emit("bg-end".into(), grid_end, &bg, quiet)?;

    let mut tweets = w.tweets;
    tweets.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
    let mut first_seen: HashMap<String, Timestamp> = HashMap::new();
    for t in &tweets {
        for h in &t.hashtags {
            first_seen.entry(h.canonical().to_string()).or_insert(t.timestamp);
        }
    }
    check_splits(&first_seen, &intended)?;

    let manifest = cfg
        .plants
        .iter()
        .zip(births)
        .map(|(p, (a, b, ab, t0))| {
            let (labels, trend) = scheduled_labels(p, t0, grid_end);
            LabeledCandidate {
                candidate: CompoundCandidate {
                    split_index: a.len(),
                    a_first_seen: first_seen[a.canonical()],
                    b_first_seen: first_seen[b.canonical()],
                    compound_first_seen: t0,
                    compound: ab,
                    part_a: a,
                    part_b: b,
                },
                labels,
                trend,
            }
        })
        .collect();
    let resources = build_resources(cfg)?;
    Ok(SynthOutput {
        tweets,
        manifest,
        resources,
        span: (grid_start, grid_end),
    })
}

/// Dictionary, n-grams, POS lexicon and gazetteer consistent with the
/// scenario's words and names. Drawn from a stream separate from the
/// corpus so resources never perturb tweets.
fn build_resources(cfg: &ScenarioConfig) -> Result<SynthResources> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x005e_ed0f_1ec5);
    let mut words: Vec<String> = cfg.background_vocab.iter().chain(cfg.topics.iter().flatten()).cloned().collect();
    let base = Dictionary::from_words(words.clone())?;
    let mut name_words = Vec::new();
    for p in &cfg.plants {
        for part in [&p.part_a, &p.part_b] {
            name_words.extend(segment_hashtag(&HashtagId::new(part)?, &base).into_iter().map(|w| w.to_ascii_lowercase()));
        }
    }
    name_words.sort();
    name_words.dedup();
    words.extend(name_words.iter().filter(|_| rng.gen_bool(0.5)).cloned());
    words.sort();
    words.dedup();

    let mut ngrams = BTreeMap::new();
    for topic in &cfg.topics {
        for pair in topic.windows(2) {
            ngrams.insert(format!("{} {}", pair[0], pair[1]), rng.gen_range(10..1000));
        }
    }
    let tags = [PosTag::CommonNoun, PosTag::ProperNoun, PosTag::Verb, PosTag::Adjective, PosTag::Adverb];
    let pos = words.iter().map(|w| (w.clone(), tags[rng.gen_range(0..tags.len())])).collect();
    let types = ["person", "location", "organization"];
    let mut gazetteer = Vec::new();
    for w in &name_words {
        if rng.gen_bool(0.2) {
            gazetteer.push((w.clone(), types[rng.gen_range(0..types.len())].to_string()));
        }
    }
    Ok(SynthResources {
        dictionary: words,
        ngrams: ngrams.into_iter().collect(),
        pos,
        gazetteer,
    })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

impl SynthOutput {
    /// One JSON object per line, in corpus order.
    pub fn write_corpus<W: Write>(&self, mut w: W) -> Result<()> {
        for t in &self.tweets {
            serde_json::to_writer(&mut w, t)?;
            w.write_all(b"\n").map_err(|e| Error::io("<corpus>", e))?;
        }
        Ok(())
    }

    pub fn write_manifest<W: Write>(&self, w: W) -> Result<()> {
        write_candidates(w, &self.manifest, true)
    }

    /// Write the four resource files into `dir` and return their paths.
    pub fn write_resources(&self, dir: &Path) -> Result<LexiconPaths> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let paths = LexiconPaths {
            dictionary: dir.join("dictionary.txt"),
            ngrams: dir.join("ngrams.tsv"),
            pos: dir.join("pos.tsv"),
            gazetteer: dir.join("gazetteer.tsv"),
        };
        let r = &self.resources;
        let write = |p: &Path, lines: Vec<String>| {
            let mut text = lines.join("\n");
            text.push('\n');
            std::fs::write(p, text).map_err(io_err(p))
        };
        write(&paths.dictionary, r.dictionary.clone())?;
        write(&paths.ngrams, r.ngrams.iter().map(|(g, f)| format!("{g}\t{f}")).collect())?;
        write(&paths.pos, r.pos.iter().map(|(w, t)| format!("{w}\t{t}")).collect())?;
        write(&paths.gazetteer, r.gazetteer.iter().map(|(w, t)| format!("{w}\t{t}")).collect())?;
        Ok(paths)
    }
}
