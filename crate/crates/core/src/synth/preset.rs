//! Ready-made scenarios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::YearMonth;
use crate::Result;

use super::names::NameGen;
use super::{PlantConfig, ScenarioConfig};

/// Split `total` into `months` near-equal monthly counts.
pub fn spread(total: u32, months: usize) -> Vec<u32> {
    let t = u64::from(total);
    let m = months as u64;
    (0..m).map(|k| ((k + 1) * t / m - k * t / m) as u32).collect()
}

fn vocab(gen: &mut NameGen, rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n).map(|_| gen.word(rng)).collect()
}

/// One compound whose 10-month totals are `(ab, a, b)`, spread evenly over
/// the months after its birth.
pub fn single_plant_scenario(part_a: &str, part_b: &str, totals: (u32, u32, u32), seed: u64) -> Result<ScenarioConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gen = NameGen::new();
    for p in [part_a, part_b] {
        gen.reserve(p);
    }
    let topics = vec![vocab(&mut gen, &mut rng, 12), vocab(&mut gen, &mut rng, 12)];
    Ok(ScenarioConfig {
        seed,
        start: YearMonth::new(2012, 1)?,
        months: 18,
        background_per_month: 20,
        background_vocab: vocab(&mut gen, &mut rng, 30),
        topics,
        words_per_tweet: 6,
        plants: vec![PlantConfig {
            part_a: part_a.into(),
            part_b: part_b.into(),
            birth_month: 7,
            birth_offset: 14 * 86_400,
            topic_a: 0,
            topic_b: 1,
            word_overlap: 0.0,
            pre_a: vec![2; 6],
            pre_b: vec![2; 6],
            post_a: spread(totals.1, 10),
            post_b: spread(totals.2, 10),
            post_ab: spread(totals.0, 10),
            users_a: 5,
            users_b: 5,
            user_overlap: 0.0,
            mention_rate: 0.0,
            retweet_rate: 0.0,
            cooccurrence_rate: 0.0,
        }],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SignalOptions {
    /// Number of planted compounds, alternating popular and unpopular.
    pub candidates: usize,
    pub seed: u64,
    pub strength: f64,
    pub topics: usize,
    pub vocab_per_topic: usize,
    pub background_per_month: u32,
}

impl Default for SignalOptions {
    fn default() -> Self {
        SignalOptions {
            candidates: 400,
            seed: 0,
            strength: 1.0,
            topics: 10,
            vocab_per_topic: 30,
            background_per_month: 200,
        }
    }
}

/// Balanced scenario whose constituent parameters are drawn independently
/// of the planted label, then separated by [`plant_signal`].
pub fn signal_scenario(opts: &SignalOptions) -> Result<ScenarioConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut gen = NameGen::new();
    let topics: Vec<Vec<String>> = (0..opts.topics.max(1))
        .map(|_| vocab(&mut gen, &mut rng, opts.vocab_per_topic.max(2)))
        .collect();
    let background_vocab = vocab(&mut gen, &mut rng, 60);
    let mut plants = Vec::with_capacity(opts.candidates);
    for i in 0..opts.candidates {
        let popular = i % 2 == 0;
        let pre = |rng: &mut ChaCha8Rng| (0..6).map(|_| rng.gen_range(9..=14)).collect::<Vec<u32>>();
        let (pre_a, pre_b) = (pre(&mut rng), pre(&mut rng));
        let (mut post_a, mut post_b, mut post_ab) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..10 {
            let (a, b, ab) = if popular {
                let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                (a, b, a.max(b) + rng.gen_range(1..=3))
            } else {
                (rng.gen_range(2..=4), rng.gen_range(2..=4), rng.gen_range(0..=1))
            };
            post_a.push(a);
            post_b.push(b);
            post_ab.push(ab);
        }
        plants.push(PlantConfig {
            part_a: gen.hashtag(&mut rng),
            part_b: gen.hashtag(&mut rng),
            birth_month: 6 + ((i / 2) % 2) as u32,
            birth_offset: rng.gen_range(86_400..27 * 86_400),
            topic_a: rng.gen_range(0..topics.len()),
            topic_b: rng.gen_range(0..topics.len()),
            word_overlap: rng.gen_range(0.0..0.4),
            pre_a,
            pre_b,
            post_a,
            post_b,
            post_ab,
            users_a: rng.gen_range(20..=40),
            users_b: rng.gen_range(20..=40),
            user_overlap: rng.gen_range(0.0..0.4),
            mention_rate: 0.3,
            retweet_rate: 0.2,
            cooccurrence_rate: rng.gen_range(0.0..0.4),
        });
    }
    let cfg = ScenarioConfig {
        seed: opts.seed,
        start: YearMonth::new(2012, 1)?,
        months: 18,
        background_per_month: opts.background_per_month,
        background_vocab,
        topics,
        words_per_tweet: 8,
        plants,
    };
    Ok(plant_signal(&cfg, opts.strength))
}

/// Raise user overlap, word overlap and co-occurrence of compounds that
/// are popular at the first horizon by `0.5 * strength` (capped at 1).
pub fn plant_signal(cfg: &ScenarioConfig, strength: f64) -> ScenarioConfig {
    let mut out = cfg.clone();
    let shift = 0.5 * strength.max(0.0);
    for p in out.plants.iter_mut().filter(|p| p.popular_within(2)) {
        p.user_overlap = (p.user_overlap + shift).min(1.0);
        p.word_overlap = (p.word_overlap + shift).min(1.0);
        p.cooccurrence_rate = (p.cooccurrence_rate + shift).min(1.0);
    }
    out
}
