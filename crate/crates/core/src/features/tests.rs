use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::compound::{CompoundCandidate, Popularity};
use crate::corpus::{parse_timestamp, HashtagId, TimeSpan, Tweet};
use crate::lexicon::{Dictionary, EntityGazetteer, NgramTable, PosLexicon, PosTag};
use crate::topicmodel::{documents_for_candidates, fit_lda, LdaConfig};

fn ts(s: &str) -> Timestamp {
    parse_timestamp(s).unwrap()
}

fn corpus(extra_after_t0: bool) -> Vec<Tweet> {
    let mut out = Vec::new();
    let mut push = |id: String, t: &str, user: &str, text: &str, rt: Option<&str>| {
        out.push(Tweet::new(&id, ts(t), user, text, None, rt.map(str::to_string)).unwrap());
    };
    for d in 1..=28 {
        push(format!("g{d}"), &format!("2012-03-{d:02}T10:00:00Z"), &format!("u{}", d % 5), "#Golden hour in the big apple", None);
        push(format!("b{d}"), &format!("2012-04-{d:02}T10:00:00Z"), &format!("u{}", d % 7), "#Globes spin @news", None);
        push(format!("n{d}"), &format!("2012-05-{d:02}T10:00:00Z"), "x", "noise words only here", None);
    }
    push("c1".into(), "2012-05-30T10:00:00Z", "u1", "#golden #globes the big apple", Some("g1"));
    push("gg".into(), "2012-07-15T00:00:00Z", "u1", "#GoldenGlobes tonight", None);
    if extra_after_t0 {
        for d in 1..=20 {
            push(format!("late{d}"), &format!("2012-08-{d:02}T00:00:00Z"), "z", "#golden #globes brand new words", None);
        }
        push("late-edge".into(), "2012-07-15T00:00:00Z", "z", "#golden edge", None);
    }
    out
}

fn setup(extra: bool) -> (CorpusIndex, CompoundCandidate) {
    let span = TimeSpan {
        start: ts("2012-01-01T00:00:00Z"),
        end: ts("2013-06-01T00:00:00Z"),
    };
    let index = CorpusIndex::from_tweets(corpus(extra), Some(span)).unwrap();
    let c = CompoundCandidate {
        compound: HashtagId::new("GoldenGlobes").unwrap(),
        split_index: 6,
        part_a: HashtagId::new("Golden").unwrap(),
        part_b: HashtagId::new("Globes").unwrap(),
        compound_first_seen: ts("2012-07-15T00:00:00Z"),
        a_first_seen: ts("2012-03-01T10:00:00Z"),
        b_first_seen: ts("2012-04-01T10:00:00Z"),
    };
    (index, c)
}

fn lexicons() -> LexiconBundle {
    let mut ngrams = NgramTable::new();
    ngrams.insert("big apple", 42).unwrap();
    ngrams.insert("golden globes", 7).unwrap();
    let mut pos = PosLexicon::new();
    pos.insert("golden", PosTag::Adjective);
    pos.insert("globes", PosTag::CommonNoun);
    LexiconBundle {
        dictionary: Dictionary::from_words(["golden", "globes", "hour", "big", "apple"]).unwrap(),
        ngrams,
        pos,
        gazetteer: EntityGazetteer::from_entries([("golden globes", "event")], None).unwrap(),
    }
}

fn raw(index: &CorpusIndex, c: &CompoundCandidate) -> RawFeatures {
    let config = ObservationConfig::default();
    let docs = documents_for_candidates(index, std::slice::from_ref(c), config.obs_months).unwrap();
    let model = fit_lda(
        &docs,
        &LdaConfig {
            topics: 3,
            iterations: 25,
            seed: 9,
            ..LdaConfig::default()
        },
    )
    .unwrap();
    extract(c, index, &lexicons(), &model, &config).unwrap()
}

fn named(r: &RawFeatures) -> BTreeMap<&'static str, f64> {
    BASE_FEATURES.iter().map(|f| f.0).zip(r.base.iter().copied()).collect()
}

#[test]
fn extracted_values() {
    let (index, c) = setup(false);
    let r = raw(&index, &c);
    let f = named(&r);
    assert_eq!(f["char_length"], 12.0);
    assert_eq!(f["word_count"], 2.0);
    assert_eq!(f["ngram_presence"], 1.0);
    assert!((f["pos_diversity"] - 2f64.ln()).abs() < 1e-12);
    assert_eq!(f["zone:INV-INV"], 1.0);
    assert_eq!(f["collocation_frequency"], 1.0);
    // the co-occurrence tweet puts "big apple" (42) and "golden globes" (7) on both sides
    assert_eq!(f["ngram_overlap"], 1.0);
    assert_eq!(f["avg_common_ngram_freq"], 24.5);
    assert_eq!(f["common_retweets"], 1.0);
    assert_eq!(f["unique_users_a"], 5.0);
    assert_eq!(f["unique_mentions_b"], 1.0);
    assert!(f["clarity_a"] > 0.0 && f["word_diversity_a"] > 0.0);
    assert_eq!(r.keys.pos_pair, "AN");
    assert_eq!(r.keys.ne_pair, "B-event|I-event");
    assert!(r.warnings.is_empty());

    let schema = FeatureSchema::derive([&r]);
    let v = schema.vector(&r);
    assert_eq!(v.values.len(), schema.len());
    assert_eq!(schema.len(), BASE_FEATURES.len() + POS_SLOTS + NE_SLOTS);
    assert!(v.values.iter().all(|x| x.is_finite()));
    for (col, x) in schema.columns().iter().zip(&v.values) {
        if col.binary {
            assert!(*x == 0.0 || *x == 1.0, "{}", col.name);
        }
    }
    assert_eq!(v.get(&schema, "pos:AN"), Some(1.0));
}

#[test]
fn leakage_probe_is_bit_identical() {
    let (before, c) = setup(false);
    let (after, c2) = setup(true);
    assert!(after.len() > before.len());
    let a = raw(&before, &c);
    let b = raw(&after, &c2);
    let bits = |r: &RawFeatures| r.base.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.keys, b.keys);
}

#[test]
fn repeated_extraction_is_identical() {
    let (index, c) = setup(false);
    assert_eq!(raw(&index, &c), raw(&index, &c));
}

#[test]
fn uncovered_window_is_insufficient_history() {
    let (_, c) = setup(false);
    let span = TimeSpan {
        start: ts("2012-03-01T00:00:00Z"),
        end: ts("2013-06-01T00:00:00Z"),
    };
    let index = CorpusIndex::from_tweets(corpus(false), Some(span)).unwrap();
    let docs = documents_for_candidates(&index, std::slice::from_ref(&c), 6).unwrap();
    let model = fit_lda(&docs, &LdaConfig { topics: 2, iterations: 5, ..LdaConfig::default() }).unwrap();
    let err = extract(&c, &index, &lexicons(), &model, &ObservationConfig::default()).unwrap_err();
    assert!(matches!(err, crate::Error::InsufficientHistory { .. }));
}

#[test]
fn missing_topic_document_is_an_error() {
    let (index, c) = setup(false);
    let other = setup(false).1;
    let mut shifted = other.clone();
    shifted.compound_first_seen -= 86_400;
    let docs = documents_for_candidates(&index, &[shifted], 6).unwrap();
    let model = fit_lda(&docs, &LdaConfig { topics: 2, iterations: 5, ..LdaConfig::default() }).unwrap();
    assert!(extract(&c, &index, &lexicons(), &model, &ObservationConfig::default()).is_err());
}

#[test]
fn csv_round_trip() {
    let (index, c) = setup(false);
    let r = raw(&index, &c);
    let mut r2 = r.clone();
    r2.compound = "Other".into();
    r2.keys.pos_pair = "NN".into();
    let table = FeatureTable {
        schema: FeatureSchema::derive([&r, &r2]),
        rows: vec![r, r2],
        labels: vec![Some(Popularity::Popular), None],
    };
    let mut buf = Vec::new();
    write_feature_csv(&mut buf, &table).unwrap();
    let back = read_feature_csv(buf.as_slice()).unwrap();
    assert_eq!(back, table);
    let header = String::from_utf8(buf).unwrap();
    assert!(header.lines().next().unwrap().ends_with(",pos_pair,ne_pair,label"));

    let side = SchemaFile::new(&table.schema, ObservationConfig::default());
    let json = serde_json::to_string(&side).unwrap();
    let side: SchemaFile = serde_json::from_str(&json).unwrap();
    assert_eq!(side.schema().unwrap(), table.schema);
}

#[test]
fn collocation_is_monotone() {
    let (index, c) = setup(false);
    let (from, to) = crate::compound::observation_window(c.t0(), 6);
    let base = collocation_frequency(&index, "golden", "globes", from, to).unwrap();
    let mut tweets = corpus(false);
    tweets.push(Tweet::new("c2", ts("2012-06-01T00:00:00Z"), "q", "#golden #globes", None, None).unwrap());
    let more = CorpusIndex::from_tweets(tweets, None).unwrap();
    assert_eq!(collocation_frequency(&more, "golden", "globes", from, to).unwrap(), base + 1);
}

proptest! {
    #[test]
    fn entropy_bounded_by_support(counts in prop::collection::vec(0u64..50, 1..12)) {
        let h = measures::entropy_of_counts(counts.iter().copied());
        let support = counts.iter().filter(|&&c| c > 0).count().max(1);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (support as f64).ln() + 1e-12);
    }

    #[test]
    fn clarity_nonnegative(bg in prop::collection::vec(1u64..30, 2..10), doc in prop::collection::vec(0u64..30, 2..10)) {
        let n = bg.len().min(doc.len());
        let background = crate::corpus::BackgroundModel::from_counts(bg[..n].to_vec());
        let d: BTreeMap<u32, u64> = doc[..n].iter().enumerate().map(|(i, &c)| (i as u32, c)).collect();
        let v = clarity_from_counts(&d, &background, 1e-6);
        prop_assert!(v.value >= 0.0);
        // proportional document and background give (near) zero
        let same: BTreeMap<u32, u64> = bg[..n].iter().enumerate().map(|(i, &c)| (i as u32, c * 3)).collect();
        prop_assert!(clarity_from_counts(&same, &background, 1e-6).value < 1e-9);
    }
}
