//! Features of the compound string itself.

use crate::compound::{segment_hashtag, CompoundCandidate};
use crate::corpus::HashtagId;
use crate::lexicon::{Dictionary, EntityTagger, NgramTable, PosTag, PosTagger};
use crate::Result;

use super::combo::ComboKeys;
use super::measures::entropy_of_counts;

pub fn char_length(cand: &CompoundCandidate) -> usize {
    cand.compound.canonical().chars().count()
}

pub fn word_count(cand: &CompoundCandidate, dict: &Dictionary) -> usize {
    segment_hashtag(&cand.compound, dict).len()
}

/// Whether any 2..5-word window of the segmented compound is a known n-gram.
pub fn ngram_presence<S: AsRef<str>>(words: &[S], table: &NgramTable) -> bool {
    !table.matches(words).is_empty()
}

/// Entropy of the tag distribution.
pub fn tag_entropy(tags: &[PosTag]) -> f64 {
    let mut counts = [0u64; PosTag::ALL.len()];
    for t in tags {
        counts[PosTag::ALL.iter().position(|a| a == t).expect("tag in ALL")] += 1;
    }
    entropy_of_counts(counts)
}

pub fn pos_diversity<S: AsRef<str>>(words: &[S], tagger: &dyn PosTagger) -> Result<f64> {
    let words: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
    Ok(tag_entropy(&tagger.tag(&words)?))
}

fn boundary(h: &HashtagId, dict: &Dictionary, last: bool) -> String {
    let words = segment_hashtag(h, dict);
    let w = if last { words.last() } else { words.first() };
    w.cloned().expect("segmentation is never empty")
}

/// Last word of `#A` and first word of `#B`.
pub fn compounding_zone(cand: &CompoundCandidate, dict: &Dictionary) -> (String, String) {
    (boundary(&cand.part_a, dict, true), boundary(&cand.part_b, dict, false))
}

/// Tag the segmented words of `#A` followed by those of `#B` and read off
/// the labels at the compounding zone.
pub fn combo_keys(
    cand: &CompoundCandidate,
    dict: &Dictionary,
    pos: &dyn PosTagger,
    ner: &dyn EntityTagger,
) -> Result<ComboKeys> {
    let a = segment_hashtag(&cand.part_a, dict);
    let b = segment_hashtag(&cand.part_b, dict);
    let words: Vec<&str> = a.iter().chain(&b).map(String::as_str).collect();
    let (ia, ib) = (a.len() - 1, a.len());
    let tags = pos.tag(&words)?;
    let ents = ner.tag(&words)?;
    let (ea, eb) = (ents[ia].to_string(), ents[ib].to_string());
    Ok(ComboKeys::new(
        (tags[ia], tags[ib]),
        (&ea, &eb),
        dict.is_inv(words[ia])?,
        dict.is_inv(words[ib])?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{EntityGazetteer, PosLexicon};
    use PosTag::*;

    fn id(s: &str) -> HashtagId {
        HashtagId::new(s).unwrap()
    }

    fn cand(c: &str, a: &str, b: &str) -> CompoundCandidate {
        CompoundCandidate {
            compound: id(c),
            split_index: a.len(),
            part_a: id(a),
            part_b: id(b),
            compound_first_seen: 100,
            a_first_seen: 1,
            b_first_seen: 1,
        }
    }

    fn dict() -> Dictionary {
        Dictionary::from_words([
            "high", "school", "memories", "questions", "i", "hate", "answering", "freshman", "advice", "golden",
            "globes",
        ])
        .unwrap()
    }

    #[test]
    fn lengths_and_counts() {
        let d = dict();
        assert_eq!(char_length(&cand("GoldenGlobes", "Golden", "Globes")), 12);
        assert_eq!(word_count(&cand("HighSchoolMemories", "HighSchool", "Memories"), &d), 3);
        assert_eq!(word_count(&cand("FreshmanAdvice", "Freshman", "Advice"), &d), 2);
        assert_eq!(word_count(&cand("zzzzzzqq", "zzzzzz", "qq"), &d), 1);
    }

    #[test]
    fn ngram_presence_examples() {
        let mut t = NgramTable::new();
        t.insert("high school", 40).unwrap();
        assert!(ngram_presence(&["high", "school", "memories"], &t));
        assert!(!ngram_presence(&["school", "high"], &t));
        assert!(!ngram_presence(&["high"], &t));
    }

    #[test]
    fn tag_entropy_examples() {
        assert_eq!(tag_entropy(&[CommonNoun, CommonNoun]), 0.0);
        assert!((tag_entropy(&[CommonNoun, Verb]) - 2f64.ln()).abs() < 1e-12);
        let hand = -(2.0 / 3.0 * (2.0f64 / 3.0).ln() + 1.0 / 3.0 * (1.0f64 / 3.0).ln());
        assert!((tag_entropy(&[CommonNoun, CommonNoun, Verb]) - hand).abs() < 1e-12);
        assert!((hand - 0.6365141682948128).abs() < 1e-12);
    }

    #[test]
    fn zone_examples() {
        let d = dict();
        assert_eq!(
            compounding_zone(&cand("QuestionsIHateAnswering", "QuestionsIHate", "Answering"), &d),
            ("Hate".to_string(), "Answering".to_string())
        );
        assert_eq!(
            compounding_zone(&cand("FreshmanAdvice", "Freshman", "Advice"), &d),
            ("Freshman".to_string(), "Advice".to_string())
        );
        assert_eq!(
            compounding_zone(&cand("highschoolmemories", "highschool", "memories"), &d),
            ("school".to_string(), "memories".to_string())
        );
    }

    #[test]
    fn zone_keys_use_joint_tagging() {
        let d = dict();
        let mut pos = PosLexicon::new();
        pos.insert("school", CommonNoun);
        pos.insert("memories", CommonNoun);
        let gaz = EntityGazetteer::from_entries([("high school memories", "movie")], None).unwrap();
        let k = combo_keys(&cand("HighSchoolMemories", "HighSchool", "Memories"), &d, &pos, &gaz).unwrap();
        assert_eq!(k.pos_pair, "NN");
        assert_eq!(k.ne_pair, "I-movie|I-movie");
        assert_eq!(k.oov_inv_bits(), [0.0, 0.0, 0.0, 1.0]);

        let k = combo_keys(&cand("zzqqxxFoo", "zzqqxx", "Foo"), &d, &pos, &gaz).unwrap();
        assert_eq!(k.ne_pair, "none|none");
        assert_eq!(k.oov_inv_slot(), 0);
    }
}
