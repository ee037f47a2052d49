use crate::corpus::HashtagId;
use crate::lexicon::Dictionary;

/// Splits a hashtag into words; concatenating the lowercased words must
/// give back the canonical hashtag.
pub trait Segmenter {
    fn segment(&self, hashtag: &HashtagId) -> Vec<String>;
}

/// Case/digit boundaries first, then dictionary dynamic programming for
/// out-of-vocabulary chunks longer than three characters.
#[derive(Debug, Clone, Copy)]
pub struct CamelDictionarySegmenter<'a> {
    pub dictionary: &'a Dictionary,
}

impl Segmenter for CamelDictionarySegmenter<'_> {
    fn segment(&self, hashtag: &HashtagId) -> Vec<String> {
        segment_hashtag(hashtag, self.dictionary)
    }
}

fn boundary_chunks(display: &str) -> Vec<&str> {
    let bytes = display.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        let (p, c) = (bytes[i - 1], bytes[i]);
        let split = (p.is_ascii_lowercase() && c.is_ascii_uppercase())
            || (p.is_ascii_alphabetic() && c.is_ascii_digit())
            || (p.is_ascii_digit() && c.is_ascii_alphabetic());
        if split {
            out.push(&display[start..i]);
            start = i;
        }
    }
    if start < bytes.len() {
        out.push(&display[start..]);
    }
    out
}

/// Split maximizing the number of dictionary words; ties go to fewer
/// words, then to the longest leftmost word.
fn dictionary_split<'s>(chunk: &'s str, dict: &Dictionary) -> Vec<&'s str> {
    let lower = chunk.to_ascii_lowercase();
    let n = lower.len();
    // best[i] = (inv words, total words, end of first word) for the suffix starting at i
    let mut best: Vec<(usize, usize, usize)> = vec![(0, 0, n); n + 1];
    for i in (0..n).rev() {
        let mut cur: Option<(usize, usize, usize)> = None;
        for j in (i + 1..=n).rev() {
            let inv = best[j].0 + usize::from(dict.contains(&lower[i..j]));
            let words = best[j].1 + 1;
            let better = match cur {
                None => true,
                Some((ci, cw, _)) => inv > ci || (inv == ci && words < cw),
            };
            if better {
                cur = Some((inv, words, j));
            }
        }
        best[i] = cur.expect("non-empty suffix");
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let j = best[i].2;
        out.push(&chunk[i..j]);
        i = j;
    }
    out
}

pub fn segment_hashtag(hashtag: &HashtagId, dict: &Dictionary) -> Vec<String> {
    let mut words = Vec::new();
    for chunk in boundary_chunks(hashtag.display()) {
        if chunk.len() > 3 && !dict.contains(chunk) {
            words.extend(dictionary_split(chunk, dict).into_iter().map(String::from));
        } else {
            words.push(chunk.to_string());
        }
    }
    words
}
