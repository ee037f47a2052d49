//! Hashtag, mention and word tokenization.
//!
//! Hashtags follow `'#' [A-Za-z_][A-Za-z0-9_]*` with maximal munch. Word
//! tokens split on whitespace, strip leading/trailing punctuation and
//! lowercase; the `#` sigil is dropped with the punctuation while `@`
//! mentions are not words at all.

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn is_word_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn sigil_runs(text: &str, sigil: u8, start_ok: fn(u8) -> bool) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == sigil && i + 1 < bytes.len() && start_ok(bytes[i + 1]) {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && is_word_byte(bytes[end]) {
                end += 1;
            }
            out.push(&text[start..end]);
            i = end;
        } else {
            i += 1;
        }
    }
    out
}

/// Hashtag bodies (without `#`) in order of appearance, duplicates kept.
pub fn extract_hashtags(text: &str) -> Vec<&str> {
    sigil_runs(text, b'#', is_word_start)
}

/// `@` mention handles in order of appearance.
pub fn extract_mentions(text: &str) -> Vec<&str> {
    sigil_runs(text, b'@', is_word_byte)
}

fn strip_punct(raw: &str) -> &str {
    raw.trim_matches(|c: char| !(c.is_alphanumeric() || c == '_'))
}

/// Word tokens used for language models and overlap features.
pub fn word_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter(|raw| !raw.starts_with('@'))
        .map(strip_punct)
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Word tokens for topic-model documents: as [`word_tokens`] but hashtag
/// tokens are dropped too.
pub fn document_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter(|raw| !raw.starts_with('@') && !raw.starts_with('#'))
        .map(strip_punct)
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hashtag_examples() {
        assert_eq!(extract_hashtags("loving #WikipediaBlackout today"), vec!["WikipediaBlackout"]);
        assert!(extract_hashtags("no tags here").is_empty());
        assert_eq!(extract_hashtags("#A #A #b2"), vec!["A", "A", "b2"]);
    }

    #[test]
    fn hashtag_grammar_edges() {
        assert!(extract_hashtags("#1direction").is_empty());
        assert_eq!(extract_hashtags("#_x9,#y!"), vec!["_x9", "y"]);
        assert_eq!(extract_hashtags("##double"), vec!["double"]);
        assert_eq!(extract_hashtags("#café"), vec!["caf"]);
        assert!(extract_hashtags("#").is_empty());
    }

    #[test]
    fn mentions_and_words() {
        assert_eq!(extract_mentions("hi @bob and @Ann_2!"), vec!["bob", "Ann_2"]);
        assert_eq!(
            word_tokens("RT @bob: Loving #Blackout -- today!!"),
            vec!["rt", "loving", "blackout", "today"]
        );
        assert_eq!(document_tokens("RT @bob: Loving #Blackout -- today!!"), vec!["rt", "loving", "today"]);
    }

    proptest! {
        #[test]
        fn extraction_is_idempotent(text in "[ #a-zA-Z0-9_@!.]{0,60}") {
            let tags = extract_hashtags(&text);
            let rejoined: String = tags.iter().map(|t| format!("#{t} ")).collect();
            let again = extract_hashtags(&rejoined);
            prop_assert_eq!(tags, again);
        }

        #[test]
        fn tokens_are_lowercase_and_nonempty(text in "\\PC{0,80}") {
            for t in word_tokens(&text) {
                prop_assert!(!t.is_empty());
                prop_assert_eq!(t.to_lowercase(), t.clone());
            }
        }
    }
}
