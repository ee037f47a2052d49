//! Static linguistic resources: INV dictionary, n-gram frequencies, a
//! lexicon-driven POS tagger and a gazetteer entity tagger.
//!
//! All resources are plain UTF-8 text: one word per line for the
//! dictionary, and `key\tvalue` TSV for the other three.

mod dictionary;
mod ner;
mod ngram;
mod pos;

use std::fs;
use std::path::{Path, PathBuf};

pub use dictionary::Dictionary;
pub use ner::{EntityGazetteer, EntityLabel, EntityTagger};
pub use ngram::NgramTable;
pub use pos::{PosLexicon, PosTag, PosTagger};

use crate::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Split a TSV resource into `(line number, key, value)` triples, skipping
/// blank lines and `#` comments.
pub(crate) fn tsv_pairs<'a>(
    path: &'a Path,
    text: &'a str,
) -> impl Iterator<Item = Result<(usize, &'a str, &'a str)>> + 'a {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(move |(i, l)| {
            l.split_once('\t')
                .map(|(k, v)| (i + 1, k.trim(), v.trim()))
                .ok_or_else(|| Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: "expected two tab-separated columns".into(),
                })
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconPaths {
    pub dictionary: PathBuf,
    pub ngrams: PathBuf,
    pub pos: PathBuf,
    pub gazetteer: PathBuf,
}

/// Everything the featurizer needs from static resources.
#[derive(Debug, Clone)]
pub struct LexiconBundle {
    pub dictionary: Dictionary,
    pub ngrams: NgramTable,
    pub pos: PosLexicon,
    pub gazetteer: EntityGazetteer,
}

impl LexiconBundle {
    pub fn load(paths: &LexiconPaths) -> Result<Self> {
        for p in [&paths.dictionary, &paths.ngrams, &paths.pos, &paths.gazetteer] {
            if !p.exists() {
                return Err(Error::io(p, std::io::Error::from(std::io::ErrorKind::NotFound)));
            }
        }
        Ok(LexiconBundle {
            dictionary: Dictionary::load(&paths.dictionary)?,
            ngrams: NgramTable::load(&paths.ngrams)?,
            pos: PosLexicon::load(&paths.pos)?,
            gazetteer: EntityGazetteer::load(&paths.gazetteer, None)?,
        })
    }
}
