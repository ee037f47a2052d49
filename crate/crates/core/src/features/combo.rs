//! Compounding-zone combination features: top-20 POS pairs, top-20 entity
//! pairs and the four OOV/INV pairs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::lexicon::PosTag;

pub const POS_SLOTS: usize = 20;
pub const NE_SLOTS: usize = 20;
pub const OOV_INV_NAMES: [&str; 4] = ["OOV-OOV", "INV-OOV", "OOV-INV", "INV-INV"];

/// Raw compounding-zone observations for one candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComboKeys {
    /// Tag symbols of (last word of A, first word of B), e.g. `"AN"`.
    pub pos_pair: String,
    /// Entity labels of the same two words, e.g. `"B-person|I-person"`.
    pub ne_pair: String,
    pub a_inv: bool,
    pub b_inv: bool,
}

impl ComboKeys {
    pub fn new(pos: (PosTag, PosTag), ne: (&str, &str), a_inv: bool, b_inv: bool) -> Self {
        ComboKeys {
            pos_pair: format!("{}{}", pos.0.symbol(), pos.1.symbol()),
            ne_pair: format!("{}|{}", ne.0, ne.1),
            a_inv,
            b_inv,
        }
    }

    /// Index into [`OOV_INV_NAMES`].
    pub fn oov_inv_slot(&self) -> usize {
        match (self.a_inv, self.b_inv) {
            (false, false) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (true, true) => 3,
        }
    }

    pub fn oov_inv_bits(&self) -> [f64; 4] {
        let mut bits = [0.0; 4];
        bits[self.oov_inv_slot()] = 1.0;
        bits
    }
}

/// Frozen lists of the most prevalent POS and entity pairs. Unfilled slots
/// stay in the schema and are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComboSchema {
    pub pos_pairs: Vec<Option<String>>,
    pub ne_pairs: Vec<Option<String>>,
}

fn top_slots<'a>(keys: impl Iterator<Item = &'a str>, slots: usize) -> Vec<Option<String>> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for k in keys {
        *counts.entry(k).or_default() += 1;
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut out: Vec<Option<String>> = ranked.into_iter().take(slots).map(|(k, _)| Some(k.to_string())).collect();
    out.resize(slots, None);
    out
}

impl ComboSchema {
    /// Derive from the training candidates' zone observations. POS pairs
    /// containing `X` and entity pairs with no entity are not eligible.
    pub fn derive<'a, I>(keys: I) -> Self
    where
        I: IntoIterator<Item = &'a ComboKeys> + Clone,
    {
        let pos = keys
            .clone()
            .into_iter()
            .map(|k| k.pos_pair.as_str())
            .filter(|p| !p.contains('X'));
        let ne = keys
            .into_iter()
            .map(|k| k.ne_pair.as_str())
            .filter(|p| *p != "none|none");
        ComboSchema {
            pos_pairs: top_slots(pos, POS_SLOTS),
            ne_pairs: top_slots(ne, NE_SLOTS),
        }
    }

    pub fn empty() -> Self {
        ComboSchema {
            pos_pairs: vec![None; POS_SLOTS],
            ne_pairs: vec![None; NE_SLOTS],
        }
    }

    /// Column names for the 40 schema-driven slots.
    pub fn slot_names(&self) -> Vec<String> {
        let name = |prefix: &str, i: usize, p: &Option<String>| match p {
            Some(p) => format!("{prefix}:{p}"),
            None => format!("{prefix}:slot{:02}", i + 1),
        };
        self.pos_pairs
            .iter()
            .enumerate()
            .map(|(i, p)| name("pos", i, p))
            .chain(self.ne_pairs.iter().enumerate().map(|(i, p)| name("ne", i, p)))
            .collect()
    }

    /// The 40 slot bits for one candidate.
    pub fn slot_bits(&self, keys: &ComboKeys) -> Vec<f64> {
        let hit = |slot: &Option<String>, key: &str| f64::from(u8::from(slot.as_deref() == Some(key)));
        self.pos_pairs
            .iter()
            .map(|s| hit(s, &keys.pos_pair))
            .chain(self.ne_pairs.iter().map(|s| hit(s, &keys.ne_pair)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(pos: &str, ne: &str, a: bool, b: bool) -> ComboKeys {
        ComboKeys {
            pos_pair: pos.into(),
            ne_pair: ne.into(),
            a_inv: a,
            b_inv: b,
        }
    }

    #[test]
    fn oov_inv_exactly_one_bit() {
        for (a, b) in [(false, false), (true, false), (false, true), (true, true)] {
            let bits = keys("NN", "none|none", a, b).oov_inv_bits();
            assert_eq!(bits.iter().sum::<f64>(), 1.0);
        }
        assert_eq!(keys("NN", "none|none", true, true).oov_inv_bits(), [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn schema_ranks_by_prevalence() {
        let data = vec![
            keys("^^", "B-person|I-person", true, true),
            keys("^^", "none|none", true, true),
            keys("AN", "B-person|I-person", true, false),
            keys("XN", "none|B-movie", false, false),
        ];
        let s = ComboSchema::derive(&data);
        assert_eq!(s.pos_pairs.len(), POS_SLOTS);
        assert_eq!(s.pos_pairs[0].as_deref(), Some("^^"));
        assert_eq!(s.pos_pairs[1].as_deref(), Some("AN"));
        assert!(s.pos_pairs[2].is_none());
        assert_eq!(s.ne_pairs[0].as_deref(), Some("B-person|I-person"));
        assert_eq!(s.ne_pairs[1].as_deref(), Some("none|B-movie"));

        let bits = s.slot_bits(&data[0]);
        assert_eq!(bits.len(), POS_SLOTS + NE_SLOTS);
        assert_eq!(bits[0], 1.0);
        assert_eq!(bits[POS_SLOTS], 1.0);
        assert_eq!(bits.iter().sum::<f64>(), 2.0);
        // pairs outside the lists leave every slot at zero
        assert_eq!(s.slot_bits(&keys("DV", "none|none", true, true)).iter().sum::<f64>(), 0.0);
        assert_eq!(s.slot_names()[0], "pos:^^");
        assert_eq!(s.slot_names()[2], "pos:slot03");
    }

    #[test]
    fn top_twenty_cutoff() {
        let data: Vec<ComboKeys> = (0..25)
            .flat_map(|i| {
                let p = format!("{}{}", ['N', 'V', 'A', 'R', 'D'][i % 5], ['N', 'V', 'A', 'R', 'D'][i / 5]);
                std::iter::repeat_n(keys(&p, "none|none", true, true), 30 - i)
            })
            .collect();
        let s = ComboSchema::derive(&data);
        assert!(s.pos_pairs.iter().all(Option::is_some));
        assert_eq!(s.pos_pairs[0].as_deref(), Some("NN"));
        assert!(s.ne_pairs.iter().all(Option::is_none));
    }
}
