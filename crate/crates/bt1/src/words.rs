//! Words over the two-letter alphabet `{f, v}`, their rotation classes,
//! and multisets of primitive cyclic words.
//!
//! # Index convention
//!
//! A word of length λ is written `u_{λ-1} … u_1 u_0`: the **first**
//! character of the rendered string is the highest-index letter
//! `u_{λ-1}`, and the **last** character is `u_0`. Every index in this
//! crate follows that convention — it is the main notational trap of the
//! subject. [`Word::letter_at`] indexes from the right accordingly.
//!
//! The generator of the rotation action sends `u_{λ-1} … u_0` to
//! `u_0 u_{λ-1} … u_1`, i.e. it moves the last rendered character to the
//! front. A cyclic word is a rotation class; we represent it by its
//! lexicographically least rotation under `f < v`.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// One letter of the alphabet. `F` sorts before `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    F,
    V,
}

impl Letter {
    pub fn complement(self) -> Letter {
        match self {
            Letter::F => Letter::V,
            Letter::V => Letter::F,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::F => 'f',
            Letter::V => 'v',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'f' => Some(Letter::F),
            'v' => Some(Letter::V),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word")]
    EmptyWord,
    #[error("bad character at position {0}: expected 'f' or 'v'")]
    BadCharacter(usize),
}

/// A finite word over `{f, v}`, stored in rendered order `u_{λ-1} … u_0`.
///
/// The empty word is representable but rejected by every operation that
/// produces rotation classes or modules.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// Parses a string of `f`s and `v`s; the first character is `u_{λ-1}`.
    pub fn parse(text: &str) -> Result<Word, WordError> {
        if text.is_empty() {
            return Err(WordError::EmptyWord);
        }
        let letters = text
            .chars()
            .enumerate()
            .map(|(i, c)| Letter::from_char(c).ok_or(WordError::BadCharacter(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { letters })
    }

    /// Builds a word from letters in rendered order (`letters[0] = u_{λ-1}`).
    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters in rendered order, `u_{λ-1}` first.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The letter `u_j`, indexed from the right (`j = 0` is the last
    /// rendered character).
    pub fn letter_at(&self, j: usize) -> Letter {
        assert!(j < self.letters.len(), "letter index out of range");
        self.letters[self.letters.len() - 1 - j]
    }

    /// Letter-wise exchange of `f` and `v`.
    pub fn complement(&self) -> Result<Word, WordError> {
        self.require_nonempty()?;
        Ok(Word {
            letters: self.letters.iter().map(|l| l.complement()).collect(),
        })
    }

    /// The rotation `u_{λ-1} … u_0 ↦ u_0 u_{λ-1} … u_1`, applied `k` times.
    pub fn rotated(&self, k: usize) -> Result<Word, WordError> {
        self.require_nonempty()?;
        let mut letters = self.letters.clone();
        let n = letters.len();
        letters.rotate_right(k % n);
        Ok(Word { letters })
    }

    /// All `λ` rotations, starting with the word itself.
    pub fn rotations(&self) -> Result<Vec<Word>, WordError> {
        self.require_nonempty()?;
        (0..self.letters.len()).map(|k| self.rotated(k)).collect()
    }

    /// The lexicographically least rotation (`f < v`), i.e. the canonical
    /// representative of the rotation class.
    pub fn canonicalize(&self) -> Result<CyclicWord, WordError> {
        let repr = self.rotations()?.into_iter().min().expect("nonempty");
        Ok(CyclicWord { repr })
    }

    /// Writes the word as `root^exponent` with `root` primitive and the
    /// exponent maximal.
    pub fn primitive_root(&self) -> Result<(Word, u64), WordError> {
        self.require_nonempty()?;
        let n = self.letters.len();
        for period in 1..=n {
            if n % period != 0 {
                continue;
            }
            if (0..n).all(|i| self.letters[i] == self.letters[i % period]) {
                let root = Word {
                    letters: self.letters[..period].to_vec(),
                };
                return Ok((root, (n / period) as u64));
            }
        }
        unreachable!("period n always works")
    }

    /// A word is primitive when it is not a power of a shorter word.
    pub fn is_primitive(&self) -> Result<bool, WordError> {
        Ok(self.primitive_root()?.1 == 1)
    }

    /// Concatenates `e` copies of the word (`w^e` in the word monoid).
    pub fn repeat(&self, e: u64) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * e as usize);
        for _ in 0..e {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    fn require_nonempty(&self) -> Result<(), WordError> {
        if self.letters.is_empty() {
            Err(WordError::EmptyWord)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(de::Error::custom)
    }
}

/// A rotation class of words, held as its canonical (least) rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord {
    repr: Word,
}

impl CyclicWord {
    pub fn parse(text: &str) -> Result<CyclicWord, WordError> {
        Word::parse(text)?.canonicalize()
    }

    /// The canonical representative word.
    pub fn as_word(&self) -> &Word {
        &self.repr
    }

    pub fn len(&self) -> usize {
        self.repr.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Complement descends to rotation classes.
    pub fn complement(&self) -> CyclicWord {
        self.repr
            .complement()
            .and_then(|w| w.canonicalize())
            .expect("canonical representative is nonempty")
    }

    pub fn is_self_complementary(&self) -> bool {
        self.complement() == *self
    }

    pub fn is_primitive(&self) -> bool {
        self.repr.is_primitive().expect("nonempty")
    }

    /// Primitive root of the class; the root of the canonical
    /// representative, canonicalized.
    pub fn primitive_root(&self) -> (CyclicWord, u64) {
        let (root, e) = self.repr.primitive_root().expect("nonempty");
        (root.canonicalize().expect("nonempty"), e)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr)
    }
}

impl FromStr for CyclicWord {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CyclicWord::parse(s)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CyclicWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CyclicWord::parse(&s).map_err(de::Error::custom)
    }
}

/// A multiset of primitive cyclic words with positive multiplicities —
/// the complete isomorphism invariant of a BT₁ module.
///
/// Inserting a non-primitive word `w = root^e` adds `e` copies of the
/// canonicalized root, so every key is primitive by construction.
///
/// Serializes as a JSON object `{"<canonical word>": <multiplicity>, …}`
/// with keys in canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BT1Multiset {
    entries: BTreeMap<CyclicWord, u64>,
}

impl BT1Multiset {
    pub fn new() -> BT1Multiset {
        BT1Multiset::default()
    }

    /// Adds `mult` copies of the module of `w`, expanding a power
    /// `w = root^e` into `e·mult` copies of the primitive root.
    pub fn insert_word(&mut self, w: &Word, mult: u64) -> Result<(), WordError> {
        let (root, e) = w.primitive_root()?;
        if mult == 0 {
            return Ok(());
        }
        let key = root.canonicalize()?;
        *self.entries.entry(key).or_insert(0) += e * mult;
        Ok(())
    }

    /// The multiset of one copy of each listed word, expanded to
    /// primitive roots.
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a Word>) -> Result<BT1Multiset, WordError> {
        let mut ms = BT1Multiset::new();
        for w in words {
            ms.insert_word(w, 1)?;
        }
        Ok(ms)
    }

    /// Test-friendly constructor from `(word, multiplicity)` pairs.
    pub fn from_pairs(pairs: &[(&str, u64)]) -> Result<BT1Multiset, WordError> {
        let mut ms = BT1Multiset::new();
        for (text, mult) in pairs {
            ms.insert_word(&Word::parse(text)?, *mult)?;
        }
        Ok(ms)
    }

    pub fn get(&self, key: &CyclicWord) -> u64 {
        self.entries.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CyclicWord, u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// Number of distinct primitive classes.
    pub fn num_classes(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total multiplicity (number of indecomposable summands).
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Σ length × multiplicity — the k-dimension of the module.
    pub fn total_dimension(&self) -> u64 {
        self.entries.iter().map(|(k, v)| k.len() as u64 * v).sum()
    }

    pub fn merge(&mut self, other: &BT1Multiset) {
        for (k, v) in other.iter() {
            *self.entries.entry(k.clone()).or_insert(0) += v;
        }
    }

    /// Multiset containment: every key of `other` with at least its
    /// multiplicity.
    pub fn contains(&self, other: &BT1Multiset) -> bool {
        other.iter().all(|(k, v)| self.get(k) >= v)
    }
}

impl fmt::Display for BT1Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}:{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for BT1Multiset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for BT1Multiset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, u64>::deserialize(d)?;
        let mut ms = BT1Multiset::new();
        for (text, mult) in raw {
            if mult == 0 {
                return Err(de::Error::custom(format!("multiplicity of {text:?} must be >= 1")));
            }
            let w = Word::parse(&text).map_err(de::Error::custom)?;
            ms.insert_word(&w, mult).map_err(de::Error::custom)?;
        }
        Ok(ms)
    }
}

/// Expands a list of orbit words into a multiset of primitive cyclic
/// words: each `w = root^e` contributes `e` copies of the canonical root.
pub fn expand_to_primitive_multiset(words: &[Word]) -> Result<BT1Multiset, WordError> {
    BT1Multiset::from_words(words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let word = w("fv");
        assert_eq!(word.letter_at(1), Letter::F); // u_1
        assert_eq!(word.letter_at(0), Letter::V); // u_0
        let word = w("ffv");
        assert_eq!(word.letter_at(2), Letter::F);
        assert_eq!(word.letter_at(1), Letter::F);
        assert_eq!(word.letter_at(0), Letter::V);
        assert_eq!(Word::parse("xv"), Err(WordError::BadCharacter(0)));
        assert_eq!(Word::parse(""), Err(WordError::EmptyWord));
        assert_eq!(Word::parse("fvx"), Err(WordError::BadCharacter(2)));
    }

    #[test]
    fn render_parse_roundtrip() {
        for s in ["f", "v", "fv", "ffv", "fvvfv"] {
            assert_eq!(w(s).to_string(), s);
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(w("ffv").complement().unwrap(), w("vvf"));
        assert_eq!(w("f").complement().unwrap(), w("v"));
        // fvv -> vff, whose rotation class canonicalizes to ffv
        let c = w("fvv").complement().unwrap();
        assert_eq!(c, w("vff"));
        assert_eq!(c.canonicalize().unwrap(), w("ffv").canonicalize().unwrap());
        assert_eq!(Word::default().complement(), Err(WordError::EmptyWord));
    }

    #[test]
    fn rotation_moves_last_letter_to_front() {
        assert_eq!(w("ffv").rotated(1).unwrap(), w("vff"));
        assert_eq!(w("ffv").rotated(2).unwrap(), w("fvf"));
        assert_eq!(w("ffv").rotated(3).unwrap(), w("ffv"));
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(w("vf").canonicalize().unwrap().to_string(), "fv");
        assert_eq!(w("fvv").canonicalize().unwrap().to_string(), "fvv");
        assert_eq!(w("vvfv").canonicalize().unwrap().to_string(), "fvvv");
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(w("fvfv").primitive_root().unwrap(), (w("fv"), 2));
        assert_eq!(w("ffv").primitive_root().unwrap(), (w("ffv"), 1));
        assert_eq!(w("vvvv").primitive_root().unwrap(), (w("v"), 4));
    }

    #[test]
    fn expand_examples() {
        let ms = expand_to_primitive_multiset(&[w("vv"), w("ff"), w("fv")]).unwrap();
        assert_eq!(ms, BT1Multiset::from_pairs(&[("v", 2), ("f", 2), ("fv", 1)]).unwrap());

        let ms = expand_to_primitive_multiset(&[w("ffv"), w("ffv"), w("fvv")]).unwrap();
        assert_eq!(ms, BT1Multiset::from_pairs(&[("ffv", 2), ("fvv", 1)]).unwrap());

        let ms = expand_to_primitive_multiset(&[w("fvfv")]).unwrap();
        assert_eq!(ms, BT1Multiset::from_pairs(&[("fv", 2)]).unwrap());
    }

    #[test]
    fn multiset_json() {
        let ms = BT1Multiset::from_pairs(&[("v", 2), ("f", 2), ("fv", 1)]).unwrap();
        let json = serde_json::to_string(&ms).unwrap();
        assert_eq!(json, r#"{"f":2,"fv":1,"v":2}"#);
        let back: BT1Multiset = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ms);
        // non-canonical and non-primitive keys are normalized on input
        let back: BT1Multiset = serde_json::from_str(r#"{"vf":1,"fvfv":1}"#).unwrap();
        assert_eq!(back, BT1Multiset::from_pairs(&[("fv", 3)]).unwrap());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(prop_oneof![Just(Letter::F), Just(Letter::V)], 1..12)
            .prop_map(Word::from_letters)
    }

    proptest! {
        #[test]
        fn complement_is_involution(word in arb_word()) {
            let cc = word.complement().unwrap().complement().unwrap();
            prop_assert_eq!(cc, word);
        }

        #[test]
        fn complement_descends_to_cyclic(word in arb_word(), k in 0usize..12) {
            let a = word.rotated(k).unwrap().complement().unwrap().canonicalize().unwrap();
            let b = word.complement().unwrap().canonicalize().unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn canonicalize_is_rotation_invariant(word in arb_word(), k in 0usize..12) {
            prop_assert_eq!(
                word.rotated(k).unwrap().canonicalize().unwrap(),
                word.canonicalize().unwrap()
            );
        }

        #[test]
        fn primitive_root_reassembles(word in arb_word()) {
            let (root, e) = word.primitive_root().unwrap();
            prop_assert_eq!(root.repeat(e), word);
        }

        #[test]
        fn expansion_additive_under_concat(a in prop::collection::vec(arb_word(), 0..5),
                                           b in prop::collection::vec(arb_word(), 0..5)) {
            let mut joined = a.clone();
            joined.extend(b.clone());
            let whole = expand_to_primitive_multiset(&joined).unwrap();
            let mut parts = expand_to_primitive_multiset(&a).unwrap();
            parts.merge(&expand_to_primitive_multiset(&b).unwrap());
            prop_assert_eq!(whole, parts);
        }
    }
}
