//! The explicit module M(w) of a word and M(S) of a permutation datum:
//! cyclic basis, F/V partial maps, their matrices, and the numerical
//! invariants read off the classification.
//!
//! On the basis `{e_a}` the maps act by `F(e_a) = e_{succ(a)}` when the
//! letter at `a` is `f` (else 0) and `V(e_{succ(a)}) = e_a` when the
//! letter at `a` is `v` (else 0). All matrices are 0/1 partial
//! permutations, so ranks are independent of the field the matrices are
//! realized over.

use crate::permdata::{Label, PermutationData};
use crate::semilinear::{FieldDescriptor, Matrix, SemilinearMap};
use crate::words::{BT1Multiset, CyclicWord, Letter, Word, WordError};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KraftError {
    #[error("field has characteristic {field_p}, module has p = {module_p}")]
    FieldMismatch { field_p: u64, module_p: u64 },
}

/// An explicit BT₁ module presented by a basis with a successor bijection
/// and a letter per basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KraftModule {
    p: u64,
    labels: Vec<String>,
    successor: Vec<usize>,
    letters: Vec<Letter>,
}

impl KraftModule {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn letter(&self, i: usize) -> Letter {
        self.letters[i]
    }

    pub fn successor(&self, i: usize) -> usize {
        self.successor[i]
    }

    /// The per-orbit cyclic words of the successor permutation.
    pub fn per_orbit(&self) -> BTreeMap<CyclicWord, u64> {
        let mut out = BTreeMap::new();
        for word in self.orbit_words() {
            *out.entry(word.canonicalize().expect("nonempty")).or_insert(0) += 1;
        }
        out
    }

    /// The Kraft invariant: primitive expansion of the orbit words.
    pub fn multiset(&self) -> BT1Multiset {
        BT1Multiset::from_words(&self.orbit_words()).expect("orbit words are nonempty")
    }

    fn orbit_words(&self) -> Vec<Word> {
        let mut seen = vec![false; self.dim()];
        let mut words = Vec::new();
        for start in 0..self.dim() {
            if seen[start] {
                continue;
            }
            let mut letters_by_j = Vec::new();
            let mut j = start;
            loop {
                seen[j] = true;
                letters_by_j.push(self.letters[j]);
                j = self.successor[j];
                if j == start {
                    break;
                }
            }
            letters_by_j.reverse();
            words.push(Word::from_letters(letters_by_j));
        }
        words
    }
}

impl Serialize for KraftModule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct PiMap<'a>(&'a KraftModule);
        impl Serialize for PiMap<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.dim()))?;
                for (i, label) in self.0.labels.iter().enumerate() {
                    map.serialize_entry(label, &self.0.labels[self.0.successor[i]])?;
                }
                map.end()
            }
        }
        struct LetterMap<'a>(&'a KraftModule);
        impl Serialize for LetterMap<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.dim()))?;
                for (i, label) in self.0.labels.iter().enumerate() {
                    map.serialize_entry(label, &self.0.letters[i])?;
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("KraftModule", 4)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("pi", &PiMap(self))?;
        st.serialize_field("letter", &LetterMap(self))?;
        st.end()
    }
}

/// M(w): basis indexed by Z/λZ, successor j ↦ j+1, letter(j) = u_j.
pub fn module_from_word(p: u64, w: &Word) -> Result<KraftModule, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let n = w.len();
    Ok(KraftModule {
        p,
        labels: (0..n).map(|j| j.to_string()).collect(),
        successor: (0..n).map(|j| (j + 1) % n).collect(),
        letters: (0..n).map(|j| w.letter_at(j)).collect(),
    })
}

/// M(S): basis indexed by the elements, successor = π, letter = sector.
/// Decomposes as a direct sum over the orbits of π.
pub fn module_from_permdata<L: Label>(p: u64, data: &PermutationData<L>) -> KraftModule {
    let n = data.len();
    KraftModule {
        p,
        labels: (0..n).map(|i| data.element_by_index(i).to_string()).collect(),
        successor: (0..n).map(|i| data.pi_by_index(i)).collect(),
        letters: (0..n).map(|i| data.sector_by_index(i)).collect(),
    }
}

/// The 0/1 matrices of F (twist +1) and V (twist −1) on the Kraft basis.
pub fn matrices_of(
    module: &KraftModule,
    field: &FieldDescriptor,
) -> Result<(SemilinearMap, SemilinearMap), KraftError> {
    if field.p() != module.p {
        return Err(KraftError::FieldMismatch { field_p: field.p(), module_p: module.p });
    }
    let n = module.dim();
    let mut f_mat = Matrix::zero(n, n);
    let mut v_mat = Matrix::zero(n, n);
    for a in 0..n {
        let succ = module.successor[a];
        match module.letters[a] {
            Letter::F => f_mat.set(succ, a, 1),
            Letter::V => v_mat.set(a, succ, 1),
        }
    }
    Ok((
        SemilinearMap::new(f_mat, 1).expect("square"),
        SemilinearMap::new(v_mat, -1).expect("square"),
    ))
}

/// a-number of a single word: the number of cyclic positions with
/// `u_j = v` and `u_{j-1} = f`. Agrees with `dim(Ker F ∩ Ker V)` of the
/// Kraft matrices (checked by the semilinear oracle in tests).
pub fn a_number_word(w: &Word) -> Result<u64, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let n = w.len();
    let count = (0..n)
        .filter(|&j| w.letter_at(j) == Letter::V && w.letter_at((j + n - 1) % n) == Letter::F)
        .count();
    Ok(count as u64)
}

/// a-number of a multiset: multiplicity-weighted sum over the keys.
pub fn a_number(ms: &BT1Multiset) -> u64 {
    ms.iter()
        .map(|(k, mult)| a_number_word(k.as_word()).expect("keys are nonempty") * mult)
        .sum()
}

/// p-rank: the multiplicity of the word `f`, the only primitive class
/// with F bijective (the étale part).
pub fn p_rank(ms: &BT1Multiset) -> u64 {
    let f_word = CyclicWord::parse("f").expect("valid");
    ms.get(&f_word)
}

/// Kraft's classification: two multisets present isomorphic modules iff
/// they are equal.
pub fn module_isomorphic(x: &BT1Multiset, y: &BT1Multiset) -> bool {
    x == y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permdata::PermutationData;
    use crate::semilinear::{field_make, kernel_image, subspace_eq, verify_bt1_axioms};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn one_dimensional_modules() {
        let field = field_make(3, 1).unwrap();
        // M(f): F bijective, V = 0
        let m = module_from_word(3, &w("f")).unwrap();
        let (fm, vm) = matrices_of(&m, &field).unwrap();
        assert_eq!(fm.matrix(), &Matrix::from_rows(vec![vec![1]]));
        assert_eq!(vm.matrix(), &Matrix::from_rows(vec![vec![0]]));
        // M(v): V bijective, F = 0
        let m = module_from_word(3, &w("v")).unwrap();
        let (fm, vm) = matrices_of(&m, &field).unwrap();
        assert_eq!(fm.matrix(), &Matrix::from_rows(vec![vec![0]]));
        assert_eq!(vm.matrix(), &Matrix::from_rows(vec![vec![1]]));
    }

    #[test]
    fn fv_matrices() {
        let field = field_make(3, 1).unwrap();
        let m = module_from_word(3, &w("fv")).unwrap();
        let (fm, vm) = matrices_of(&m, &field).unwrap();
        // single 1 in the column of e_1, both maps
        let expect = Matrix::from_rows(vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(fm.matrix(), &expect);
        assert_eq!(vm.matrix(), &expect);
        assert!(verify_bt1_axioms(&fm, &vm, &field).unwrap().is_bt1());
    }

    #[test]
    fn module_from_the_nine_element_datum() {
        let data = crate::fermat::quotient_perm_data(3, 8).unwrap();
        let m = module_from_permdata(3, &data);
        assert_eq!(m.dim(), 6);
        assert_eq!(
            m.multiset(),
            BT1Multiset::from_pairs(&[("v", 2), ("f", 2), ("fv", 1)]).unwrap()
        );

        let fixed = PermutationData::from_fns(vec![1u64], |_| Letter::V, |&a| a).unwrap();
        let m = module_from_permdata(5, &fixed);
        assert_eq!(m.multiset(), BT1Multiset::from_pairs(&[("v", 1)]).unwrap());
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let field = field_make(5, 1).unwrap();
        let m = module_from_word(3, &w("fv")).unwrap();
        assert!(matches!(
            matrices_of(&m, &field),
            Err(KraftError::FieldMismatch { .. })
        ));
    }

    #[test]
    fn a_number_examples() {
        assert_eq!(a_number_word(&w("fv")).unwrap(), 1);
        assert_eq!(a_number_word(&w("v")).unwrap(), 0);
        assert_eq!(a_number_word(&w("f")).unwrap(), 0);
        let ms = BT1Multiset::from_pairs(&[("v", 2), ("f", 2), ("fv", 1)]).unwrap();
        assert_eq!(a_number(&ms), 1);
    }

    #[test]
    fn p_rank_examples() {
        let ms = BT1Multiset::from_pairs(&[("f", 3), ("fv", 1)]).unwrap();
        assert_eq!(p_rank(&ms), 3);
        let ms = BT1Multiset::from_pairs(&[("v", 5)]).unwrap();
        assert_eq!(p_rank(&ms), 0);
    }

    #[test]
    fn isomorphism_examples() {
        let expanded = BT1Multiset::from_words(&[w("fvfv")]).unwrap();
        assert!(module_isomorphic(
            &expanded,
            &BT1Multiset::from_pairs(&[("fv", 2)]).unwrap()
        ));
        assert!(!module_isomorphic(
            &BT1Multiset::from_pairs(&[("f", 1), ("v", 1)]).unwrap(),
            &BT1Multiset::from_pairs(&[("fv", 1)]).unwrap()
        ));
        // keys given by non-canonical rotations normalize on construction
        assert!(module_isomorphic(
            &BT1Multiset::from_pairs(&[("vf", 1)]).unwrap(),
            &BT1Multiset::from_pairs(&[("fv", 1)]).unwrap()
        ));
    }

    /// dim(Ker F ∩ Ker V) through the semilinear maps: the oracle for the
    /// adjacency formula.
    fn a_number_oracle(word: &Word, p: u64, m: usize) -> u64 {
        let field = field_make(p, m).unwrap();
        let module = module_from_word(p, word).unwrap();
        let (fm, vm) = matrices_of(&module, &field).unwrap();
        let ker_f = kernel_image(&fm, &field).kernel;
        let ker_v = kernel_image(&vm, &field).kernel;
        // dim(U ∩ W) = dim U + dim W - dim(U + W)
        let mut stacked: Vec<Vec<u64>> = Vec::new();
        for r in 0..ker_f.rows() {
            stacked.push(ker_f.row(r).to_vec());
        }
        for r in 0..ker_v.rows() {
            stacked.push(ker_v.row(r).to_vec());
        }
        let sum_dim = if stacked.is_empty() {
            0
        } else {
            Matrix::from_rows(stacked).rank(&field)
        };
        (ker_f.rows() + ker_v.rows() - sum_dim) as u64
    }

    fn all_words(len: usize) -> Vec<Word> {
        (0..(1u32 << len))
            .map(|bits| {
                let letters = (0..len)
                    .map(|i| if bits >> i & 1 == 0 { Letter::F } else { Letter::V })
                    .collect();
                Word::from_letters(letters)
            })
            .collect()
    }

    #[test]
    fn a_number_formula_matches_oracle() {
        for p in [2u64, 3, 5] {
            for len in 1..=6 {
                for word in all_words(len) {
                    assert_eq!(
                        a_number_word(&word).unwrap(),
                        a_number_oracle(&word, p, 1),
                        "word {word} at p = {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn axioms_hold_for_all_short_words() {
        for p in [2u64, 3, 5] {
            for len in 1..=5 {
                for word in all_words(len) {
                    for m in [1usize, 2] {
                        let field = field_make(p, m).unwrap();
                        let module = module_from_word(p, &word).unwrap();
                        let (fm, vm) = matrices_of(&module, &field).unwrap();
                        let report = verify_bt1_axioms(&fm, &vm, &field).unwrap();
                        assert!(report.is_bt1(), "word {word}, GF({p}^{m})");
                    }
                }
            }
        }
    }

    #[test]
    fn kraft_basis_kernel_is_v_span() {
        // Ker F = span{e_a : letter(a) = v} = Im V on the Kraft basis
        let field = field_make(2, 1).unwrap();
        for word in all_words(5) {
            let module = module_from_word(2, &word).unwrap();
            let (fm, vm) = matrices_of(&module, &field).unwrap();
            let n = module.dim();
            let v_rows: Vec<Vec<u64>> = (0..n)
                .filter(|&a| module.letter(a) == Letter::V)
                .map(|a| {
                    let mut row = vec![0u64; n];
                    row[a] = 1;
                    row
                })
                .collect();
            let ker_f = kernel_image(&fm, &field).kernel;
            let im_v = kernel_image(&vm, &field).image;
            if v_rows.is_empty() {
                assert_eq!(ker_f.rows(), 0);
                assert_eq!(im_v.rows(), 0);
            } else {
                let span = Matrix::from_rows(v_rows);
                assert!(subspace_eq(&ker_f, &span, &field));
                assert!(subspace_eq(&im_v, &span, &field));
            }
        }
    }

    #[test]
    fn additivity_of_invariants() {
        let a = BT1Multiset::from_pairs(&[("fv", 2), ("ffv", 1)]).unwrap();
        let b = BT1Multiset::from_pairs(&[("f", 1), ("fvv", 3)]).unwrap();
        let mut union = a.clone();
        union.merge(&b);
        assert_eq!(a_number(&union), a_number(&a) + a_number(&b));
        assert_eq!(p_rank(&union), p_rank(&a) + p_rank(&b));
    }

    #[test]
    fn json_rendering() {
        let m = module_from_word(3, &w("fv")).unwrap();
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["p"], 3);
        assert_eq!(json["labels"], serde_json::json!(["0", "1"]));
        assert_eq!(json["pi"], serde_json::json!({"0": "1", "1": "0"}));
        assert_eq!(json["letter"], serde_json::json!({"0": "v", "1": "f"}));
    }
}
