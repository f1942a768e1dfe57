//! Finite permutation data `(S = S_f ⊔ S_v, π)` and the orbit → cyclic
//! word map.
//!
//! Each element carries a sector letter (`f` or `v`); walking the orbit of
//! `a` and reading sectors gives the word `w_a = u_{λ-1} … u_0` with
//! `u_j` the sector of `π^j(a)`. Orbits with equal cyclic words give
//! isomorphic summands, and the (unexpanded) multiset of orbit words is a
//! complete isomorphism invariant of the data.

use crate::words::{BT1Multiset, CyclicWord, Letter, Word};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Anything usable as an element label: ordered, printable, cloneable.
pub trait Label: Clone + Ord + fmt::Debug + fmt::Display {}
impl<T: Clone + Ord + fmt::Debug + fmt::Display> Label for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermDataError {
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("pi is not a bijection on the element set: {0}")]
    NotABijection(String),
    #[error("sector map is not total: no sector for {0}")]
    MissingSector(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
}

/// A finite set partitioned into `f`- and `v`-sectors together with a
/// permutation, stored index-based over the sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationData<L: Label> {
    elements: Vec<L>,      // strictly increasing
    sectors: Vec<Letter>,  // parallel to `elements`
    pi: Vec<usize>,        // parallel: index of π(elements[i])
}

/// One orbit of π, listed from its least label: `(a, π(a), π²(a), …)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit<L: Label> {
    members: Vec<L>,
}

impl<L: Label> Orbit<L> {
    pub fn members(&self) -> &[L] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Per-orbit and expanded word multisets of a permutation datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitWords {
    /// One (possibly non-primitive) cyclic word per orbit.
    pub per_orbit: BTreeMap<CyclicWord, u64>,
    /// The primitive expansion of `per_orbit`.
    pub expanded: BT1Multiset,
}

impl OrbitWords {
    pub fn num_orbits(&self) -> u64 {
        self.per_orbit.values().sum()
    }
}

impl<L: Label> PermutationData<L> {
    /// Builds the datum from the element list and two callbacks. The
    /// elements are sorted; π must permute them.
    pub fn from_fns(
        mut elements: Vec<L>,
        sector_of: impl Fn(&L) -> Letter,
        pi_of: impl Fn(&L) -> L,
    ) -> Result<Self, PermDataError> {
        elements.sort();
        for pair in elements.windows(2) {
            if pair[0] == pair[1] {
                return Err(PermDataError::DuplicateLabel(pair[0].to_string()));
            }
        }
        let sectors = elements.iter().map(&sector_of).collect();
        let mut pi = Vec::with_capacity(elements.len());
        let mut hit = vec![false; elements.len()];
        for el in &elements {
            let image = pi_of(el);
            let idx = elements
                .binary_search(&image)
                .map_err(|_| PermDataError::NotABijection(format!("pi({el}) = {image} is not an element")))?;
            if hit[idx] {
                return Err(PermDataError::NotABijection(format!("{image} is hit twice")));
            }
            hit[idx] = true;
            pi.push(idx);
        }
        Ok(PermutationData { elements, sectors, pi })
    }

    /// Builds the datum from explicit sector and π maps (the JSON wire
    /// shape). The element set is the key set of `sector`.
    pub fn from_maps(sector: BTreeMap<L, Letter>, pi: BTreeMap<L, L>) -> Result<Self, PermDataError> {
        let elements: Vec<L> = sector.keys().cloned().collect();
        for el in &elements {
            if !pi.contains_key(el) {
                return Err(PermDataError::NotABijection(format!("pi undefined at {el}")));
            }
        }
        for key in pi.keys() {
            if !sector.contains_key(key) {
                return Err(PermDataError::MissingSector(key.to_string()));
            }
        }
        PermutationData::from_fns(elements, |l| sector[l], |l| pi[l].clone())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[L] {
        &self.elements
    }

    pub fn sector(&self, label: &L) -> Result<Letter, PermDataError> {
        Ok(self.sectors[self.index_of(label)?])
    }

    pub fn pi(&self, label: &L) -> Result<&L, PermDataError> {
        Ok(&self.elements[self.pi[self.index_of(label)?]])
    }

    fn index_of(&self, label: &L) -> Result<usize, PermDataError> {
        self.elements
            .binary_search(label)
            .map_err(|_| PermDataError::UnknownLabel(label.to_string()))
    }

    /// Index-level accessors used by the Kraft-module construction.
    pub(crate) fn sector_by_index(&self, i: usize) -> Letter {
        self.sectors[i]
    }

    pub(crate) fn pi_by_index(&self, i: usize) -> usize {
        self.pi[i]
    }

    pub(crate) fn element_by_index(&self, i: usize) -> &L {
        &self.elements[i]
    }

    /// The orbits of π, each listed from its least member, ordered by
    /// least member.
    pub fn orbits(&self) -> Vec<Orbit<L>> {
        let mut seen = vec![false; self.elements.len()];
        let mut out = Vec::new();
        for start in 0..self.elements.len() {
            if seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut j = start;
            loop {
                seen[j] = true;
                members.push(self.elements[j].clone());
                j = self.pi[j];
                if j == start {
                    break;
                }
            }
            out.push(Orbit { members });
        }
        out
    }

    /// The word of the orbit through `a`, read from `a`: `u_j` is the
    /// sector of `π^j(a)`.
    pub fn word_of_orbit(&self, a: &L) -> Result<Word, PermDataError> {
        Ok(self.word_from_index(self.index_of(a)?))
    }

    fn word_from_index(&self, start: usize) -> Word {
        let mut letters_by_j = Vec::new();
        let mut j = start;
        loop {
            letters_by_j.push(self.sectors[j]);
            j = self.pi[j];
            if j == start {
                break;
            }
        }
        letters_by_j.reverse(); // u_{λ-1} first
        Word::from_letters(letters_by_j)
    }

    /// Collects one cyclic word per orbit, plus its primitive expansion.
    pub fn orbit_word_multisets(&self) -> OrbitWords {
        let mut per_orbit: BTreeMap<CyclicWord, u64> = BTreeMap::new();
        let mut expanded = BT1Multiset::new();
        let mut seen = vec![false; self.elements.len()];
        for start in 0..self.elements.len() {
            if seen[start] {
                continue;
            }
            let mut j = start;
            loop {
                seen[j] = true;
                j = self.pi[j];
                if j == start {
                    break;
                }
            }
            let word = self.word_from_index(start);
            let cyclic = word.canonicalize().expect("orbit words are nonempty");
            *per_orbit.entry(cyclic).or_insert(0) += 1;
            expanded.insert_word(&word, 1).expect("orbit words are nonempty");
        }
        OrbitWords { per_orbit, expanded }
    }

    /// Exchanges the two sectors; complements every orbit word.
    pub fn swap_sectors(&self) -> Self {
        PermutationData {
            elements: self.elements.clone(),
            sectors: self.sectors.iter().map(|s| s.complement()).collect(),
            pi: self.pi.clone(),
        }
    }

    /// Relabels the datum through `f`; useful for JSON rendering.
    pub fn map_labels<M: Label>(&self, f: impl Fn(&L) -> M) -> Result<PermutationData<M>, PermDataError> {
        let sector: BTreeMap<M, Letter> = self
            .elements
            .iter()
            .zip(&self.sectors)
            .map(|(l, &s)| (f(l), s))
            .collect();
        let pi: BTreeMap<M, M> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, l)| (f(l), f(&self.elements[self.pi[i]])))
            .collect();
        PermutationData::from_maps(sector, pi)
    }

    /// Wire-format view with string labels.
    pub fn to_file(&self) -> PermDataFile {
        PermDataFile {
            elements: self.elements.iter().map(|l| l.to_string()).collect(),
            sector: self
                .elements
                .iter()
                .zip(&self.sectors)
                .map(|(l, &s)| (l.to_string(), s))
                .collect(),
            pi: self
                .elements
                .iter()
                .enumerate()
                .map(|(i, l)| (l.to_string(), self.elements[self.pi[i]].to_string()))
                .collect(),
        }
    }
}

/// Two data are isomorphic iff their unexpanded per-orbit cyclic-word
/// multisets coincide (orbits with equal words are isomorphic as
/// sub-data, and the multiset determines everything up to relabeling).
pub fn permdata_isomorphic<A: Label, B: Label>(p: &PermutationData<A>, q: &PermutationData<B>) -> bool {
    p.orbit_word_multisets().per_orbit == q.orbit_word_multisets().per_orbit
}

/// JSON wire format: `{"elements":[…], "sector":{label:"f"|"v"}, "pi":{label:label}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermDataFile {
    pub elements: Vec<String>,
    pub sector: BTreeMap<String, Letter>,
    pub pi: BTreeMap<String, String>,
}

impl PermDataFile {
    pub fn build(&self) -> Result<PermutationData<String>, PermDataError> {
        for el in &self.elements {
            if !self.sector.contains_key(el) {
                return Err(PermDataError::MissingSector(el.clone()));
            }
        }
        for key in self.sector.keys() {
            if !self.elements.contains(key) {
                return Err(PermDataError::UnknownLabel(key.clone()));
            }
        }
        PermutationData::from_maps(self.sector.clone(), self.pi.clone())
    }
}
