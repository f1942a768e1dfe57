//! Base-p digit engine for `d = p^ℓ - 1`: sector rules, element ↔ word
//! translation, and the recipes that produce elements of S (or pairs in
//! T) whose orbit realizes a prescribed word.
//!
//! Here the ×p permutation rotates the digit vector of the least positive
//! residue, so sector and word questions become digit questions: the
//! sector of `a` is decided by the first digit, scanning downward from
//! the top digit and wrapping past `a_0`, that differs from `(p-1)/2`
//! (comparisons run through `2·digit` vs `p-1`, so p = 2 works too).
//!
//! Recipes are candidate generators, not trusted formulas: every produced
//! element or pair is re-verified by recomputing its orbit word, and a
//! bounded exhaustive search backs them up. The pair recipe for powers is
//! known to slip a wrap-around carry in some cases (e.g. p = 3, target
//! `fvfv`, where the candidate pair (21,19) in T(80) has word `vvfv`);
//! `recipe_matched` on the returned witness records whether the literal
//! recipe worked.

use crate::arith;
use crate::fermat;
use crate::words::{Letter, Word};
use thiserror::Error;

/// Default ceiling on sector evaluations for the fallback searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigitsError {
    #[error("empty word")]
    EmptyWord,
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("residue {a} out of range for d = {d}")]
    OutOfRange { a: u64, d: u64 },
    #[error("residue {a} is excluded from S({d})")]
    ExcludedResidue { a: u64, d: u64 },
    #[error("p^ell = {p}^{ell} does not fit the working range")]
    TooLarge { p: u64, ell: u32 },
    #[error("length-1 words have no carrier at p = 2 (d = 1)")]
    DegreeOne,
    #[error("word {word} is not realizable at p = {p}: {detail}")]
    NotRealizable { word: String, p: u64, detail: String },
    #[error("search budget of {budget} sector evaluations exhausted")]
    SearchExhausted { budget: u64 },
}

/// Base-p digits of a least positive residue, little-endian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    p: u64,
    digits: Vec<u64>,
}

impl DigitVector {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Little-endian digits `a_0, …, a_{ℓ-1}`.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// The digit vector of `p·a mod (p^ℓ - 1)`: a cyclic shift upward.
    pub fn rotated(&self) -> DigitVector {
        let mut digits = self.digits.clone();
        digits.rotate_right(1);
        DigitVector { p: self.p, digits }
    }
}

fn pow_d(p: u64, ell: u32) -> Result<u64, DigitsError> {
    if !arith::is_prime(p) {
        return Err(DigitsError::NotPrime { p });
    }
    if ell == 0 {
        return Err(DigitsError::TooLarge { p, ell });
    }
    arith::checked_pow(p, ell)
        .filter(|&v| v < (1u64 << 62))
        .map(|v| v - 1)
        .ok_or(DigitsError::TooLarge { p, ell })
}

/// Base-p expansion of the least positive residue `a`, `0 < a < p^ℓ - 1`.
pub fn digits_of(a: u64, p: u64, ell: u32) -> Result<DigitVector, DigitsError> {
    let d = pow_d(p, ell)?;
    if a == 0 || a >= d {
        return Err(DigitsError::OutOfRange { a, d });
    }
    let mut digits = vec![0u64; ell as usize];
    let mut rest = a;
    for slot in digits.iter_mut() {
        *slot = rest % p;
        rest /= p;
    }
    Ok(DigitVector { p, digits })
}

/// Three-valued sector of any residue mod `d = p^ℓ - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorClass {
    F,
    V,
    Excluded,
}

impl SectorClass {
    pub fn letter(self) -> Option<Letter> {
        match self {
            SectorClass::F => Some(Letter::F),
            SectorClass::V => Some(Letter::V),
            SectorClass::Excluded => None,
        }
    }
}

/// Digit-rule sector: scan `a_{ℓ-1}, a_{ℓ-2}, …`, wrapping past `a_0`,
/// for the first digit with `2·digit ≠ p-1`; below means `v`, above means
/// `f`, and no such digit means the residue is excluded (0, or d/2 for
/// odd p). Agrees with the archimedean comparison of `a` against d/2 on
/// every input.
pub fn sector_of(a: u64, p: u64, ell: u32) -> Result<SectorClass, DigitsError> {
    let d = pow_d(p, ell)?;
    let r = a % d;
    if r == 0 {
        return Ok(SectorClass::Excluded);
    }
    let digits = digits_of(r, p, ell)?;
    Ok(sector_of_digits(digits.digits(), p, ell as usize - 1))
}

/// Sector scan beginning at digit index `start`, descending with wrap.
fn sector_of_digits(digits: &[u64], p: u64, start: usize) -> SectorClass {
    let ell = digits.len();
    for k in 0..ell {
        let idx = (start + ell - k) % ell;
        let digit = digits[idx];
        if 2 * digit < p - 1 {
            return SectorClass::V;
        }
        if 2 * digit > p - 1 {
            return SectorClass::F;
        }
    }
    SectorClass::Excluded
}

/// Orbit size of `a` under ×p: the multiplicative order of p modulo
/// `d / gcd(d, a)`. Cross-checked against direct iteration.
pub fn orbit_size(a: u64, p: u64, ell: u32) -> Result<u64, DigitsError> {
    let d = pow_d(p, ell)?;
    let r = a % d;
    if sector_of(r, p, ell)? == SectorClass::Excluded {
        return Err(DigitsError::ExcludedResidue { a: r, d });
    }
    let reduced = d / arith::gcd(d, r);
    let by_order = arith::mult_order(p, reduced, u64::from(ell) + 1).expect("order divides ell");
    let mut by_iteration = 1u64;
    let mut x = arith::mod_mul(r, p, d);
    while x != r {
        x = arith::mod_mul(x, p, d);
        by_iteration += 1;
    }
    debug_assert_eq!(by_order, by_iteration);
    if by_order != by_iteration {
        return Err(DigitsError::NotRealizable {
            word: String::new(),
            p,
            detail: format!("orbit size disagreement at a = {r}: {by_order} vs {by_iteration}"),
        });
    }
    Ok(by_order)
}

/// The word of the ×p orbit of `a` in S(p^ℓ - 1), computed through digit
/// rotation; length = orbit size.
pub fn word_of_element(a: u64, p: u64, ell: u32) -> Result<Word, DigitsError> {
    let d = pow_d(p, ell)?;
    let r = a % d;
    let lambda = orbit_size(r, p, ell)?;
    let mut digits = digits_of(r, p, ell)?;
    let mut letters_by_j = Vec::with_capacity(lambda as usize);
    for _ in 0..lambda {
        // sector of the rotated residue = scan starting at its top digit
        let class = sector_of_digits(digits.digits(), p, ell as usize - 1);
        letters_by_j.push(class.letter().expect("orbit members are in S"));
        digits = digits.rotated();
    }
    letters_by_j.reverse();
    Ok(Word::from_letters(letters_by_j))
}

/// Recipe digits for a word: `p-1` where the rendered letter is `f`,
/// `0` where it is `v` (so `a_j` matches the j-th rendered character).
fn recipe_value(w: &Word, p: u64) -> u64 {
    let mut value = 0u64;
    for (j, &letter) in w.letters().iter().enumerate() {
        if letter == Letter::F {
            value += (p - 1) * p.pow(j as u32);
        }
    }
    value
}

/// An element of S(p^ℓ - 1) whose orbit word is `w` (ℓ = len(w)).
///
/// Primitive words use the 0/(p-1) digit recipe; constant words use 1 and
/// d-1 (p > 2); non-primitive words bump one zero digit to 1, which needs
/// p > 3. Every candidate is re-verified, and for p ≤ 3 powers a complete
/// scan of S decides realizability exactly.
pub fn element_for_word(w: &Word, p: u64) -> Result<u64, DigitsError> {
    element_for_word_with(w, p, DEFAULT_SEARCH_BUDGET)
}

pub fn element_for_word_with(w: &Word, p: u64, budget: u64) -> Result<u64, DigitsError> {
    if w.is_empty() {
        return Err(DigitsError::EmptyWord);
    }
    let ell = w.len() as u32;
    let constant = w.letters().iter().all(|&l| l == w.letters()[0]);
    if constant && p == 2 {
        if ell == 1 {
            return Err(DigitsError::DegreeOne);
        }
        // all-f needs every rotation to carry a top digit 1, i.e. all
        // digits 1 (excluded); all-v symmetrically. Nothing to scan.
        return Err(DigitsError::NotRealizable {
            word: w.to_string(),
            p,
            detail: "constant words have no carrier in S at p = 2".to_string(),
        });
    }
    let d = pow_d(p, ell)?;
    let (_, exponent) = w.primitive_root().expect("nonempty");

    let mut candidates = Vec::new();
    if constant {
        candidates.push(if w.letters()[0] == Letter::F { d - 1 } else { 1 });
    } else if exponent == 1 {
        candidates.push(recipe_value(w, p));
    } else {
        // bump the lowest zero digit of the recipe value to 1; sound for
        // p > 3 and worth attempting at p = 3
        if p > 2 {
            let base = recipe_value(w, p);
            let digits = digits_of(base, p, ell)?;
            if let Some(j) = digits.digits().iter().position(|&x| x == 0) {
                candidates.push(base + p.pow(j as u32));
            }
        }
    }

    for candidate in candidates {
        if candidate == 0 || candidate >= d {
            continue;
        }
        if sector_of(candidate, p, ell)? == SectorClass::Excluded {
            continue;
        }
        if word_of_element(candidate, p, ell)? == *w {
            return Ok(candidate);
        }
    }

    // Complete scan of S: returns the least element whose word is w, or
    // decides non-realizability exactly.
    let mut evals = 0u64;
    for a in 1..d {
        if sector_of(a, p, ell)? == SectorClass::Excluded {
            continue;
        }
        evals += orbit_size(a, p, ell)?;
        if evals > budget {
            return Err(DigitsError::SearchExhausted { budget });
        }
        if word_of_element(a, p, ell)? == *w {
            return Ok(a);
        }
    }
    Err(DigitsError::NotRealizable {
        word: w.to_string(),
        p,
        detail: format!("complete scan of S({d}) found no element with this word"),
    })
}

/// Witness pairs in T(p^ℓ - 1) realizing a word: either a single orbit
/// whose cyclic word equals the target, or (for a power `w = root^e`)
/// `e` distinct orbits each with the root's word. `recipe_matched`
/// records whether the literal pair recipe `(a'+1, a'-1)` (or the
/// constant/diagonal recipe) already produced the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub d: u64,
    pub pairs: Vec<(u64, u64)>,
    pub orbit_sizes: Vec<u64>,
    pub recipe_matched: bool,
}

pub fn pair_for_word(w: &Word, p: u64, budget: u64) -> Result<PairWitness, DigitsError> {
    if w.is_empty() {
        return Err(DigitsError::EmptyWord);
    }
    let ell = w.len() as u32;
    let d = pow_d(p, ell)?;
    if d == 1 {
        return Err(DigitsError::DegreeOne);
    }
    let target = w.canonicalize().expect("nonempty");
    let (root, exponent) = w.primitive_root().expect("nonempty");
    let root_cyclic = root.canonicalize().expect("nonempty");
    let constant = w.letters().iter().all(|&l| l == w.letters()[0]);

    // Checks one candidate pair; returns its orbit size when the orbit's
    // cyclic word equals the target, and the sector evaluations spent.
    fn try_single(p: u64, d: u64, pair: (u64, u64), target: &crate::words::CyclicWord) -> (Option<u64>, u64) {
        if !fermat::pair_in_t(d, pair) {
            return (None, 0);
        }
        match fermat::pair_orbit(p, d, pair, d.saturating_mul(2)) {
            Ok((members, word)) => {
                let evals = members.len() as u64;
                let matched = word.canonicalize().map(|c| c == *target).unwrap_or(false);
                (matched.then_some(members.len() as u64), evals)
            }
            Err(_) => (None, 0),
        }
    }

    let mut evals = 0u64;

    // literal recipe candidates, in order
    let mut recipe_pairs = Vec::new();
    if constant && p > 2 {
        recipe_pairs.push(if w.letters()[0] == Letter::F { (d - 1, d - 1) } else { (1, 1) });
    } else if !constant && exponent == 1 {
        let a = recipe_value(w, p);
        recipe_pairs.push((a, a));
    } else if !constant {
        let a_prime = recipe_value(w, p);
        if a_prime >= 1 && a_prime + 1 < d {
            recipe_pairs.push((a_prime + 1, a_prime - 1));
        }
    }

    for pair in recipe_pairs {
        let (hit, spent) = try_single(p, d, pair, &target);
        evals += spent;
        if let Some(size) = hit {
            return Ok(PairWitness { d, pairs: vec![pair], orbit_sizes: vec![size], recipe_matched: true });
        }
        if evals > budget {
            return Err(DigitsError::SearchExhausted { budget });
        }
    }

    // fallback phase 1: diagonal-adjacent pairs (a' + t, a' - t), t = p^k
    if !constant && exponent > 1 {
        let a_prime = recipe_value(w, p);
        let mut t = p;
        for _ in 0..ell {
            if a_prime >= t && a_prime + t < d {
                let pair = (a_prime + t, a_prime - t);
                let (hit, spent) = try_single(p, d, pair, &target);
                evals += spent;
                if let Some(size) = hit {
                    return Ok(PairWitness { d, pairs: vec![pair], orbit_sizes: vec![size], recipe_matched: false });
                }
            }
            if evals > budget {
                return Err(DigitsError::SearchExhausted { budget });
            }
            t = t.saturating_mul(p);
        }
    }

    // fallback phase 2: streaming scan of T in lexicographic order;
    // orbits are visited once, at their least member. Collect either one
    // orbit matching the whole word or `exponent` distinct orbits
    // matching the root.
    let mut root_orbits: Vec<(u64, u64)> = Vec::new();
    let mut root_sizes: Vec<u64> = Vec::new();
    for a in 1..d {
        for b in 1..d {
            let start = (a, b);
            if !fermat::pair_in_t(d, start) {
                continue;
            }
            // walk once, abandoning unless `start` is the least member
            let mut letters_by_j = Vec::new();
            let mut x = start;
            let mut least = true;
            loop {
                evals += 1;
                if evals > budget {
                    return Err(DigitsError::SearchExhausted { budget });
                }
                letters_by_j
                    .push(fermat::sector_of_pair(d, x).expect("in T"));
                x = (arith::mod_mul(x.0, p, d), arith::mod_mul(x.1, p, d));
                if x == start {
                    break;
                }
                if x < start {
                    least = false;
                    break;
                }
            }
            if !least {
                continue;
            }
            letters_by_j.reverse();
            let word = Word::from_letters(letters_by_j);
            let cyclic = word.canonicalize().expect("nonempty");
            if cyclic == target {
                return Ok(PairWitness {
                    d,
                    pairs: vec![start],
                    orbit_sizes: vec![word.len() as u64],
                    recipe_matched: false,
                });
            }
            if exponent > 1 && cyclic == root_cyclic {
                root_orbits.push(start);
                root_sizes.push(word.len() as u64);
                if root_orbits.len() as u64 == exponent {
                    return Ok(PairWitness {
                        d,
                        pairs: root_orbits,
                        orbit_sizes: root_sizes,
                        recipe_matched: false,
                    });
                }
            }
        }
    }
    Err(DigitsError::NotRealizable {
        word: w.to_string(),
        p,
        detail: format!(
            "complete scan of T({d}) found neither an orbit with this word nor {exponent} distinct orbits with word {root_cyclic}"
        ),
    })
}
