//! p-torsion decompositions for the Fermat curve `F_d: X^d + Y^d = 1`,
//! its quotient `C_d: y^d = x(1-x)`, the ordinary curves
//! `X_r: (x^2-x)(z^r-1) = 1` in characteristic 2, and fiber products of
//! the last two.
//!
//! For `C_d` the index set is `S = Z/d minus {0}` (and `d/2` when d is
//! even), with sector `v` for least residues below `d/2` and `f` above,
//! and π = multiplication by p. For `F_d` the index set is
//! `T = {(a,b) : a, b, a+b ≠ 0 mod d}` with sector decided by comparing
//! `a+b` (least residues) against `d`, and σ(a,b) = (pa, pb). Orbit words
//! expand to the Kraft multiset of the Jacobian's p-torsion.
//!
//! Archimedean comparisons always lift to least positive residues.
//! Enumeration streams orbits from their least member and never holds all
//! words at once; index sets larger than the configured budget are
//! refused, not truncated.

use crate::arith;
use crate::permdata::{PermDataError, PermutationData};
use crate::words::{BT1Multiset, CyclicWord, Letter, Word};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Default ceiling on the number of index-set elements a decomposition
/// may enumerate.
pub const DEFAULT_ENUM_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FermatError {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("d = {d} is not coprime to p = {p}")]
    NotCoprime { p: u64, d: u64 },
    #[error("degree d = {d} is too small (need d >= 3)")]
    DegreeTooSmall { d: u64 },
    #[error("index set of size {needed} exceeds the enumeration budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("{small} does not divide {big}")]
    NotDivisible { small: u64, big: u64 },
    #[error("variant requires p = 2, got p = {p}")]
    RequiresCharTwo { p: u64 },
    #[error("r = {r} must be odd")]
    EvenR { r: u64 },
    #[error("residue {a} is not in the index set S({d})")]
    NotInS { a: u64, d: u64 },
    #[error("pair ({a},{b}) is not in the index set T({d})")]
    NotInT { a: u64, b: u64, d: u64 },
    #[error(transparent)]
    PermData(#[from] PermDataError),
}

/// Which curve, with its defining parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum CurveVariant {
    /// `y^d = x(1-x)`.
    FermatQuotient { d: u64 },
    /// `X^d + Y^d = 1`.
    Fermat { d: u64 },
    /// `(x^2-x)(z^r-1) = 1`, p = 2 only, r odd.
    OrdinaryAs { r: u64 },
    /// Fiber product of the Fermat curve of degree d and the ordinary
    /// curve of parameter r over the line; p = 2 only.
    FiberProduct { d: u64, r: u64 },
}

/// A curve description together with the characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p: u64,
    #[serde(flatten)]
    pub variant: CurveVariant,
}

impl CurveSpec {
    /// Validates the invariants: p prime, gcd(d, p) = 1, and for the
    /// characteristic-2 variants p = 2 with r odd.
    pub fn new(p: u64, variant: CurveVariant) -> Result<CurveSpec, FermatError> {
        if !arith::is_prime(p) {
            return Err(FermatError::NotPrime { p });
        }
        match variant {
            CurveVariant::FermatQuotient { d } | CurveVariant::Fermat { d } => {
                if d == 0 || arith::gcd(d, p) != 1 {
                    return Err(FermatError::NotCoprime { p, d });
                }
            }
            CurveVariant::OrdinaryAs { r } => {
                if p != 2 {
                    return Err(FermatError::RequiresCharTwo { p });
                }
                if r % 2 == 0 {
                    return Err(FermatError::EvenR { r });
                }
            }
            CurveVariant::FiberProduct { d, r } => {
                if p != 2 {
                    return Err(FermatError::RequiresCharTwo { p });
                }
                if r % 2 == 0 {
                    return Err(FermatError::EvenR { r });
                }
                if d == 0 || arith::gcd(d, p) != 1 {
                    return Err(FermatError::NotCoprime { p, d });
                }
            }
        }
        Ok(CurveSpec { p, variant })
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            CurveVariant::FermatQuotient { d } => write!(f, "y^{d} = x(1-x) over F_{}", self.p),
            CurveVariant::Fermat { d } => write!(f, "X^{d} + Y^{d} = 1 over F_{}", self.p),
            CurveVariant::OrdinaryAs { r } => write!(f, "(x^2-x)(z^{r}-1) = 1 over F_2"),
            CurveVariant::FiberProduct { d, r } => {
                write!(f, "fiber product of X^{d}+Y^{d}=1 and (x^2-x)(z^{r}-1)=1 over F_2")
            }
        }
    }
}

/// Exact genus or (for fiber products) only a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Genus {
    Exact(u64),
    LowerBound { at_least: u64 },
}

impl Genus {
    pub fn exact(&self) -> Option<u64> {
        match self {
            Genus::Exact(g) => Some(*g),
            Genus::LowerBound { .. } => None,
        }
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus::Exact(g) => write!(f, "{g}"),
            Genus::LowerBound { at_least } => write!(f, ">= {at_least}"),
        }
    }
}

/// Genus of the curve: `⌊(d-1)/2⌋` for the quotient, `(d-1)(d-2)/2` for
/// the Fermat curve, `r-1` for the ordinary curve, and a lower bound (sum
/// of the two factors) for the fiber product.
pub fn genus_of(curve: &CurveSpec) -> Genus {
    match curve.variant {
        CurveVariant::FermatQuotient { d } => Genus::Exact((d - 1) / 2),
        CurveVariant::Fermat { d } => Genus::Exact(fermat_genus(d)),
        CurveVariant::OrdinaryAs { r } => Genus::Exact(r - 1),
        CurveVariant::FiberProduct { d, r } => Genus::LowerBound { at_least: fermat_genus(d) + (r - 1) },
    }
}

fn fermat_genus(d: u64) -> u64 {
    if d < 2 {
        0
    } else {
        (d - 1) * (d - 2) / 2
    }
}

/// Is the least residue of `a` in `S(d)`?
pub fn residue_in_s(d: u64, a: u64) -> bool {
    sector_of_residue(d, a).is_some()
}

/// Sector of a residue: `v` below d/2, `f` above, `None` for the excluded
/// residues (0, and d/2 when d is even).
pub fn sector_of_residue(d: u64, a: u64) -> Option<Letter> {
    let r = a % d;
    if r == 0 {
        return None;
    }
    match (2 * r).cmp(&d) {
        std::cmp::Ordering::Less => Some(Letter::V),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(Letter::F),
    }
}

/// Is the pair in `T(d)` (both components and their sum nonzero mod d)?
pub fn pair_in_t(d: u64, pair: (u64, u64)) -> bool {
    sector_of_pair(d, pair).is_some()
}

/// Sector of a pair: compare the sum of least residues with d.
pub fn sector_of_pair(d: u64, (a, b): (u64, u64)) -> Option<Letter> {
    let (ra, rb) = (a % d, b % d);
    if ra == 0 || rb == 0 || (ra + rb) % d == 0 {
        return None;
    }
    Some(if ra + rb > d { Letter::F } else { Letter::V })
}

/// Walks the ×p orbit of a residue in S(d); returns the members starting
/// at `a` and the orbit word read from `a`.
pub fn residue_orbit(p: u64, d: u64, a: u64, max_steps: u64) -> Result<(Vec<u64>, Word), FermatError> {
    let start = a % d;
    let mut members = Vec::new();
    let mut letters_by_j = Vec::new();
    let mut x = start;
    loop {
        let sector = sector_of_residue(d, x).ok_or(FermatError::NotInS { a: x, d })?;
        members.push(x);
        letters_by_j.push(sector);
        if members.len() as u64 > max_steps {
            return Err(FermatError::BudgetExceeded { needed: members.len() as u64, budget: max_steps });
        }
        x = arith::mod_mul(x, p, d);
        if x == start {
            break;
        }
    }
    letters_by_j.reverse();
    Ok((members, Word::from_letters(letters_by_j)))
}

/// Walks the (×p, ×p) orbit of a pair in T(d), as [`residue_orbit`].
pub fn pair_orbit(
    p: u64,
    d: u64,
    pair: (u64, u64),
    max_steps: u64,
) -> Result<(Vec<(u64, u64)>, Word), FermatError> {
    let start = (pair.0 % d, pair.1 % d);
    let mut members = Vec::new();
    let mut letters_by_j = Vec::new();
    let mut x = start;
    loop {
        let sector = sector_of_pair(d, x).ok_or(FermatError::NotInT { a: x.0, b: x.1, d })?;
        members.push(x);
        letters_by_j.push(sector);
        if members.len() as u64 > max_steps {
            return Err(FermatError::BudgetExceeded { needed: members.len() as u64, budget: max_steps });
        }
        x = (arith::mod_mul(x.0, p, d), arith::mod_mul(x.1, p, d));
        if x == start {
            break;
        }
    }
    letters_by_j.reverse();
    Ok((members, Word::from_letters(letters_by_j)))
}

fn validate_p_d(p: u64, d: u64) -> Result<(), FermatError> {
    if !arith::is_prime(p) {
        return Err(FermatError::NotPrime { p });
    }
    if d < 3 {
        return Err(FermatError::DegreeTooSmall { d });
    }
    if arith::gcd(p, d) != 1 {
        return Err(FermatError::NotCoprime { p, d });
    }
    Ok(())
}

/// The permutation datum of `C_d`: residues with sector by comparison
/// against d/2 and π = ×p.
pub fn quotient_perm_data(p: u64, d: u64) -> Result<PermutationData<u64>, FermatError> {
    validate_p_d(p, d)?;
    let elements: Vec<u64> = (1..d).filter(|&a| residue_in_s(d, a)).collect();
    Ok(PermutationData::from_fns(
        elements,
        |&a| sector_of_residue(d, a).expect("element of S"),
        |&a| arith::mod_mul(a, p, d),
    )?)
}

/// Pair label for the Fermat index set `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairLabel {
    pub a: u64,
    pub b: u64,
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// The permutation datum of `F_d`: pairs in T with sector by comparing
/// `a+b` against d and σ = (×p, ×p). `|T| = (d-1)(d-2)`.
pub fn fermat_perm_data(p: u64, d: u64) -> Result<PermutationData<PairLabel>, FermatError> {
    validate_p_d(p, d)?;
    let mut elements = Vec::with_capacity(((d - 1) * (d - 2)) as usize);
    for a in 1..d {
        for b in 1..d {
            if (a + b) % d != 0 {
                elements.push(PairLabel { a, b });
            }
        }
    }
    Ok(PermutationData::from_fns(
        elements,
        |l| sector_of_pair(d, (l.a, l.b)).expect("element of T"),
        |l| PairLabel { a: arith::mod_mul(l.a, p, d), b: arith::mod_mul(l.b, p, d) },
    )?)
}

/// A decomposition report: the expanded Kraft multiset, whether it is
/// only a containment (fiber products), and how many direct summands the
/// enumeration produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub expanded: BT1Multiset,
    pub per_orbit: BTreeMap<CyclicWord, u64>,
    pub partial: bool,
    pub num_orbits: u64,
}

/// Decomposes the p-torsion of the Jacobian into its Kraft multiset.
///
/// Quotient and Fermat variants enumerate the orbits of their index sets;
/// the ordinary curve contributes `{f: r-1, v: r-1}`; a fiber product is
/// the union of its two factors and is marked `partial` (the union is a
/// direct factor, not necessarily the whole p-torsion).
pub fn decompose(curve: &CurveSpec, budget: u64) -> Result<Decomposition, FermatError> {
    match curve.variant {
        CurveVariant::FermatQuotient { d } => decompose_quotient(curve.p, d, budget),
        CurveVariant::Fermat { d } => decompose_fermat(curve.p, d, budget),
        CurveVariant::OrdinaryAs { r } => Ok(decompose_ordinary(r)),
        CurveVariant::FiberProduct { d, r } => {
            let fermat = decompose_fermat(curve.p, d, budget)?;
            let ordinary = decompose_ordinary(r);
            let mut expanded = fermat.expanded;
            expanded.merge(&ordinary.expanded);
            let mut per_orbit = fermat.per_orbit;
            for (k, v) in ordinary.per_orbit {
                *per_orbit.entry(k).or_insert(0) += v;
            }
            Ok(Decomposition {
                expanded,
                per_orbit,
                partial: true,
                num_orbits: fermat.num_orbits + ordinary.num_orbits,
            })
        }
    }
}

fn decompose_quotient(p: u64, d: u64, budget: u64) -> Result<Decomposition, FermatError> {
    if d < 3 {
        return Ok(empty_decomposition());
    }
    let size = if d % 2 == 0 { d - 2 } else { d - 1 };
    if size > budget {
        return Err(FermatError::BudgetExceeded { needed: size, budget });
    }
    let mut dec = empty_decomposition();
    for a in 1..d {
        if !residue_in_s(d, a) {
            continue;
        }
        // walk once; abort unless `a` is the least member of its orbit
        let mut letters_by_j = Vec::new();
        let mut x = a;
        let mut least = true;
        loop {
            letters_by_j.push(sector_of_residue(d, x).expect("in S"));
            x = arith::mod_mul(x, p, d);
            if x == a {
                break;
            }
            if x < a {
                least = false;
                break;
            }
        }
        if least {
            letters_by_j.reverse();
            record_orbit(&mut dec, Word::from_letters(letters_by_j));
        }
    }
    Ok(dec)
}

fn decompose_fermat(p: u64, d: u64, budget: u64) -> Result<Decomposition, FermatError> {
    if d < 3 {
        return Ok(empty_decomposition());
    }
    let size = (d - 1) * (d - 2);
    if size > budget {
        return Err(FermatError::BudgetExceeded { needed: size, budget });
    }
    let mut dec = empty_decomposition();
    for a in 1..d {
        for b in 1..d {
            let start = (a, b);
            if !pair_in_t(d, start) {
                continue;
            }
            let mut letters_by_j = Vec::new();
            let mut x = start;
            let mut least = true;
            loop {
                letters_by_j.push(sector_of_pair(d, x).expect("in T"));
                x = (arith::mod_mul(x.0, p, d), arith::mod_mul(x.1, p, d));
                if x == start {
                    break;
                }
                if x < start {
                    least = false;
                    break;
                }
            }
            if least {
                letters_by_j.reverse();
                record_orbit(&mut dec, Word::from_letters(letters_by_j));
            }
        }
    }
    Ok(dec)
}

fn decompose_ordinary(r: u64) -> Decomposition {
    let mut dec = empty_decomposition();
    for _ in 0..r - 1 {
        record_orbit(&mut dec, Word::parse("f").expect("valid"));
        record_orbit(&mut dec, Word::parse("v").expect("valid"));
    }
    dec
}

fn empty_decomposition() -> Decomposition {
    Decomposition {
        expanded: BT1Multiset::new(),
        per_orbit: BTreeMap::new(),
        partial: false,
        num_orbits: 0,
    }
}

fn record_orbit(dec: &mut Decomposition, word: Word) {
    let cyclic = word.canonicalize().expect("orbit words are nonempty");
    *dec.per_orbit.entry(cyclic).or_insert(0) += 1;
    dec.expanded.insert_word(&word, 1).expect("nonempty");
    dec.num_orbits += 1;
}

/// The multiplication-by-(d_big/d_small) embedding `S(d_small) → S(d_big)`.
/// It preserves sectors and intertwines the ×p permutations, so the
/// expanded multiset of the smaller Jacobian embeds in the larger one.
pub fn divisibility_embed(p: u64, d_small: u64, d_big: u64) -> Result<BTreeMap<u64, u64>, FermatError> {
    validate_p_d(p, d_small)?;
    validate_p_d(p, d_big)?;
    if d_big % d_small != 0 {
        return Err(FermatError::NotDivisible { small: d_small, big: d_big });
    }
    let k = d_big / d_small;
    Ok((1..d_small)
        .filter(|&a| residue_in_s(d_small, a))
        .map(|a| (a, a * k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kraft::{a_number, p_rank};
    use crate::words::Letter;

    fn quotient(p: u64, d: u64) -> CurveSpec {
        CurveSpec::new(p, CurveVariant::FermatQuotient { d }).unwrap()
    }

    fn fermat(p: u64, d: u64) -> CurveSpec {
        CurveSpec::new(p, CurveVariant::Fermat { d }).unwrap()
    }

    #[test]
    fn quotient_perm_data_examples() {
        let data = quotient_perm_data(3, 8).unwrap();
        assert_eq!(data.elements(), &[1, 2, 3, 5, 6, 7]);
        for &a in &[1u64, 2, 3] {
            assert_eq!(data.sector(&a).unwrap(), Letter::V);
        }
        for &a in &[5u64, 6, 7] {
            assert_eq!(data.sector(&a).unwrap(), Letter::F);
        }
        assert_eq!(*data.pi(&1).unwrap(), 3);
        assert_eq!(*data.pi(&6).unwrap(), 2);

        let data = quotient_perm_data(2, 3).unwrap();
        assert_eq!(data.elements(), &[1, 2]);
        assert_eq!(data.sector(&1).unwrap(), Letter::V);
        assert_eq!(data.sector(&2).unwrap(), Letter::F);
        assert_eq!(*data.pi(&1).unwrap(), 2);
        assert_eq!(*data.pi(&2).unwrap(), 1);

        assert!(matches!(
            quotient_perm_data(5, 10),
            Err(FermatError::NotCoprime { .. })
        ));
        assert!(matches!(
            quotient_perm_data(5, 2),
            Err(FermatError::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn fermat_perm_data_examples() {
        let data = fermat_perm_data(2, 3).unwrap();
        assert_eq!(
            data.elements(),
            &[PairLabel { a: 1, b: 1 }, PairLabel { a: 2, b: 2 }]
        );
        let ow = data.orbit_word_multisets();
        assert_eq!(ow.expanded, BT1Multiset::from_pairs(&[("fv", 1)]).unwrap());

        let data = fermat_perm_data(3, 8).unwrap();
        assert_eq!(data.len(), 42); // (d-1)(d-2)
        assert_eq!(
            data.word_of_orbit(&PairLabel { a: 5, b: 7 }).unwrap(),
            Word::parse("ff").unwrap()
        );
        assert_eq!(
            data.word_of_orbit(&PairLabel { a: 1, b: 3 }).unwrap(),
            Word::parse("vv").unwrap()
        );
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_of(&quotient(3, 8)), Genus::Exact(3));
        assert_eq!(genus_of(&fermat(3, 8)), Genus::Exact(21));
        let ordinary = CurveSpec::new(2, CurveVariant::OrdinaryAs { r: 3 }).unwrap();
        assert_eq!(genus_of(&ordinary), Genus::Exact(2));
        let fp = CurveSpec::new(2, CurveVariant::FiberProduct { d: 7, r: 3 }).unwrap();
        assert_eq!(genus_of(&fp), Genus::LowerBound { at_least: 17 });
    }

    #[test]
    fn curve_spec_validation() {
        assert!(matches!(
            CurveSpec::new(3, CurveVariant::FermatQuotient { d: 9 }),
            Err(FermatError::NotCoprime { .. })
        ));
        assert!(matches!(
            CurveSpec::new(3, CurveVariant::OrdinaryAs { r: 3 }),
            Err(FermatError::RequiresCharTwo { .. })
        ));
        assert!(matches!(
            CurveSpec::new(2, CurveVariant::OrdinaryAs { r: 4 }),
            Err(FermatError::EvenR { .. })
        ));
        assert!(matches!(
            CurveSpec::new(4, CurveVariant::Fermat { d: 3 }),
            Err(FermatError::NotPrime { .. })
        ));
    }

    #[test]
    fn curve_spec_json() {
        let spec = quotient(3, 8);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"p":3,"variant":"fermat_quotient","d":8}"#);
        let back: CurveSpec = serde_json::from_str(r#"{"variant":"fermat_quotient","d":8,"p":3}"#).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn decompose_quotient_examples() {
        let dec = decompose(&quotient(3, 8), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(
            dec.expanded,
            BT1Multiset::from_pairs(&[("v", 2), ("f", 2), ("fv", 1)]).unwrap()
        );
        assert!(!dec.partial);
        assert_eq!(dec.num_orbits, 3);
        assert_eq!(dec.expanded.total_dimension(), 6); // 2 × genus 3

        let dec = decompose(&quotient(2, 7), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(
            dec.expanded,
            BT1Multiset::from_pairs(&[("fvv", 1), ("ffv", 1)]).unwrap()
        );

        let dec = decompose(&quotient(2, 3), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(dec.expanded, BT1Multiset::from_pairs(&[("fv", 1)]).unwrap());
    }

    #[test]
    fn decompose_matches_permdata_route() {
        for (p, d) in [(3u64, 8u64), (2, 7), (2, 9), (5, 12), (7, 10)] {
            let streamed = decompose(&quotient(p, d), DEFAULT_ENUM_BUDGET).unwrap();
            let ow = quotient_perm_data(p, d).unwrap().orbit_word_multisets();
            assert_eq!(streamed.expanded, ow.expanded);
            assert_eq!(streamed.per_orbit, ow.per_orbit);
        }
        for (p, d) in [(2u64, 7u64), (3, 8), (5, 6)] {
            let streamed = decompose(&fermat(p, d), DEFAULT_ENUM_BUDGET).unwrap();
            let ow = fermat_perm_data(p, d).unwrap().orbit_word_multisets();
            assert_eq!(streamed.expanded, ow.expanded);
            assert_eq!(streamed.per_orbit, ow.per_orbit);
        }
    }

    #[test]
    fn decompose_ordinary_and_fiber_product() {
        let ordinary = CurveSpec::new(2, CurveVariant::OrdinaryAs { r: 3 }).unwrap();
        let dec = decompose(&ordinary, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(dec.expanded, BT1Multiset::from_pairs(&[("f", 2), ("v", 2)]).unwrap());
        assert!(!dec.partial);

        let fp = CurveSpec::new(2, CurveVariant::FiberProduct { d: 3, r: 3 }).unwrap();
        let dec = decompose(&fp, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(
            dec.expanded,
            BT1Multiset::from_pairs(&[("f", 2), ("v", 2), ("fv", 1)]).unwrap()
        );
        assert!(dec.partial);
    }

    #[test]
    fn degenerate_degrees_give_empty_decompositions() {
        // F_2 is rational; C_1, C_2 likewise contribute nothing
        for curve in [fermat(3, 2), quotient(3, 2), quotient(2, 1), fermat(2, 1)] {
            let dec = decompose(&curve, DEFAULT_ENUM_BUDGET).unwrap();
            assert!(dec.expanded.is_empty(), "{curve}");
            assert_eq!(genus_of(&curve), Genus::Exact(0));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = decompose(&fermat(3, 100), 1000).unwrap_err();
        assert_eq!(err, FermatError::BudgetExceeded { needed: 99 * 98, budget: 1000 });
    }

    #[test]
    fn dimension_accounting_small_sweep() {
        for p in [2u64, 3, 5, 7] {
            for d in 3..=60 {
                if arith::gcd(p, d) != 1 {
                    continue;
                }
                let dec = decompose(&quotient(p, d), DEFAULT_ENUM_BUDGET).unwrap();
                let genus = genus_of(&quotient(p, d)).exact().unwrap();
                assert_eq!(dec.expanded.total_dimension(), 2 * genus, "quotient p={p} d={d}");
            }
            for d in 3..=20 {
                if arith::gcd(p, d) != 1 {
                    continue;
                }
                let dec = decompose(&fermat(p, d), DEFAULT_ENUM_BUDGET).unwrap();
                let genus = genus_of(&fermat(p, d)).exact().unwrap();
                assert_eq!(dec.expanded.total_dimension(), 2 * genus, "fermat p={p} d={d}");
                assert_eq!(fermat_perm_data(p, d).unwrap().len() as u64, (d - 1) * (d - 2));
            }
        }
    }

    #[test]
    fn decompositions_are_complement_closed() {
        use crate::duality::is_self_dual;
        for (p, d) in [(2u64, 7u64), (2, 15), (3, 8), (3, 10), (5, 8), (7, 12)] {
            let dec = decompose(&quotient(p, d), DEFAULT_ENUM_BUDGET).unwrap();
            assert!(is_self_dual(&dec.expanded), "quotient p={p} d={d}");
            let dec = decompose(&fermat(p, d), DEFAULT_ENUM_BUDGET).unwrap();
            assert!(is_self_dual(&dec.expanded), "fermat p={p} d={d}");
        }
    }

    #[test]
    fn divisibility_embed_examples() {
        let map = divisibility_embed(3, 8, 80).unwrap();
        assert_eq!(map[&2], 20);
        assert_eq!(map[&6], 60);
        // the image orbit {20, 60} keeps the word fv
        let (_, word) = residue_orbit(3, 80, 20, 100).unwrap();
        assert_eq!(word, Word::parse("fv").unwrap());

        let identity = divisibility_embed(3, 8, 8).unwrap();
        assert!(identity.iter().all(|(a, b)| a == b));

        assert!(matches!(
            divisibility_embed(2, 3, 7),
            Err(FermatError::NotDivisible { .. })
        ));
    }

    #[test]
    fn divisibility_embed_preserves_words_exhaustively() {
        for (p, d_small, d_big) in [(3u64, 8u64, 80u64), (2, 3, 15), (2, 7, 21), (5, 4, 24), (7, 4, 16)] {
            let map = divisibility_embed(p, d_small, d_big).unwrap();
            for (&a, &image) in &map {
                let (_, w_small) = residue_orbit(p, d_small, a, 10_000).unwrap();
                let (_, w_big) = residue_orbit(p, d_big, image, 10_000).unwrap();
                assert_eq!(w_small, w_big, "p={p} {d_small}|{d_big} a={a}");
            }
            // hence the smaller multiset embeds in the larger one
            let small = decompose(&quotient(p, d_small), DEFAULT_ENUM_BUDGET).unwrap();
            let big = decompose(&quotient(p, d_big), DEFAULT_ENUM_BUDGET).unwrap();
            assert!(big.expanded.contains(&small.expanded), "p={p} {d_small}|{d_big}");
        }
    }

    #[test]
    fn diagonal_embedding_preserves_words() {
        for (p, d) in [(2u64, 7u64), (3, 8), (5, 8), (2, 15)] {
            for a in 1..d {
                if !residue_in_s(d, a) {
                    continue;
                }
                let (_, w_s) = residue_orbit(p, d, a, 10_000).unwrap();
                let (_, w_t) = pair_orbit(p, d, (a, a), 10_000).unwrap();
                assert_eq!(w_s, w_t, "p={p} d={d} a={a}");
            }
        }
    }

    #[test]
    fn fermat_p2_d7_has_full_multiset() {
        // 30-dimensional: {f:6, v:6, ffv:3, fvv:3}; the constant-word
        // orbits, e.g. (3,5) -> (6,3) -> (5,6), contribute etale parts.
        let dec = decompose(&fermat(2, 7), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(
            dec.expanded,
            BT1Multiset::from_pairs(&[("f", 6), ("v", 6), ("ffv", 3), ("fvv", 3)]).unwrap()
        );
        assert_eq!(p_rank(&dec.expanded), 6);
        assert_eq!(a_number(&dec.expanded), 6);
        let (members, word) = pair_orbit(2, 7, (3, 5), 100).unwrap();
        assert_eq!(members, vec![(3, 5), (6, 3), (5, 6)]);
        assert_eq!(word, Word::parse("fff").unwrap());
    }

    #[test]
    fn quotient_p2_has_p_rank_zero() {
        // no ×2 orbit on S(d) can carry an all-f word, so the quotient
        // Jacobians have p-rank 0 in characteristic 2
        for d in [3u64, 7, 9, 15, 31, 63] {
            let dec = decompose(&quotient(2, d), DEFAULT_ENUM_BUDGET).unwrap();
            assert_eq!(p_rank(&dec.expanded), 0, "d = {d}");
        }
    }
}
