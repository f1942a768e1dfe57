//! Target multiset → explicit curve + witnesses + verification.
//!
//! Any BT₁ module appears as a direct factor of the p-torsion of an
//! explicit Jacobian, and this module constructs the curve together with
//! a machine-checkable certificate:
//!
//! * a single primitive class `{w: 1}` of length > 1 is realized in the
//!   quotient curve `y^d = x(1-x)` with `d = p^ℓ - 1` for every p — this
//!   keeps the genus within `(p^ℓ - 2)/2`;
//! * for p > 3, a general target splits into factors `w_i^{e_i}` realized
//!   by single elements of `S(p^{ℓ_i} - 1)` and embedded into one
//!   quotient curve through the divisibility maps;
//! * for p = 3 the same shape runs over the Fermat curve with pair
//!   witnesses (the classes of `Z/3` and `μ_3` alone need the degree-8
//!   Fermat curve);
//! * for p = 2 the étale and multiplicative parts are covered by an
//!   ordinary curve `(x^2-x)(z^r-1) = 1` and the rest by a Fermat curve,
//!   glued along a fiber product.
//!
//! Containment of expanded multisets is the ground truth: a witness orbit
//! with word `w'^e` certifies `e` copies of `M(w')`, so one orbit with the
//! power word and `e` distinct orbits with the root word are
//! interchangeable. Witnesses are always re-verified by recomputing their
//! orbit words from scratch.

use crate::arith;
use crate::digits::{self, DigitsError};
use crate::duality::{self, DualityError, PolarizedFactor};
use crate::fermat::{self, CurveSpec, CurveVariant, FermatError, Genus};
use crate::words::{BT1Multiset, CyclicWord, Word};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("target multiset is empty")]
    EmptyTarget,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parameters exceed the working range: {0}")]
    TooLarge(String),
    #[error("target {target} is not realizable along the supported routes at p = {p}: {detail}")]
    NotRealizable { p: u64, target: String, detail: String },
    #[error("target is not self-dual: {0}")]
    NotSelfDual(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Fermat(#[from] FermatError),
    #[error(transparent)]
    Digits(#[from] DigitsError),
    #[error(transparent)]
    Duality(#[from] DualityError),
}

/// Budgets for enumeration (index-set elements) and witness search
/// (sector evaluations).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizeOptions {
    pub enum_budget: u64,
    pub search_budget: u64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            enum_budget: fermat::DEFAULT_ENUM_BUDGET,
            search_budget: digits::DEFAULT_SEARCH_BUDGET,
        }
    }
}

/// Which construction the plan went through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    QuotientCd,
    FermatFd,
    FermatF8Special,
    FiberProductP2,
}

/// One orbit reference inside a Fermat witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRef {
    pub pair: (u64, u64),
    pub orbit_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessKind {
    /// An element of S(d) whose ×p orbit carries the word.
    QuotientOrbit { d: u64, element: u64, orbit_size: u64 },
    /// One or more σ-orbits in T(d) that together cover the word's
    /// expansion. `recipe_matched` records whether the literal pair
    /// recipe produced the word.
    FermatOrbits { d: u64, orbits: Vec<OrbitRef>, recipe_matched: bool },
    /// `copies` summands of the given length-1 class drawn from the
    /// ordinary curve's `(Z/2 ⊕ μ_2)^{r-1}`.
    OrdinaryPart { r: u64, copies: u64 },
}

/// A factor of the target together with where it is found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// The (possibly non-primitive) word this witness certifies.
    pub word: Word,
    #[serde(flatten)]
    pub kind: WitnessKind,
}

/// An explicit curve plus per-factor witnesses; serializes to the plan
/// file consumed by `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationPlan {
    pub p: u64,
    pub target: BT1Multiset,
    pub curve: CurveSpec,
    pub route: Route,
    pub witnesses: Vec<Witness>,
    pub genus: Genus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarized: Option<Vec<PolarizedFactor>>,
}

/// Realizes the target as a direct factor of the p-torsion of an explicit
/// Jacobian. Deterministic for fixed inputs.
pub fn realize(p: u64, target: &BT1Multiset, options: &RealizeOptions) -> Result<RealizationPlan, RealizeError> {
    if target.is_empty() {
        return Err(RealizeError::EmptyTarget);
    }
    if !arith::is_prime(p) {
        return Err(RealizeError::NotPrime(p));
    }

    // An indecomposable class of length > 1 always fits in a quotient
    // curve, which realizes the sharp genus bound (p^ℓ - 2)/2.
    if let Some((word, 1)) = single_entry(target) {
        if word.len() > 1 {
            return quotient_route(p, target, &word, options);
        }
    }

    match p {
        2 => char_two_route(target, options),
        3 => char_three_route(target, options),
        _ => quotient_lcm_route(p, target, options),
    }
}

/// Realizes a self-dual target and attaches its polarized factorization.
/// A self-complementary class of length ℓ and a complementary pair of
/// length ℓ/2 each land in curves meeting the polarized genus bound.
pub fn realize_polarized(
    p: u64,
    target: &BT1Multiset,
    options: &RealizeOptions,
) -> Result<RealizationPlan, RealizeError> {
    if !duality::is_self_dual(target) {
        return Err(RealizeError::NotSelfDual(target.to_string()));
    }
    let factors = duality::polarized_factorization(target)?;
    let mut plan = realize(p, target, options)?;
    plan.polarized = Some(factors);
    Ok(plan)
}

fn single_entry(target: &BT1Multiset) -> Option<(CyclicWord, u64)> {
    let mut iter = target.iter();
    let (word, mult) = iter.next()?;
    if iter.next().is_some() {
        None
    } else {
        Some((word.clone(), mult))
    }
}

fn pow_minus_one(p: u64, ell: u64) -> Result<u64, RealizeError> {
    u32::try_from(ell)
        .ok()
        .and_then(|e| arith::checked_pow(p, e))
        .filter(|&v| v < (1u64 << 62))
        .map(|v| v - 1)
        .ok_or_else(|| RealizeError::TooLarge(format!("d = {p}^{ell} - 1")))
}

/// The target grouped as `{(root_i, e_i)}` with distinct primitive roots.
fn factors_of(target: &BT1Multiset) -> Vec<(CyclicWord, u64)> {
    target.iter().map(|(k, v)| (k.clone(), v)).collect()
}

fn quotient_route(
    p: u64,
    target: &BT1Multiset,
    word: &CyclicWord,
    options: &RealizeOptions,
) -> Result<RealizationPlan, RealizeError> {
    let ell = word.len() as u64;
    let d = pow_minus_one(p, ell)?;
    let element = digits::element_for_word_with(word.as_word(), p, options.search_budget)?;
    let curve = CurveSpec::new(p, CurveVariant::FermatQuotient { d })?;
    let plan = RealizationPlan {
        p,
        target: target.clone(),
        curve: curve.clone(),
        route: Route::QuotientCd,
        witnesses: vec![Witness {
            word: word.as_word().clone(),
            kind: WitnessKind::QuotientOrbit { d, element, orbit_size: ell },
        }],
        genus: fermat::genus_of(&curve),
        polarized: None,
    };
    Ok(plan)
}

/// p > 3: every factor w_i^{e_i} is a single element of S(p^{ℓ_i} - 1);
/// all of them embed into S(p^ℓ - 1) for ℓ = lcm ℓ_i.
fn quotient_lcm_route(
    p: u64,
    target: &BT1Multiset,
    options: &RealizeOptions,
) -> Result<RealizationPlan, RealizeError> {
    let factors = factors_of(target);
    let mut ell = 1u64;
    let mut per_factor: Vec<(Word, u64, u64)> = Vec::new(); // (word, element, d_i)
    for (root, e) in &factors {
        let word = root.as_word().repeat(*e);
        let ell_i = word.len() as u64;
        let d_i = pow_minus_one(p, ell_i)?;
        let element = digits::element_for_word_with(&word, p, options.search_budget)?;
        per_factor.push((word, element, d_i));
        ell = arith::lcm(ell, ell_i).ok_or_else(|| RealizeError::TooLarge("lcm of factor lengths".into()))?;
    }
    let d = pow_minus_one(p, ell)?;
    let witnesses = per_factor
        .into_iter()
        .map(|(word, element, d_i)| {
            let scale = d / d_i;
            let orbit_size = word.len() as u64;
            Witness {
                word,
                kind: WitnessKind::QuotientOrbit { d, element: element * scale, orbit_size },
            }
        })
        .collect();
    let curve = CurveSpec::new(p, CurveVariant::FermatQuotient { d })?;
    Ok(RealizationPlan {
        p,
        target: target.clone(),
        curve: curve.clone(),
        route: Route::QuotientCd,
        witnesses,
        genus: fermat::genus_of(&curve),
        polarized: None,
    })
}

/// Embedded pair witnesses for a list of factors over a common Fermat
/// curve of degree p^lcm - 1.
fn fermat_factor_witnesses(
    p: u64,
    factors: &[(CyclicWord, u64)],
    options: &RealizeOptions,
) -> Result<(u64, Vec<Witness>), RealizeError> {
    let mut ell = 1u64;
    let mut per_factor: Vec<(Word, digits::PairWitness)> = Vec::new();
    for (root, e) in factors {
        // a length-1 class with multiplicity 1 over-covers through the
        // squared word: the orbit expansion contains the single copy
        let exponent = if root.len() == 1 && *e == 1 { 2 } else { *e };
        let word = root.as_word().repeat(exponent);
        let witness = digits::pair_for_word(&word, p, options.search_budget)?;
        ell = arith::lcm(ell, word.len() as u64)
            .ok_or_else(|| RealizeError::TooLarge("lcm of factor lengths".into()))?;
        per_factor.push((word, witness));
    }
    let d = pow_minus_one(p, ell)?;
    let witnesses = per_factor
        .into_iter()
        .map(|(word, pw)| {
            let scale = d / pw.d;
            let orbits = pw
                .pairs
                .iter()
                .zip(&pw.orbit_sizes)
                .map(|(&(a, b), &size)| OrbitRef { pair: (a * scale, b * scale), orbit_size: size })
                .collect();
            Witness {
                word,
                kind: WitnessKind::FermatOrbits { d, orbits, recipe_matched: pw.recipe_matched },
            }
        })
        .collect();
    Ok((d, witnesses))
}

/// p = 3: pair witnesses over the Fermat curve, except that the classes
/// of Z/3 and μ_3 alone are direct factors of the degree-8 Fermat
/// Jacobian and of no smaller one.
fn char_three_route(target: &BT1Multiset, options: &RealizeOptions) -> Result<RealizationPlan, RealizeError> {
    if let Some((word, 1)) = single_entry(target) {
        if word.len() == 1 {
            return f8_special_route(target, &word, options);
        }
    }
    let factors = factors_of(target);
    let (d, witnesses) = fermat_factor_witnesses(3, &factors, options)?;
    let curve = CurveSpec::new(3, CurveVariant::Fermat { d })?;
    Ok(RealizationPlan {
        p: 3,
        target: target.clone(),
        curve: curve.clone(),
        route: Route::FermatFd,
        witnesses,
        genus: fermat::genus_of(&curve),
        polarized: None,
    })
}

/// Scans T(8) at p = 3 for the first orbit whose expansion contains the
/// requested length-1 class.
fn f8_special_route(
    target: &BT1Multiset,
    word: &CyclicWord,
    _options: &RealizeOptions,
) -> Result<RealizationPlan, RealizeError> {
    let d = 8u64;
    let needed = BT1Multiset::from_words(&[word.as_word().clone()]).expect("nonempty");
    let mut found: Option<OrbitRef> = None;
    'scan: for a in 1..d {
        for b in 1..d {
            if !fermat::pair_in_t(d, (a, b)) {
                continue;
            }
            let (members, orbit_word) = fermat::pair_orbit(3, d, (a, b), 64)?;
            if members.iter().min() != Some(&(a, b)) {
                continue;
            }
            let expansion = BT1Multiset::from_words(&[orbit_word]).expect("nonempty");
            if expansion.contains(&needed) {
                found = Some(OrbitRef { pair: (a, b), orbit_size: members.len() as u64 });
                break 'scan;
            }
        }
    }
    let orbit = found.ok_or_else(|| RealizeError::NotRealizable {
        p: 3,
        target: target.to_string(),
        detail: "no orbit of T(8) covers the class".to_string(),
    })?;
    let orbit_size = orbit.orbit_size;
    let curve = CurveSpec::new(3, CurveVariant::Fermat { d })?;
    Ok(RealizationPlan {
        p: 3,
        target: target.clone(),
        curve: curve.clone(),
        route: Route::FermatF8Special,
        witnesses: vec![Witness {
            word: word.as_word().repeat(orbit_size),
            kind: WitnessKind::FermatOrbits {
                d,
                orbits: vec![orbit],
                recipe_matched: true,
            },
        }],
        genus: fermat::genus_of(&curve),
        polarized: None,
    })
}

/// p = 2: split off (Z/2)^{f1} ⊕ (μ_2)^{f2}, realize the rest over a
/// Fermat curve, and cover the constant part with an ordinary curve
/// `(x^2-x)(z^r-1) = 1`, r odd, r ≥ max(f1, f2) + 1, glued by a fiber
/// product when both parts are present.
fn char_two_route(target: &BT1Multiset, options: &RealizeOptions) -> Result<RealizationPlan, RealizeError> {
    let f_class = CyclicWord::parse("f").expect("valid");
    let v_class = CyclicWord::parse("v").expect("valid");
    let f1 = target.get(&f_class);
    let f2 = target.get(&v_class);
    let rest_factors: Vec<(CyclicWord, u64)> = target
        .iter()
        .filter(|(k, _)| k.len() > 1)
        .map(|(k, v)| (k.clone(), v))
        .collect();

    let mut witnesses = Vec::new();
    let mut fermat_d = None;
    if !rest_factors.is_empty() {
        let (d, mut ws) = fermat_factor_witnesses(2, &rest_factors, options).map_err(|e| match e {
            RealizeError::Digits(DigitsError::NotRealizable { word, p, detail }) => {
                RealizeError::NotRealizable {
                    p,
                    target: target.to_string(),
                    detail: format!("factor {word}: {detail}"),
                }
            }
            other => other,
        })?;
        witnesses.append(&mut ws);
        fermat_d = Some(d);
    }

    let (curve, route) = if f1 == 0 && f2 == 0 {
        let d = fermat_d.expect("nonempty target has factors");
        (CurveSpec::new(2, CurveVariant::Fermat { d })?, Route::FermatFd)
    } else {
        let mut r = f1.max(f2) + 1;
        if r % 2 == 0 {
            r += 1;
        }
        if f1 > 0 {
            witnesses.push(Witness {
                word: Word::parse("f").expect("valid"),
                kind: WitnessKind::OrdinaryPart { r, copies: f1 },
            });
        }
        if f2 > 0 {
            witnesses.push(Witness {
                word: Word::parse("v").expect("valid"),
                kind: WitnessKind::OrdinaryPart { r, copies: f2 },
            });
        }
        match fermat_d {
            Some(d) => (
                CurveSpec::new(2, CurveVariant::FiberProduct { d, r })?,
                Route::FiberProductP2,
            ),
            None => (
                CurveSpec::new(2, CurveVariant::OrdinaryAs { r })?,
                Route::FiberProductP2,
            ),
        }
    };

    Ok(RealizationPlan {
        p: 2,
        target: target.clone(),
        curve: curve.clone(),
        route,
        witnesses,
        genus: fermat::genus_of(&curve),
        polarized: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Recompute every witness orbit and check containment of the target
    /// in the union of their expansions.
    Witness,
    /// Additionally decompose the whole curve (budget permitting) and
    /// check containment there.
    Full,
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub checks: Vec<CheckLine>,
    /// What the witnesses actually provide, recomputed from scratch.
    pub available: BT1Multiset,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Re-verifies a plan. Every failure is reported as
/// [`RealizeError::VerificationFailed`]; the successful report lists the
/// individual checks.
pub fn verify_plan(
    plan: &RealizationPlan,
    mode: VerifyMode,
    options: &RealizeOptions,
) -> Result<VerificationReport, RealizeError> {
    let mut checks = Vec::new();
    let mut available = BT1Multiset::new();
    let mut seen_orbits: BTreeSet<(u64, (u64, u64))> = BTreeSet::new();
    let fail = |detail: String| RealizeError::VerificationFailed(detail);

    let (curve_quotient_d, curve_fermat_d, curve_r) = match plan.curve.variant {
        CurveVariant::FermatQuotient { d } => (Some(d), None, None),
        CurveVariant::Fermat { d } => (None, Some(d), None),
        CurveVariant::OrdinaryAs { r } => (None, None, Some(r)),
        CurveVariant::FiberProduct { d, r } => (None, Some(d), Some(r)),
    };

    for (i, witness) in plan.witnesses.iter().enumerate() {
        match &witness.kind {
            WitnessKind::QuotientOrbit { d, element, orbit_size } => {
                if curve_quotient_d != Some(*d) {
                    return Err(fail(format!("witness {i}: quotient degree {d} does not match the curve")));
                }
                let (members, word) = fermat::residue_orbit(plan.p, *d, *element, options.enum_budget)
                    .map_err(|e| fail(format!("witness {i}: {e}")))?;
                if members.len() as u64 != *orbit_size {
                    return Err(fail(format!(
                        "witness {i}: orbit of {element} has size {} (plan says {orbit_size})",
                        members.len()
                    )));
                }
                let canonical = word.canonicalize().expect("nonempty");
                let claimed = witness.word.canonicalize().expect("nonempty");
                if canonical != claimed {
                    return Err(fail(format!(
                        "witness {i}: orbit of {element} in S({d}) carries {canonical}, plan claims {claimed}"
                    )));
                }
                let key = (*d, (*members.iter().min().expect("nonempty"), 0));
                if !seen_orbits.insert(key) {
                    return Err(fail(format!("witness {i}: duplicate orbit in S({d})")));
                }
                available.insert_word(&word, 1).expect("nonempty");
                checks.push(CheckLine {
                    name: format!("witness_{i}_orbit"),
                    passed: true,
                    detail: format!("element {element} of S({d}) carries {word}"),
                });
            }
            WitnessKind::FermatOrbits { d, orbits, .. } => {
                if curve_fermat_d != Some(*d) {
                    return Err(fail(format!("witness {i}: Fermat degree {d} does not match the curve")));
                }
                let mut union = BT1Multiset::new();
                for orbit in orbits {
                    let (members, word) = fermat::pair_orbit(plan.p, *d, orbit.pair, options.enum_budget)
                        .map_err(|e| fail(format!("witness {i}: {e}")))?;
                    if members.len() as u64 != orbit.orbit_size {
                        return Err(fail(format!(
                            "witness {i}: orbit of {:?} has size {} (plan says {})",
                            orbit.pair,
                            members.len(),
                            orbit.orbit_size
                        )));
                    }
                    let key = (*d, *members.iter().min().expect("nonempty"));
                    if !seen_orbits.insert(key) {
                        return Err(fail(format!("witness {i}: duplicate orbit in T({d})")));
                    }
                    union.insert_word(&word, 1).expect("nonempty");
                }
                let claimed = BT1Multiset::from_words(std::slice::from_ref(&witness.word)).expect("nonempty");
                if !union.contains(&claimed) {
                    return Err(fail(format!(
                        "witness {i}: orbits provide {union}, which does not contain the claimed {claimed}"
                    )));
                }
                available.merge(&union);
                checks.push(CheckLine {
                    name: format!("witness_{i}_orbits"),
                    passed: true,
                    detail: format!("{} orbit(s) in T({d}) provide {union}", orbits.len()),
                });
            }
            WitnessKind::OrdinaryPart { r, copies } => {
                if curve_r != Some(*r) {
                    return Err(fail(format!("witness {i}: ordinary parameter {r} does not match the curve")));
                }
                if witness.word.len() != 1 {
                    return Err(fail(format!("witness {i}: ordinary part must carry a length-1 word")));
                }
                if *copies > r - 1 {
                    return Err(fail(format!(
                        "witness {i}: {copies} copies exceed the ordinary capacity r - 1 = {}",
                        r - 1
                    )));
                }
                available.insert_word(&witness.word, *copies).expect("nonempty");
                checks.push(CheckLine {
                    name: format!("witness_{i}_ordinary"),
                    passed: true,
                    detail: format!("{copies} ≤ r-1 = {} copies of {}", r - 1, witness.word),
                });
            }
        }
    }

    if !available.contains(&plan.target) {
        return Err(fail(format!(
            "containment: witnesses provide {available}, target is {}",
            plan.target
        )));
    }
    checks.push(CheckLine {
        name: "containment".to_string(),
        passed: true,
        detail: format!("target {} ⊆ available {available}", plan.target),
    });

    if mode == VerifyMode::Full {
        let decomposition = fermat::decompose(&plan.curve, options.enum_budget)?;
        if !decomposition.expanded.contains(&plan.target) {
            return Err(fail(format!(
                "full decomposition {} does not contain the target {}",
                decomposition.expanded, plan.target
            )));
        }
        checks.push(CheckLine {
            name: "full_decomposition".to_string(),
            passed: true,
            detail: format!("curve decomposes as {}", decomposition.expanded),
        });
    }

    // genus bound for indecomposable targets
    if let Some((word, 1)) = single_entry(&plan.target) {
        if word.len() > 1 {
            let bound = pow_minus_one(plan.p, word.len() as u64)? - 1; // p^ℓ - 2
            match plan.genus {
                Genus::Exact(g) => {
                    if 2 * g > bound {
                        return Err(fail(format!("genus {g} exceeds the bound ({bound})/2")));
                    }
                    checks.push(CheckLine {
                        name: "genus_bound".to_string(),
                        passed: true,
                        detail: format!("2·{g} ≤ p^ℓ - 2 = {bound}"),
                    });
                }
                Genus::LowerBound { .. } => {}
            }
        }
    }

    Ok(VerificationReport { mode, checks, available })
}
