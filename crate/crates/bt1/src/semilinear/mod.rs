//! σ-semilinear maps over GF(p^m) and the independent BT₁ axiom verifier.
//!
//! A map with matrix A and twist t sends x to `A·σ^t(x)` with σ applied
//! coordinate-wise (t = +1 for Frobenius, −1 for Verschiebung). Since σ is
//! an automorphism, kernels and images are honest GF(p^m)-subspaces:
//! the image is the column space of A and the kernel is σ^{-t} applied
//! entry-wise to the null space of A.
//!
//! The axioms checked here — `Ker F = Im V`, `Ker V = Im F`, and
//! `FV = VF = 0` (the mod-p shadow of FV = p) — characterize Dieudonné
//! modules of BT₁ group schemes, with α_p's module (F = V = 0) as the
//! standard failing example.

mod field;
mod matrix;

pub use field::{field_make, FieldDescriptor, FieldError};
pub use matrix::{reduce_against, subspace_contains, subspace_eq, Matrix};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilinearError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("expected twists +1 and -1, got {f_twist} and {v_twist}")]
    TwistMismatch { f_twist: i64, v_twist: i64 },
    #[error("base-change matrix is singular")]
    Singular,
}

/// x ↦ A·σ^twist(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    matrix: Matrix,
    twist: i64,
}

impl SemilinearMap {
    pub fn new(matrix: Matrix, twist: i64) -> Result<SemilinearMap, SemilinearError> {
        if matrix.rows() != matrix.cols() {
            return Err(SemilinearError::ShapeMismatch(format!(
                "{}x{} matrix is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(SemilinearMap { matrix, twist })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[u64], f: &FieldDescriptor) -> Vec<u64> {
        assert_eq!(x.len(), self.dim());
        let twisted: Vec<u64> = x.iter().map(|&v| f.sigma_pow(v, self.twist)).collect();
        let mut out = vec![0u64; self.dim()];
        for (r, o) in out.iter_mut().enumerate() {
            for (c, &v) in twisted.iter().enumerate() {
                *o = f.add(*o, f.mul(self.matrix.get(r, c), v));
            }
        }
        out
    }

    /// Composition `self ∘ rhs`: matrix `A_self · σ^{t_self}(A_rhs)`,
    /// twists add.
    pub fn compose(&self, rhs: &SemilinearMap, f: &FieldDescriptor) -> Result<SemilinearMap, SemilinearError> {
        if self.dim() != rhs.dim() {
            return Err(SemilinearError::ShapeMismatch(format!(
                "composing dimension {} with {}",
                self.dim(),
                rhs.dim()
            )));
        }
        let matrix = self.matrix.mul(&rhs.matrix.map_sigma(f, self.twist), f);
        SemilinearMap::new(matrix, self.twist + rhs.twist)
    }
}

/// Rank, kernel and image of a semilinear map; bases are rows in reduced
/// echelon form.
#[derive(Debug, Clone)]
pub struct KernelImage {
    pub rank: usize,
    pub kernel: Matrix,
    pub image: Matrix,
}

pub fn kernel_image(a: &SemilinearMap, f: &FieldDescriptor) -> KernelImage {
    let image = a.matrix().column_space(f);
    let null = a.matrix().nullspace(f);
    let kernel = null.map_sigma(f, -a.twist());
    debug_assert_eq!(image.rows() + kernel.rows(), a.dim());
    KernelImage { rank: image.rows(), kernel, image }
}

/// Outcome of the BT₁ axiom checks. Serializes to JSON booleans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub dim: usize,
    pub ker_f_eq_im_v: bool,
    pub ker_v_eq_im_f: bool,
    pub fv_zero: bool,
    pub vf_zero: bool,
}

impl AxiomReport {
    pub fn is_bt1(&self) -> bool {
        self.ker_f_eq_im_v && self.ker_v_eq_im_f && self.fv_zero && self.vf_zero
    }
}

/// Checks `Ker F = Im V`, `Ker V = Im F` and `FV = VF = 0` over the given
/// field. Subspace equality is containment plus dimension.
pub fn verify_bt1_axioms(
    f_map: &SemilinearMap,
    v_map: &SemilinearMap,
    f: &FieldDescriptor,
) -> Result<AxiomReport, SemilinearError> {
    if f_map.dim() != v_map.dim() {
        return Err(SemilinearError::ShapeMismatch(format!(
            "F has dimension {}, V has dimension {}",
            f_map.dim(),
            v_map.dim()
        )));
    }
    if f_map.twist() != 1 || v_map.twist() != -1 {
        return Err(SemilinearError::TwistMismatch {
            f_twist: f_map.twist(),
            v_twist: v_map.twist(),
        });
    }
    let f_ki = kernel_image(f_map, f);
    let v_ki = kernel_image(v_map, f);
    Ok(AxiomReport {
        dim: f_map.dim(),
        ker_f_eq_im_v: subspace_eq(&f_ki.kernel, &v_ki.image, f),
        ker_v_eq_im_f: subspace_eq(&v_ki.kernel, &f_ki.image, f),
        fv_zero: f_map.compose(v_map, f)?.matrix().is_zero(),
        vf_zero: v_map.compose(f_map, f)?.matrix().is_zero(),
    })
}

/// Conjugates the pair (F, V) by an invertible matrix P:
/// `F' = P⁻¹·F·σ(P)`, `V' = P⁻¹·V·σ⁻¹(P)`. Axiom verdicts are invariant.
pub fn base_change(
    f_map: &SemilinearMap,
    v_map: &SemilinearMap,
    p_mat: &Matrix,
    f: &FieldDescriptor,
) -> Result<(SemilinearMap, SemilinearMap), SemilinearError> {
    if p_mat.rows() != f_map.dim() || p_mat.cols() != f_map.dim() {
        return Err(SemilinearError::ShapeMismatch(format!(
            "base change is {}x{}, maps have dimension {}",
            p_mat.rows(),
            p_mat.cols(),
            f_map.dim()
        )));
    }
    let p_inv = p_mat.inverse(f).ok_or(SemilinearError::Singular)?;
    let conjugate = |map: &SemilinearMap| -> Result<SemilinearMap, SemilinearError> {
        let twisted_p = p_mat.map_sigma(f, map.twist());
        SemilinearMap::new(p_inv.mul(map.matrix(), f).mul(&twisted_p, f), map.twist())
    };
    Ok((conjugate(f_map)?, conjugate(v_map)?))
}
