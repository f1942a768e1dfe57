//! Dense matrices over GF(p^m) with Gaussian elimination.
//!
//! Subspaces are carried around as matrices in reduced row echelon form
//! whose rows are basis vectors; equality of subspaces is tested by equal
//! dimension plus containment, never by comparing basis lists.

use super::field::FieldDescriptor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Matrix {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            assert_eq!(r.len(), n_cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n_rows, cols: n_cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix, f: &FieldDescriptor) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(r, c);
                    out.set(r, c, f.add(cur, f.mul(a, b)));
                }
            }
        }
        out
    }

    /// Entry-wise σ^t.
    pub fn map_sigma(&self, f: &FieldDescriptor, t: i64) -> Matrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = f.sigma_pow(*x, t);
        }
        out
    }

    /// Reduced row echelon form; returns the full-size reduced matrix and
    /// the pivot columns.
    pub fn rref(&self, f: &FieldDescriptor) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0);
            let Some(r0) = found else { continue };
            m.swap_rows(pivot_row, r0);
            let inv = f.inv(m.get(pivot_row, col));
            m.scale_row(pivot_row, inv, f);
            for r in 0..m.rows {
                if r != pivot_row && m.get(r, col) != 0 {
                    let factor = m.get(r, col);
                    m.subtract_scaled_row(r, pivot_row, factor, f);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FieldDescriptor) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the (right) null space `{x : Ax = 0}` as rows, in reduced
    /// echelon form.
    pub fn nullspace(&self, f: &FieldDescriptor) -> Matrix {
        let (rref, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rref.get(row, fc));
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return Matrix::zero(0, self.cols);
        }
        let (reduced, pivs) = Matrix::from_rows(basis).rref(f);
        take_rows(&reduced, pivs.len())
    }

    /// Basis of the column space as rows (reduced echelon form of the
    /// transpose).
    pub fn column_space(&self, f: &FieldDescriptor) -> Matrix {
        let (reduced, pivots) = self.transpose().rref(f);
        take_rows(&reduced, pivots.len())
    }

    pub fn inverse(&self, f: &FieldDescriptor) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (reduced, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, reduced.get(r, n + c));
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: u64, f: &FieldDescriptor) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, f.mul(v, s));
        }
    }

    fn subtract_scaled_row(&mut self, target: usize, source: usize, s: u64, f: &FieldDescriptor) {
        for c in 0..self.cols {
            let v = self.get(target, c);
            let sub = f.mul(s, self.get(source, c));
            self.set(target, c, f.sub(v, sub));
        }
    }
}

fn take_rows(m: &Matrix, count: usize) -> Matrix {
    let rows: Vec<Vec<u64>> = (0..count).map(|r| m.row(r).to_vec()).collect();
    if rows.is_empty() {
        Matrix::zero(0, m.cols())
    } else {
        Matrix::from_rows(rows)
    }
}

/// Reduces `v` against an echelonized basis; the residual is zero iff the
/// vector lies in the spanned subspace.
pub fn reduce_against(space: &Matrix, v: &[u64], f: &FieldDescriptor) -> Vec<u64> {
    assert_eq!(space.cols(), v.len());
    let mut residual = v.to_vec();
    for r in 0..space.rows() {
        let pivot_col = match space.row(r).iter().position(|&x| x != 0) {
            Some(c) => c,
            None => continue,
        };
        let coeff = residual[pivot_col];
        if coeff == 0 {
            continue;
        }
        // basis rows have unit pivots
        for c in 0..residual.len() {
            residual[c] = f.sub(residual[c], f.mul(coeff, space.row(r)[c]));
        }
    }
    residual
}

pub fn subspace_contains(space: &Matrix, v: &[u64], f: &FieldDescriptor) -> bool {
    reduce_against(space, v, f).iter().all(|&x| x == 0)
}

/// Subspace equality: equal dimension plus one-sided containment.
pub fn subspace_eq(a: &Matrix, b: &Matrix, f: &FieldDescriptor) -> bool {
    if a.rows() != b.rows() {
        return false;
    }
    (0..a.rows()).all(|r| subspace_contains(b, a.row(r), f))
}
