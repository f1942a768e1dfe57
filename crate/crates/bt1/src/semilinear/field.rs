//! Exact arithmetic in GF(p^m).
//!
//! Elements are packed into a `u64` as `Σ c_i p^i` with base-p digits
//! `c_i`, so every value below `p^m` is a valid element and random
//! sampling is uniform over the field. The modulus is the first monic
//! irreducible of degree m in ascending order of its packed low
//! coefficients, found by trial division; this keeps field construction
//! deterministic without polynomial tables.

use crate::arith;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {m} out of range for p = {p} (need 1 <= m <= 8 and p^m < 2^63)")]
    DegreeTooLarge { p: u64, m: usize },
}

/// GF(p^m) together with precomputed Frobenius data.
#[derive(Debug, Clone)]
pub struct FieldDescriptor {
    p: u64,
    m: usize,
    /// Monic modulus, little-endian coefficients of length m+1.
    modulus: Vec<u64>,
    order: u64,
    /// Column i = coefficients of x^{ip} mod modulus: the matrix of σ.
    sigma_cols: Vec<Vec<u64>>,
    /// Inverse of the σ matrix over GF(p).
    sigma_inv_cols: Vec<Vec<u64>>,
    /// Full operation tables for small fields.
    tables: Option<SmallTables>,
}

/// Lookup tables used when the order is at most [`TABLE_LIMIT`]; the
/// elimination-heavy verifiers spend their time in mul and inv.
#[derive(Debug, Clone)]
struct SmallTables {
    add: Vec<u64>,
    mul: Vec<u64>,
    inv: Vec<u64>,
    frob: Vec<u64>,
    frob_inv: Vec<u64>,
}

const TABLE_LIMIT: u64 = 256;

/// Deterministically constructs GF(p^m).
pub fn field_make(p: u64, m: usize) -> Result<FieldDescriptor, FieldError> {
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if m < 1 || m > 8 {
        return Err(FieldError::DegreeTooLarge { p, m });
    }
    let order = arith::checked_pow(p, m as u32)
        .filter(|&o| o < (1u64 << 63))
        .ok_or(FieldError::DegreeTooLarge { p, m })?;

    let modulus = first_irreducible(p, m, order);
    let sigma_cols = sigma_columns(p, m, &modulus);
    let sigma_inv_cols = invert_gf_p(&sigma_cols, p);

    let mut field = FieldDescriptor { p, m, modulus, order, sigma_cols, sigma_inv_cols, tables: None };
    if order <= TABLE_LIMIT {
        let n = order as usize;
        let mut add = vec![0u64; n * n];
        let mut mul = vec![0u64; n * n];
        let mut inv = vec![0u64; n];
        let mut frob = vec![0u64; n];
        let mut frob_inv = vec![0u64; n];
        for a in 0..order {
            for b in 0..order {
                add[(a * order + b) as usize] = field.add(a, b);
                mul[(a * order + b) as usize] = field.mul(a, b);
            }
            if a != 0 {
                inv[a as usize] = field.inv(a);
            }
            frob[a as usize] = field.frobenius(a);
            frob_inv[a as usize] = field.frobenius_inv(a);
        }
        field.tables = Some(SmallTables { add, mul, inv, frob, frob_inv });
    }
    Ok(field)
}

impl FieldDescriptor {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of field elements, p^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Little-endian coefficients of the monic modulus (length m+1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// Digits of a packed element, little-endian, length m.
    pub fn unpack(&self, e: u64) -> Vec<u64> {
        debug_assert!(e < self.order);
        let mut digits = vec![0u64; self.m];
        let mut rest = e;
        for d in digits.iter_mut() {
            *d = rest % self.p;
            rest /= self.p;
        }
        digits
    }

    pub fn pack(&self, coeffs: &[u64]) -> u64 {
        debug_assert!(coeffs.len() <= self.m);
        let mut value = 0u64;
        for &c in coeffs.iter().rev() {
            debug_assert!(c < self.p);
            value = value * self.p + c;
        }
        value
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.add[(a * self.order + b) as usize];
        }
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.unpack(a), self.unpack(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.m == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = self.unpack(a);
        let neg: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
        self.pack(&neg)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.mul[(a * self.order + b) as usize];
        }
        if self.m == 1 {
            return arith::mod_mul(a, b, self.p);
        }
        let (da, db) = (self.unpack(a), self.unpack(b));
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.reduce(&mut prod);
        self.pack(&prod[..self.m])
    }

    /// Reduces a little-endian polynomial in place modulo the modulus.
    fn reduce(&self, poly: &mut Vec<u64>) {
        let m = self.m;
        while poly.len() > m {
            let deg = poly.len() - 1;
            let lead = poly[deg];
            if lead != 0 {
                // subtract lead * x^{deg-m} * modulus
                for i in 0..=m {
                    let idx = deg - m + i;
                    let sub = lead * self.modulus[i] % self.p;
                    poly[idx] = (poly[idx] + self.p - sub) % self.p;
                }
            }
            poly.pop();
        }
        poly.resize(m, 0);
    }

    /// Multiplicative inverse by extended Euclid over the polynomial ring
    /// GF(p)\[x\]. Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert_ne!(a, 0, "inverse of zero");
        if let Some(t) = &self.tables {
            return t.inv[a as usize];
        }
        if self.m == 1 {
            return mod_inv_prime(a % self.p, self.p);
        }
        // invariants: r0 = s0 * a (mod modulus), r1 = s1 * a (mod modulus)
        let mut r0 = self.modulus.clone();
        let mut r1 = self.unpack(a);
        trim(&mut r1);
        let mut s0: Vec<u64> = vec![0];
        let mut s1: Vec<u64> = vec![1];
        while poly_degree(&r1) > 0 || r1 != [0] {
            if r1.iter().all(|&c| c == 0) {
                unreachable!("gcd with irreducible modulus is a unit");
            }
            if poly_degree(&r1) == 0 {
                break;
            }
            let (q, rem) = poly_divmod(&r0, &r1, self.p);
            let s_next = poly_sub(&s0, &poly_mul(&q, &s1, self.p), self.p);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s_next;
        }
        // r1 is a nonzero constant c; inverse is s1 / c
        let c = r1[0];
        let c_inv = mod_inv_prime(c, self.p);
        let mut result: Vec<u64> = s1.iter().map(|&x| x * c_inv % self.p).collect();
        let mut as_vec = result.clone();
        self.reduce(&mut as_vec);
        result = as_vec;
        self.pack(&result[..self.m])
    }

    /// Frobenius x ↦ x^p, computed through the precomputed σ matrix.
    pub fn frobenius(&self, a: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.frob[a as usize];
        }
        if self.m == 1 {
            return a;
        }
        self.apply_cols(&self.sigma_cols, a)
    }

    pub fn frobenius_inv(&self, a: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.frob_inv[a as usize];
        }
        if self.m == 1 {
            return a;
        }
        self.apply_cols(&self.sigma_inv_cols, a)
    }

    /// σ^t for any integer t (σ has order m).
    pub fn sigma_pow(&self, a: u64, t: i64) -> u64 {
        let m = self.m as i64;
        let t = t.rem_euclid(m);
        let mut out = a;
        for _ in 0..t {
            out = self.frobenius(out);
        }
        out
    }

    fn apply_cols(&self, cols: &[Vec<u64>], a: u64) -> u64 {
        let digits = self.unpack(a);
        let mut out = vec![0u64; self.m];
        for (i, &c) in digits.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for r in 0..self.m {
                out[r] = (out[r] + c * cols[i][r]) % self.p;
            }
        }
        self.pack(&out)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        let mut base = a;
        let mut exp = e;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// First monic irreducible of degree m over GF(p), scanning candidates by
/// ascending packed value of the low coefficients.
fn first_irreducible(p: u64, m: usize, order: u64) -> Vec<u64> {
    for low in 0..order {
        let mut candidate = Vec::with_capacity(m + 1);
        let mut rest = low;
        for _ in 0..m {
            candidate.push(rest % p);
            rest /= p;
        }
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return candidate;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Trial division by every monic polynomial of degree 1..=m/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let m = poly.len() - 1;
    if m == 1 {
        return true;
    }
    for deg in 1..=m / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(deg + 1);
            let mut rest = low;
            for _ in 0..deg {
                divisor.push(rest % p);
                rest /= p;
            }
            divisor.push(1);
            let (_, rem) = poly_divmod(poly, &divisor, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn sigma_columns(p: u64, m: usize, modulus: &[u64]) -> Vec<Vec<u64>> {
    // x^p mod modulus by p doublings of degree
    let mut xp = vec![0u64; 2];
    xp[1] = 1; // the polynomial x
    let mut acc = vec![1u64]; // x^0
    for _ in 0..p {
        acc = poly_mul_mod(&acc, &xp, modulus, p);
    }
    // cols[i] = x^{ip} = acc^i
    let mut cols = Vec::with_capacity(m);
    let mut power = vec![1u64];
    for _ in 0..m {
        let mut col = power.clone();
        col.resize(m, 0);
        cols.push(col);
        power = poly_mul_mod(&power, &acc, modulus, p);
    }
    cols
}

/// Inverts an m×m matrix over GF(p) given as columns. Panics if singular
/// (the σ matrix never is).
fn invert_gf_p(cols: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let m = cols.len();
    // rows of [A | I]
    let mut aug: Vec<Vec<u64>> = (0..m)
        .map(|r| {
            let mut row: Vec<u64> = (0..m).map(|c| cols[c][r]).collect();
            row.extend((0..m).map(|c| u64::from(c == r)));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| aug[r][col] != 0).expect("sigma matrix is invertible");
        aug.swap(col, pivot);
        let inv = mod_inv_prime(aug[col][col], p);
        for x in aug[col].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m {
            if r != col && aug[r][col] != 0 {
                let factor = aug[r][col];
                for c in 0..2 * m {
                    let sub = factor * aug[col][c] % p;
                    aug[r][c] = (aug[r][c] + p - sub) % p;
                }
            }
        }
    }
    (0..m)
        .map(|c| (0..m).map(|r| aug[r][m + c]).collect())
        .collect()
}

fn mod_inv_prime(a: u64, p: u64) -> u64 {
    // Fermat: p is prime
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = arith::mod_mul(acc, base, p);
        }
        base = arith::mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

fn poly_degree(poly: &[u64]) -> usize {
    poly.iter().rposition(|&c| c != 0).unwrap_or(0)
}

fn trim(poly: &mut Vec<u64>) {
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y % p) % p;
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let prod = poly_mul(a, b, p);
    let (_, rem) = poly_divmod(&prod, modulus, p);
    rem
}

/// Division with remainder; the divisor need not be monic.
fn poly_divmod(num: &[u64], den: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem: Vec<u64> = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    let dd = poly_degree(&den);
    let lead_inv = mod_inv_prime(den[dd], p);
    if poly_degree(&rem) < dd || rem.iter().all(|&c| c == 0) {
        return (vec![0], rem);
    }
    let mut quot = vec![0u64; poly_degree(&rem) - dd + 1];
    while !rem.iter().all(|&c| c == 0) && poly_degree(&rem) >= dd {
        let dr = poly_degree(&rem);
        let coeff = rem[dr] * lead_inv % p;
        quot[dr - dd] = coeff;
        for i in 0..=dd {
            let sub = coeff * den[i] % p;
            rem[dr - dd + i] = (rem[dr - dd + i] + p - sub) % p;
        }
        trim(&mut rem);
        if dr == 0 {
            break;
        }
    }
    trim(&mut quot);
    (quot, rem)
}
