//! Finite fields GF(p^e) and polynomials over them.
//!
//! Elements are `u32` values `0..order` encoding coefficient vectors in
//! base `p`: the element `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is stored as
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. For prime order this is the usual
//! residue representation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;
/// Fields up to this order carry full addition and multiplication tables.
pub const TABLE_ORDER: u32 = 256;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `(p, e)` with `n = p^e`, or `None` if `n` is not a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Largest prime `<= n`, if any.
pub fn prev_prime(n: u64) -> Option<u64> {
    (2..=n).rev().find(|&p| is_prime(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Neg,
}

#[derive(Clone)]
pub struct FiniteField {
    order: u32,
    p: u32,
    degree: u32,
    /// Monic modulus, low degree first, length `degree + 1`.
    modulus: Vec<u32>,
    add_table: Vec<u32>,
    mul_table: Vec<u32>,
    inv_table: Vec<u32>,
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteField")
            .field("order", &self.order)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    pub fn new(order: u64) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        let (p, e) = prime_power(order).ok_or(Error::NotPrimePower(order))?;
        let p = p as u32;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, e as usize)
        };
        let mut field = FiniteField {
            order: order as u32,
            p,
            degree: e,
            modulus,
            add_table: Vec::new(),
            mul_table: Vec::new(),
            inv_table: Vec::new(),
        };
        if field.order <= TABLE_ORDER {
            field.build_tables();
        }
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.order as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_direct(a as u32, b as u32);
                mul[a * q + b] = self.mul_direct(a as u32, b as u32);
            }
        }
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field element without inverse") as u32;
        }
        self.add_table = add;
        self.mul_table = mul;
        self.inv_table = inv;
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.order
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.order {
            Ok(a)
        } else {
            Err(Error::InvalidElement { element: a, order: self.order })
        }
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0; self.degree as usize];
        for c in d.iter_mut() {
            *c = a % self.p;
            a /= self.p;
        }
        d
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_direct(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.degree == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let e = self.degree as usize;
        // reduce with the monic modulus, highest degree first
        for top in (e..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = top - e + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.encode(&digits)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.add_table.is_empty() {
            self.add_direct(a, b)
        } else {
            self.add_table[(a * self.order + b) as usize]
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.mul_table.is_empty() {
            self.mul_direct(a, b)
        } else {
            self.mul_table[(a * self.order + b) as usize]
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.degree == 1 {
            return (self.p - a) % self.p;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&c| (self.p - c) % self.p).collect();
        self.encode(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        self.check(a)?;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        if !self.inv_table.is_empty() {
            return Ok(self.inv_table[a as usize]);
        }
        // a^(order - 2) by square-and-multiply
        let mut result = 1;
        let mut base = a;
        let mut exp = self.order - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Ok(result)
    }

    /// Checked arithmetic entry point. `b` is required for binary operations.
    pub fn arith(&self, op: FieldOp, a: u32, b: Option<u32>) -> Result<u32> {
        self.check(a)?;
        let binary = |b: Option<u32>| -> Result<u32> {
            let b = b.ok_or_else(|| Error::BadParams(format!("{op:?} needs two operands")))?;
            self.check(b)
        };
        match op {
            FieldOp::Add => Ok(self.add(a, binary(b)?)),
            FieldOp::Mul => Ok(self.mul(a, binary(b)?)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
        }
    }
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p = p as u64;
    while r.len() > dm {
        let c = r.pop().unwrap();
        if c != 0 {
            let shift = r.len() - dm;
            for (i, &mi) in m[..dm].iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * mi as u64) % p;
            }
        }
    }
    trim(r.into_iter().map(|c| c as u32).collect())
}

/// Monic polynomial of the given degree whose lower coefficients encode
/// `index` in base `p` (constant term least significant).
fn monic_from_index(p: u32, degree: usize, mut index: u64) -> Vec<u32> {
    let mut v = vec![0; degree + 1];
    for c in v.iter_mut().take(degree) {
        *c = (index % p as u64) as u32;
        index /= p as u64;
    }
    v[degree] = 1;
    v
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let g = monic_from_index(p, d, idx);
            let r = poly_rem(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `e` over GF(p) with the smallest
/// base-`p` encoding of its non-leading coefficients.
pub fn least_irreducible(p: u32, e: usize) -> Vec<u32> {
    let count = (p as u64).pow(e as u32);
    (0..count)
        .map(|idx| monic_from_index(p, e, idx))
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial exists in every degree")
}

/// Polynomial over a finite field; `coeffs[i]` multiplies `x^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<u32>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<u32>) -> Self {
        Polynomial { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        Polynomial { coeffs: vec![0; len] }
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &FiniteField, x: u32) -> Result<u32> {
        field.check(x)?;
        for &c in &self.coeffs {
            field.check(c)?;
        }
        Ok(self.eval_unchecked(field, x))
    }

    #[inline]
    pub fn eval_unchecked(&self, field: &FiniteField, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }
}

/// The unique polynomial of degree `< k` through `k` points with distinct
/// abscissae, found by Gaussian elimination on the Vandermonde system.
pub fn interpolate(field: &FiniteField, points: &[(u32, u32)], k: usize) -> Result<Polynomial> {
    if points.len() != k {
        return Err(Error::WrongArity { expected: k, got: points.len() });
    }
    let mut seen = std::collections::HashSet::new();
    for &(x, y) in points {
        field.check(x)?;
        field.check(y)?;
        if !seen.insert(x) {
            return Err(Error::DuplicateAbscissa(x));
        }
    }
    // augmented rows [1, x, x^2, ..., x^{k-1} | y]
    let mut rows: Vec<Vec<u32>> = points
        .iter()
        .map(|&(x, y)| {
            let mut row = Vec::with_capacity(k + 1);
            let mut pow = 1;
            for _ in 0..k {
                row.push(pow);
                pow = field.mul(pow, x);
            }
            row.push(y);
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| rows[r][col] != 0)
            .expect("Vandermonde matrix with distinct nodes is invertible");
        rows.swap(col, pivot);
        let inv = field.inv(rows[col][col])?;
        for x in &mut rows[col][col..=k] {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && row[col] != 0 {
                let factor = row[col];
                for (x, &p) in row[col..=k].iter_mut().zip(&pivot_row[col..=k]) {
                    *x = field.sub(*x, field.mul(factor, p));
                }
            }
        }
    }
    Ok(Polynomial::new(rows.iter().map(|r| r[k]).collect()))
}
