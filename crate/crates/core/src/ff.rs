//! Finite fields `F_{p^m}` presented as `F_p[x]/(poly)`.
//!
//! The defining polynomial is the least monic irreducible of degree `m`,
//! where polynomials are ordered by the integer `sum c_i p^i` of their
//! coefficient vector. This makes the choice deterministic and cheap to
//! reproduce in any other implementation.

use std::fmt;
use std::sync::Arc;

use crate::arith::{add_mod, is_prime, mul_mod, neg_mod, sub_mod};
use crate::error::{Error, Result};

/// Polynomials over `F_p`, low-to-high coefficients.
pub(crate) mod fp_poly {
    use crate::arith::{inv_mod, mul_mod, sub_mod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p).expect("field");
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = sub_mod(r[shift + j], mul_mod(c, bj, p), p);
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&acc, m, p)
    }
}

/// Immutable description of `F_{p^m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    m: usize,
    /// Monic, length `m + 1`, low-to-high.
    poly: Vec<u64>,
    order: u64,
}

impl FieldCtx {
    /// Builds `F_{p^m}` with the least monic irreducible polynomial of degree `m`.
    pub fn new(p: u64, m: usize) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::param(format!("{p} is not prime")));
        }
        if !(1..=16).contains(&m) {
            return Err(Error::param(format!("extension degree {m} outside 1..=16")));
        }
        let order = p
            .checked_pow(m as u32)
            .ok_or_else(|| Error::param(format!("{p}^{m} does not fit in 64 bits")))?;
        // Candidate `k` encodes the low coefficients as base-p digits.
        let mut k: u64 = 0;
        loop {
            let mut poly = Vec::with_capacity(m + 1);
            let mut rest = k;
            for _ in 0..m {
                poly.push(rest % p);
                rest /= p;
            }
            poly.push(1);
            if is_irreducible(&poly, p) {
                return Ok(Arc::new(FieldCtx { p, m, poly, order }));
            }
            k += 1;
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Number of elements `p^m`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn defining_poly(&self) -> &[u64] {
        &self.poly
    }

    pub(crate) fn zero_vec(&self) -> Vec<u64> {
        vec![0; self.m]
    }

    pub(crate) fn one_vec(&self) -> Vec<u64> {
        let mut v = self.zero_vec();
        v[0] = 1;
        v
    }

    pub(crate) fn gen_vec(&self) -> Vec<u64> {
        let mut v = self.zero_vec();
        if self.m == 1 {
            // F_p = F_p[x]/(x - c): the generator is the root c.
            v[0] = neg_mod(self.poly[0], self.p);
        } else {
            v[1] = 1;
        }
        v
    }

    pub(crate) fn add_v(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, self.p)).collect()
    }

    pub(crate) fn sub_v(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| sub_mod(x, y, self.p)).collect()
    }

    pub(crate) fn neg_v(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| neg_mod(x, self.p)).collect()
    }

    pub(crate) fn scale_v(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|&x| mul_mod(x, c, self.p)).collect()
    }

    pub(crate) fn mul_v(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let m = self.m;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, p), p);
            }
        }
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..m {
                prod[k - m + j] = sub_mod(prod[k - m + j], mul_mod(c, self.poly[j], p), p);
            }
        }
        prod.truncate(m);
        prod
    }

    pub(crate) fn pow_v(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one_vec();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_v(&acc, &b);
            }
            b = self.mul_v(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_v(&self, a: &[u64]) -> Result<Vec<u64>> {
        if a.iter().all(|&x| x == 0) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_v(a, self.order - 2))
    }

    /// `a^{p^k}` for `k` taken modulo `m`.
    pub(crate) fn frob_v(&self, a: &[u64], k: i64) -> Vec<u64> {
        let k = k.rem_euclid(self.m as i64);
        let mut out = a.to_vec();
        for _ in 0..k {
            out = self.pow_v(&out, self.p);
        }
        out
    }

    /// Integer `sum c_i p^i`; the order used for every "least" choice.
    pub(crate) fn ordinal(&self, a: &[u64]) -> u128 {
        a.iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    pub(crate) fn from_ordinal(&self, mut n: u128) -> Vec<u64> {
        let mut v = self.zero_vec();
        for c in v.iter_mut() {
            *c = (n % self.p as u128) as u64;
            n /= self.p as u128;
        }
        v
    }

    pub fn zero(self: &Arc<Self>) -> FFElem {
        FFElem { ctx: self.clone(), c: self.zero_vec() }
    }

    pub fn one(self: &Arc<Self>) -> FFElem {
        FFElem { ctx: self.clone(), c: self.one_vec() }
    }

    /// The class of `x` in `F_p[x]/(poly)`.
    pub fn generator(self: &Arc<Self>) -> FFElem {
        FFElem { ctx: self.clone(), c: self.gen_vec() }
    }

    pub fn from_int(self: &Arc<Self>, n: i128) -> FFElem {
        let mut c = self.zero_vec();
        c[0] = n.rem_euclid(self.p as i128) as u64;
        FFElem { ctx: self.clone(), c }
    }

    /// Element from low-to-high coefficients; entries are reduced mod p.
    pub fn elem(self: &Arc<Self>, coeffs: &[u64]) -> Result<FFElem> {
        if coeffs.len() > self.m {
            return Err(Error::param(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.m
            )));
        }
        let mut c = self.zero_vec();
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            *dst = src % self.p;
        }
        Ok(FFElem { ctx: self.clone(), c })
    }

    pub(crate) fn wrap(self: &Arc<Self>, c: Vec<u64>) -> FFElem {
        debug_assert_eq!(c.len(), self.m);
        FFElem { ctx: self.clone(), c }
    }

    /// All roots in this field of a polynomial with `F_p` coefficients,
    /// sorted by ordinal. Repeated roots are reported once.
    pub fn roots_of_prime_poly(self: &Arc<Self>, g: &[u64]) -> Vec<FFElem> {
        let g: Vec<Vec<u64>> = g.iter().map(|&c| self.scale_v(&self.one_vec(), c % self.p)).collect();
        let mut roots = self.roots_ext(&g);
        roots.sort_by_key(|r| self.ordinal(r));
        roots.dedup();
        roots.into_iter().map(|c| self.wrap(c)).collect()
    }

    /// Embedding of `small` into this field, sending the generator of `small`
    /// to the least root of its defining polynomial.
    pub fn embedding_from(self: &Arc<Self>, small: &Arc<FieldCtx>) -> Result<FieldEmbedding> {
        if small.p != self.p || !self.m.is_multiple_of(small.m) {
            return Err(Error::param(format!(
                "F_{}^{} does not embed in F_{}^{}",
                small.p, small.m, self.p, self.m
            )));
        }
        let roots = self.roots_of_prime_poly(&small.poly);
        let image = if small.m == 1 {
            self.scale_v(&self.one_vec(), small.gen_vec()[0])
        } else {
            roots
                .first()
                .ok_or_else(|| Error::internal("subfield polynomial has no root"))?
                .c
                .clone()
        };
        let mut columns = Vec::with_capacity(small.m);
        let mut pow = self.one_vec();
        for _ in 0..small.m {
            columns.push(pow.clone());
            pow = self.mul_v(&pow, &image);
        }
        Ok(FieldEmbedding { small: small.clone(), big: self.clone(), image, columns })
    }

    // Polynomials over this field: Vec of field vectors, low-to-high.

    fn ptrim(&self, mut a: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
        while a.last().is_some_and(|c| c.iter().all(|&x| x == 0)) {
            a.pop();
        }
        a
    }

    fn pmul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero_vec(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add_v(&out[i + j], &self.mul_v(x, y));
            }
        }
        self.ptrim(out)
    }

    fn prem(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let b = self.ptrim(b.to_vec());
        let mut r = self.ptrim(a.to_vec());
        let lead_inv = self.inv_v(b.last().expect("nonzero")).expect("nonzero lead");
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul_v(r.last().unwrap(), &lead_inv);
            for (j, bj) in b.iter().enumerate() {
                r[shift + j] = self.sub_v(&r[shift + j], &self.mul_v(&c, bj));
            }
            r = self.ptrim(r);
        }
        r
    }

    fn pgcd(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut a = self.ptrim(a.to_vec());
        let mut b = self.ptrim(b.to_vec());
        while !b.is_empty() {
            let r = self.prem(&a, &b);
            a = b;
            b = r;
        }
        // normalize to monic
        if let Some(lead) = a.last().cloned() {
            let inv = self.inv_v(&lead).expect("nonzero");
            a = a.iter().map(|c| self.mul_v(c, &inv)).collect();
        }
        a
    }

    fn ppowmod(&self, base: &[Vec<u64>], mut e: u64, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut acc = vec![self.one_vec()];
        let mut b = self.prem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.prem(&self.pmul(&acc, &b), m);
            }
            b = self.prem(&self.pmul(&b, &b), m);
            e >>= 1;
        }
        self.prem(&acc, m)
    }

    /// Roots of `g` (coefficients in this field) lying in this field.
    fn roots_ext(&self, g: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let g = self.ptrim(g.to_vec());
        if g.len() <= 1 {
            return Vec::new();
        }
        // Split part: gcd(g, x^Q - x), with x^Q computed by m successive p-th powers.
        let x = vec![self.zero_vec(), self.one_vec()];
        let mut xq = self.prem(&x, &g);
        for _ in 0..self.m {
            xq = self.ppowmod(&xq, self.p, &g);
        }
        let mut diff = xq;
        diff.resize(diff.len().max(2), self.zero_vec());
        diff[1] = self.sub_v(&diff[1], &self.one_vec());
        let h = self.pgcd(&g, &diff);
        let mut out = Vec::new();
        self.split_linear(h, &mut out);
        out
    }

    /// Cantor-Zassenhaus equal-degree splitting of a product of distinct
    /// monic linear factors.
    fn split_linear(&self, h: Vec<Vec<u64>>, out: &mut Vec<Vec<u64>>) {
        match h.len() {
            0 | 1 => {}
            2 => {
                let inv = self.inv_v(&h[1]).expect("monic");
                out.push(self.neg_v(&self.mul_v(&h[0], &inv)));
            }
            _ => {
                let mut n: u128 = 0;
                loop {
                    let c = self.from_ordinal(n);
                    n += 1;
                    let probe = if self.p == 2 {
                        // absolute trace of c*x
                        let cx = vec![self.zero_vec(), c];
                        let mut term = self.prem(&cx, &h);
                        let mut acc = term.clone();
                        for _ in 1..self.m {
                            term = self.prem(&self.pmul(&term, &term), &h);
                            acc = self.padd(&acc, &term);
                        }
                        acc
                    } else {
                        let base = vec![c, self.one_vec()];
                        let mut a = self.ppowmod(&base, (self.order - 1) / 2, &h);
                        if a.is_empty() {
                            a.push(self.zero_vec());
                        }
                        a[0] = self.sub_v(&a[0], &self.one_vec());
                        a
                    };
                    let r = self.pgcd(&h, &probe);
                    if r.len() > 1 && r.len() < h.len() {
                        let other = self.pquo(&h, &r);
                        self.split_linear(r, out);
                        self.split_linear(other, out);
                        return;
                    }
                }
            }
        }
    }

    fn padd(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = a.len().max(b.len());
        let z = self.zero_vec();
        let out = (0..n)
            .map(|i| self.add_v(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.ptrim(out)
    }

    fn pquo(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut r = self.ptrim(a.to_vec());
        let lead_inv = self.inv_v(b.last().unwrap()).unwrap();
        let mut q = vec![self.zero_vec(); r.len() + 1 - b.len()];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul_v(r.last().unwrap(), &lead_inv);
            for (j, bj) in b.iter().enumerate() {
                r[shift + j] = self.sub_v(&r[shift + j], &self.mul_v(&c, bj));
            }
            q[shift] = c;
            r = self.ptrim(r);
        }
        q
    }
}

/// Irreducibility over `F_p`: `x^{p^m} = x mod f` and `gcd(x^{p^k} - x, f) = 1` for `0 < k < m`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut xpk = x.clone();
    for k in 1..=m {
        xpk = fp_poly::powmod(&xpk, p, f, p);
        let mut diff = xpk.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = sub_mod(diff[1], 1, p);
        let diff = fp_poly::trim(diff);
        if k < m {
            let g = fp_poly::gcd(f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        } else {
            return diff.is_empty();
        }
    }
    unreachable!()
}

/// An `F_p`-linear field embedding `F_{p^f} -> F_{p^m}`.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    pub small: Arc<FieldCtx>,
    pub big: Arc<FieldCtx>,
    image: Vec<u64>,
    /// Images of `gen^a`, `a < f`.
    columns: Vec<Vec<u64>>,
}

impl FieldEmbedding {
    pub fn image_of_generator(&self) -> FFElem {
        self.big.wrap(self.image.clone())
    }

    pub(crate) fn apply_v(&self, a: &[u64]) -> Vec<u64> {
        let mut out = self.big.zero_vec();
        for (c, col) in a.iter().zip(&self.columns) {
            if *c != 0 {
                out = self.big.add_v(&out, &self.big.scale_v(col, *c));
            }
        }
        out
    }

    /// Column images as an `F_p` matrix, row-major `m x f`.
    pub(crate) fn matrix(&self) -> Vec<Vec<u64>> {
        let m = self.big.m;
        (0..m).map(|i| self.columns.iter().map(|col| col[i]).collect()).collect()
    }

    pub fn apply(&self, a: &FFElem) -> FFElem {
        self.big.wrap(self.apply_v(&a.c))
    }
}

/// An element of `F_{p^m}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FFElem {
    ctx: Arc<FieldCtx>,
    c: Vec<u64>,
}

impl FFElem {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn check(&self, other: &FFElem) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::param("field context mismatch"))
        }
    }

    pub fn try_add(&self, other: &FFElem) -> Result<FFElem> {
        self.check(other)?;
        Ok(self.ctx.wrap(self.ctx.add_v(&self.c, &other.c)))
    }

    pub fn try_sub(&self, other: &FFElem) -> Result<FFElem> {
        self.check(other)?;
        Ok(self.ctx.wrap(self.ctx.sub_v(&self.c, &other.c)))
    }

    pub fn try_mul(&self, other: &FFElem) -> Result<FFElem> {
        self.check(other)?;
        Ok(self.ctx.wrap(self.ctx.mul_v(&self.c, &other.c)))
    }

    pub fn inv(&self) -> Result<FFElem> {
        Ok(self.ctx.wrap(self.ctx.inv_v(&self.c)?))
    }

    pub fn pow(&self, e: u64) -> FFElem {
        self.ctx.wrap(self.ctx.pow_v(&self.c, e))
    }

    /// `x^{p^k}`, `k` read modulo the degree.
    pub fn frobenius(&self, k: i64) -> FFElem {
        self.ctx.wrap(self.ctx.frob_v(&self.c, k))
    }

    pub fn ordinal(&self) -> u128 {
        self.ctx.ordinal(&self.c)
    }
}

macro_rules! ff_binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&FFElem> for &FFElem {
            type Output = FFElem;
            fn $f(self, rhs: &FFElem) -> FFElem {
                self.$m(rhs).expect("field context mismatch")
            }
        }
        impl std::ops::$tr for FFElem {
            type Output = FFElem;
            fn $f(self, rhs: FFElem) -> FFElem {
                (&self).$m(&rhs).expect("field context mismatch")
            }
        }
    };
}

ff_binop!(Add, add, try_add);
ff_binop!(Sub, sub, try_sub);
ff_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        self.ctx.wrap(self.ctx.neg_v(&self.c))
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

/// Rank of a matrix over a finite field (rows of field elements).
pub fn rank(rows: &[Vec<FFElem>]) -> usize {
    let mut m: Vec<Vec<FFElem>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        let pivot_row: Vec<FFElem> = m[rank].iter().map(|x| x * &inv).collect();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    m[r][c] = &m[r][c] - &(&factor * &pivot_row[c]);
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// `p^{k}`-power map as an `F_p`-matrix acting on coefficient vectors (row-major).
pub(crate) fn frobenius_matrix(ctx: &FieldCtx, k: i64) -> Vec<Vec<u64>> {
    let m = ctx.m;
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        let mut e = ctx.zero_vec();
        e[j] = 1;
        cols.push(ctx.frob_v(&e, k));
    }
    (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Enumeration oracle: least monic polynomial with no root in `F_p`
    /// (valid for degrees 2 and 3 only).
    fn least_rootless(p: u64, m: usize) -> Vec<u64> {
        for k in 0..p.pow(m as u32) {
            let mut poly: Vec<u64> = (0..m).map(|i| (k / p.pow(i as u32)) % p).collect();
            poly.push(1);
            let has_root = (0..p).any(|x| {
                poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0
            });
            if !has_root {
                return poly;
            }
        }
        unreachable!()
    }

    #[test]
    fn defining_polynomials() {
        assert_eq!(FieldCtx::new(2, 1).unwrap().defining_poly(), &[0, 1]);
        assert_eq!(FieldCtx::new(3, 2).unwrap().defining_poly(), &[1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 3).unwrap().defining_poly(), &[1, 1, 0, 1]);
        for (p, m) in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 3)] {
            let ctx = FieldCtx::new(p, m).unwrap();
            assert_eq!(ctx.defining_poly(), least_rootless(p, m).as_slice(), "p={p} m={m}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldCtx::new(4, 2), Err(Error::Parameter(_))));
        assert!(matches!(FieldCtx::new(3, 0), Err(Error::Parameter(_))));
        assert!(matches!(FieldCtx::new(3, 17), Err(Error::Parameter(_))));
        assert!(matches!(FieldCtx::new(1 << 31 | 11, 3), Err(Error::Parameter(_))));
    }

    #[test]
    fn small_arithmetic() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert!((&f3.from_int(1) + &f3.from_int(2)).is_zero());
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.from_int(2).inv().unwrap(), f5.from_int(3));
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
        let f9 = FieldCtx::new(3, 2).unwrap();
        let th = f9.generator();
        assert_eq!(&th * &th, f9.from_int(2));
        assert_eq!(th.frobenius(1), -&th);
        assert_eq!(th.frobenius(2), th);
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert!(f3.one().try_add(&f2.one()).is_err());
    }

    #[test]
    fn sampled_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, m) in [(2, 4), (3, 3), (5, 2), (13, 2)] {
            let ctx = FieldCtx::new(p, m).unwrap();
            let rand_el = |rng: &mut ChaCha8Rng| {
                let c: Vec<u64> = (0..m).map(|_| rng.gen_range(0..p)).collect();
                ctx.elem(&c).unwrap()
            };
            for _ in 0..200 {
                let (a, b, c) = (rand_el(&mut rng), rand_el(&mut rng), rand_el(&mut rng));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                if !a.is_zero() {
                    assert_eq!(&a * &a.inv().unwrap(), ctx.one());
                    assert_eq!(a.pow(ctx.order() - 1), ctx.one());
                }
                assert_eq!((&a + &b).frobenius(1), &a.frobenius(1) + &b.frobenius(1));
                assert_eq!((&a * &b).frobenius(1), &a.frobenius(1) * &b.frobenius(1));
            }
            for j in 0..m {
                let mut e = vec![0; m];
                e[j] = 1;
                let x = ctx.elem(&e).unwrap();
                let mut y = x.clone();
                for _ in 0..m {
                    y = y.frobenius(1);
                }
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn roots_and_embeddings() {
        let big = FieldCtx::new(2, 4).unwrap();
        let small = FieldCtx::new(2, 2).unwrap();
        let emb = big.embedding_from(&small).unwrap();
        let g = emb.image_of_generator();
        // image satisfies x^2 + x + 1
        assert!((&(&g * &g) + &(&g + &big.one())).is_zero());
        let roots = big.roots_of_prime_poly(small.defining_poly());
        assert_eq!(roots.len(), 2);
        assert!(roots[0].ordinal() < roots[1].ordinal());
        // embedding is a ring map
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = small.elem(&[rng.gen_range(0..2), rng.gen_range(0..2)]).unwrap();
            let b = small.elem(&[rng.gen_range(0..2), rng.gen_range(0..2)]).unwrap();
            assert_eq!(emb.apply(&(&a * &b)), &emb.apply(&a) * &emb.apply(&b));
        }
        let f27 = FieldCtx::new(3, 3).unwrap();
        assert!(f27.embedding_from(&FieldCtx::new(3, 2).unwrap()).is_err());
        let f5_6 = FieldCtx::new(5, 6).unwrap();
        let f5_3 = FieldCtx::new(5, 3).unwrap();
        let e = f5_6.embedding_from(&f5_3).unwrap();
        let r = e.image_of_generator();
        let poly = f5_3.defining_poly();
        let val = poly.iter().rev().fold(f5_6.zero(), |acc, &c| &(&acc * &r) + &f5_6.from_int(c as i128));
        assert!(val.is_zero());
    }
}
