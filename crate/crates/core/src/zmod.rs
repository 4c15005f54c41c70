//! Dense matrices over `Z/p^e` (with `e = 1` covering `F_p`).

use crate::arith::{add_mod, inv_mod, mul_mod, neg_mod, sub_mod, val_p};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZMat {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    pub modulus: u64,
    pub data: Vec<u64>,
}

impl ZMat {
    pub fn zeros(rows: usize, cols: usize, p: u64, modulus: u64) -> Self {
        ZMat { rows, cols, p, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, p, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn from_columns(cols: &[Vec<u64>], rows: usize, p: u64, modulus: u64) -> Self {
        let mut m = Self::zeros(rows, cols.len(), p, modulus);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..rows {
                m.data[i * cols.len() + j] = col[i] % modulus;
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    /// Exponent `e` with `modulus = p^e`.
    pub fn exponent(&self) -> usize {
        val_p(self.modulus, self.p, 64)
    }

    pub fn mul(&self, other: &ZMat) -> ZMat {
        assert_eq!(self.cols, other.rows);
        let mut out = ZMat::zeros(self.rows, other.cols, self.p, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = add_mod(out.data[idx], mul_mod(a, other.get(k, j), self.modulus), self.modulus);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(0u64, |acc, (k, &x)| add_mod(acc, mul_mod(self.get(i, k), x, self.modulus), self.modulus))
            })
            .collect()
    }

    pub fn sub(&self, other: &ZMat) -> ZMat {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, self.modulus)).collect();
        ZMat { data, ..self.clone() }
    }

    pub fn select_rows(&self, rows: &[usize]) -> ZMat {
        let mut out = ZMat::zeros(rows.len(), self.cols, self.p, self.modulus);
        for (r, &src) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.data[r * self.cols + j] = self.get(src, j);
            }
        }
        out
    }

    /// Inverse of a square matrix whose determinant is a unit.
    pub fn inverse(&self) -> Option<ZMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let m = self.modulus;
        let mut a = self.clone();
        let mut inv = ZMat::identity(n, self.p, m);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_multiple_of(self.p))?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                    inv.data.swap(col * n + j, piv * n + j);
                }
            }
            let pinv = inv_mod(a.get(col, col), m)?;
            for j in 0..n {
                a.data[col * n + j] = mul_mod(a.data[col * n + j], pinv, m);
                inv.data[col * n + j] = mul_mod(inv.data[col * n + j], pinv, m);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = mul_mod(factor, a.get(col, j), m);
                    a.data[r * n + j] = sub_mod(a.data[r * n + j], t, m);
                    let t = mul_mod(factor, inv.get(col, j), m);
                    inv.data[r * n + j] = sub_mod(inv.data[r * n + j], t, m);
                }
            }
        }
        Some(inv)
    }

    /// Elementary divisors as valuations `0..=e`, where `e` stands for a zero divisor.
    /// One entry per `min(rows, cols)` diagonal position.
    pub fn elementary_divisors(&self) -> Vec<usize> {
        let e = self.exponent();
        let m = self.modulus;
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut out = Vec::new();
        for k in 0..rows.min(cols) {
            // full pivoting on minimal valuation
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    let v = val_p(a.get(i, j), self.p, e);
                    if v < e && best.is_none_or(|b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
            let Some((pi, pj, v)) = best else {
                out.extend(std::iter::repeat_n(e, rows.min(cols) - k));
                break;
            };
            for j in 0..cols {
                a.data.swap(k * cols + j, pi * cols + j);
            }
            for i in 0..rows {
                a.data.swap(i * cols + k, i * cols + pj);
            }
            let pk = self.p.pow(v as u32);
            let unit = a.get(k, k) / pk;
            let uinv = inv_mod(unit, m).expect("pivot unit part is prime to p");
            for i in k + 1..rows {
                let x = a.get(i, k);
                if x == 0 {
                    continue;
                }
                let factor = mul_mod(x / pk, uinv, m);
                for j in k..cols {
                    let t = mul_mod(factor, a.get(k, j), m);
                    a.data[i * cols + j] = sub_mod(a.data[i * cols + j], t, m);
                }
            }
            for j in k + 1..cols {
                let x = a.get(k, j);
                if x == 0 {
                    continue;
                }
                let factor = mul_mod(x / pk, uinv, m);
                for i in k..rows {
                    let t = mul_mod(factor, a.get(i, k), m);
                    a.data[i * cols + j] = sub_mod(a.data[i * cols + j], t, m);
                }
            }
            out.push(v);
        }
        out
    }

    /// Rank of the reduction modulo `p`.
    pub fn rank_mod_p(&self) -> usize {
        let reduced = ZMat {
            data: self.data.iter().map(|&x| x % self.p).collect(),
            modulus: self.p,
            ..self.clone()
        };
        reduced.elementary_divisors().iter().filter(|&&v| v == 0).count()
    }

    pub fn neg(&self) -> ZMat {
        ZMat { data: self.data.iter().map(|&x| neg_mod(x, self.modulus)).collect(), ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime_power() {
        let m = ZMat::from_columns(&[vec![2, 3], vec![1, 5]], 2, 3, 81);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ZMat::identity(2, 3, 81));
        let singular = ZMat::from_columns(&[vec![3, 0], vec![0, 1]], 2, 3, 81);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn divisors() {
        // diag(1, 3, 9, 0) scrambled by unimodular operations
        let d = ZMat::from_columns(&[vec![1, 0, 0, 0], vec![0, 3, 0, 0], vec![0, 0, 9, 0], vec![0, 0, 0, 0]], 4, 3, 81);
        let u = ZMat::from_columns(&[vec![1, 2, 0, 1], vec![0, 1, 5, 0], vec![0, 0, 1, 7], vec![0, 0, 0, 1]], 4, 3, 81);
        let v = ZMat::from_columns(&[vec![1, 0, 0, 0], vec![4, 1, 0, 0], vec![2, 8, 1, 0], vec![1, 1, 1, 1]], 4, 3, 81);
        let scrambled = u.mul(&d).mul(&v);
        let mut ed = scrambled.elementary_divisors();
        ed.sort();
        assert_eq!(ed, vec![0, 1, 2, 4]);
        assert_eq!(scrambled.rank_mod_p(), 1);
    }
}
