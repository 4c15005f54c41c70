//! Dense matrices over a truncated local ring.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::FFElem;
use crate::local_ring::{LocalRingCtx, RingElem, Valuation};

#[derive(Clone, PartialEq)]
pub struct RMat {
    ctx: Arc<LocalRingCtx>,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl RMat {
    pub fn zeros(ctx: &Arc<LocalRingCtx>, rows: usize, cols: usize) -> Self {
        RMat { ctx: ctx.clone(), rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &Arc<LocalRingCtx>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn scalar(ctx: &Arc<LocalRingCtx>, n: usize, c: &RingElem) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(ctx: &Arc<LocalRingCtx>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RingElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RMat { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn ctx(&self) -> &Arc<LocalRingCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn map(&self, f: impl Fn(&RingElem) -> RingElem) -> RMat {
        RMat { data: self.data.iter().map(f).collect(), ..self.clone() }
    }

    fn check_shape(&self, o: &RMat, rows: usize, cols: usize) -> Result<()> {
        if o.rows != rows || o.cols != cols {
            return Err(Error::param(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &RMat) -> Result<RMat> {
        self.check_shape(o, self.rows, self.cols)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(RMat { data, ..self.clone() })
    }

    pub fn try_sub(&self, o: &RMat) -> Result<RMat> {
        self.check_shape(o, self.rows, self.cols)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.try_sub(b)).collect::<Result<_>>()?;
        Ok(RMat { data, ..self.clone() })
    }

    pub fn try_mul(&self, o: &RMat) -> Result<RMat> {
        self.check_shape(o, self.cols, o.cols)?;
        let mut out = RMat::zeros(&self.ctx, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).try_add(&a.try_mul(o.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[RingElem]) -> Vec<RingElem> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(self.ctx.zero(), |acc, k| &acc + &(self.get(i, k) * &v[k])))
            .collect()
    }

    pub fn scale(&self, c: &RingElem) -> RMat {
        self.map(|x| x * c)
    }

    pub fn transpose(&self) -> RMat {
        RMat::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> RingElem {
        (0..self.rows.min(self.cols)).fold(self.ctx.zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Minimal valuation over all entries.
    pub fn ord(&self) -> Valuation {
        let n = self.ctx.precision() as i64;
        let m = self.data.iter().filter_map(|x| x.ord().finite()).min();
        m.map_or(Valuation::AtLeast(n), Valuation::Finite)
    }

    pub fn residue(&self) -> Vec<Vec<FFElem>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).residue()).collect()).collect()
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> RMat {
        RMat::from_fn(&self.ctx, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn column(&self, j: usize) -> Vec<RingElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Determinant, exact modulo `π^N`.
    ///
    /// Elimination pivots on an entry of minimal valuation; the digits lost in
    /// dividing by the pivot's `π`-power are multiplied back by entries of at
    /// least that valuation, so no precision is lost.
    pub fn det(&self) -> Result<RingElem> {
        if self.rows != self.cols {
            return Err(Error::param("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let ctx = self.ctx.clone();
        let mut a = self.clone();
        let mut det = ctx.one();
        for k in 0..n {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..n {
                for j in k..n {
                    if let Valuation::Finite(v) = a.get(i, j).ord() {
                        if best.is_none_or(|b| v < b.2) {
                            best = Some((i, j, v));
                        }
                    }
                }
            }
            let Some((pi, pj, v)) = best else {
                return Ok(ctx.zero());
            };
            if pi != k {
                a.swap_rows(pi, k);
                det = -det;
            }
            if pj != k {
                a.swap_cols(pj, k);
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det = &det * &pivot;
            let unit_inv = pivot.div_pi_pow(v as usize)?.inv()?;
            for i in k + 1..n {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let factor = &a.get(i, k).div_pi_pow(v as usize)? * &unit_inv;
                for j in k..n {
                    let nv = a.get(i, j) - &(&factor * a.get(k, j));
                    a.set(i, j, nv);
                }
            }
        }
        Ok(det)
    }

    /// Inverse of a matrix whose determinant is a unit.
    pub fn inverse(&self) -> Result<RMat> {
        if self.rows != self.cols {
            return Err(Error::param("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RMat::identity(&self.ctx, n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| a.get(r, col).is_unit())
                .ok_or(Error::NotInvertible { ord: 1 })?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let pinv = a.get(col, col).inv()?;
            for j in 0..n {
                a.set(col, j, a.get(col, j) * &pinv);
                inv.set(col, j, inv.get(col, j) * &pinv);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &(&factor * a.get(col, j)));
                    inv.set(r, j, inv.get(r, j) - &(&factor * inv.get(col, j)));
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }
}

impl fmt::Debug for RMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_expr()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Display for RMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_ring::Mode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Leibniz expansion; only used for small sizes.
    fn leibniz(m: &RMat) -> RingElem {
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = m.ctx().zero();
        permute(&mut perm, 0, &mut |p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let mut term = m.ctx().one();
            for (i, &pi) in p.iter().enumerate() {
                term = &term * m.get(i, pi);
            }
            total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
        });
        total
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn determinant_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mode in [Mode::Mixed, Mode::Equal] {
            let s = LocalRingCtx::base(3, 1, 5, mode).unwrap();
            let t = LocalRingCtx::unramified(&s, 2).unwrap();
            for _ in 0..60 {
                let n = rng.gen_range(1..=4);
                let m = RMat::from_fn(&t, n, n, |_, _| {
                    let k = rng.gen_range(0..4);
                    t.random(&mut rng).mul_pi_pow(k)
                });
                assert_eq!(m.det().unwrap(), leibniz(&m));
            }
        }
    }

    #[test]
    fn inverse_and_product() {
        let s = LocalRingCtx::base(5, 1, 4, Mode::Mixed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = loop {
            let m = RMat::from_fn(&s, 3, 3, |_, _| s.random(&mut rng));
            if m.det().unwrap().is_unit() {
                break m;
            }
        };
        let inv = m.inverse().unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), RMat::identity(&s, 3));
        let singular = RMat::scalar(&s, 2, &s.from_int(5));
        assert!(singular.inverse().is_err());
        assert_eq!(singular.det().unwrap(), s.from_int(25));
    }
}
