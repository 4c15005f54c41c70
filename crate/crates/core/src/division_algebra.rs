//! The cyclic division algebra `D` of index `d` over `K` and its maximal order
//! `A = T^{σ_r}{x}/(x^d − π_K)`, with `π_D` the class of `x`.
//!
//! [`OrderElem`] is an element of `A/π_K^N A`, where arithmetic is exact.
//! [`DElem`] is an element of `D`: a power of `π_K` times a canonical element of
//! `A`, together with the relative precision to which its coefficients are known.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::local_ring::{LocalRingCtx, RingElem, Valuation};
use crate::rmat::RMat;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub struct AlgebraCtx {
    s: Arc<LocalRingCtx>,
    t: Arc<LocalRingCtx>,
    d: usize,
    r: i64,
}

impl fmt::Debug for AlgebraCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraCtx(d={}, r={}, {:?})", self.d, self.r, self.t)
    }
}

impl PartialEq for AlgebraCtx {
    fn eq(&self, o: &Self) -> bool {
        self.r == o.r && *self.t == *o.t
    }
}

impl AlgebraCtx {
    /// `t` must be an unramified extension (built by [`LocalRingCtx::unramified`]).
    pub fn new(t: &Arc<LocalRingCtx>, r: i64) -> Result<Arc<Self>> {
        let s = t
            .base_ring()
            .cloned()
            .ok_or_else(|| Error::param("the algebra is built over an unramified extension T/S"))?;
        let d = t.d();
        let r = r.rem_euclid(d as i64);
        if gcd(r, d as i64) != 1 {
            return Err(Error::param(format!("twist r = {r} is not prime to d = {d}")));
        }
        Ok(Arc::new(AlgebraCtx { s, t: t.clone(), d, r }))
    }

    pub fn base(&self) -> &Arc<LocalRingCtx> {
        &self.s
    }

    pub fn t(&self) -> &Arc<LocalRingCtx> {
        &self.t
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Twist exponent, normalized to `0..d`.
    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn precision(&self) -> usize {
        self.t.precision()
    }

    /// `σ_r^i = σ^{r·i}`.
    pub fn twist(&self, z: &RingElem, i: i64) -> RingElem {
        z.frobenius(self.r * i)
    }

    /// Twisted product of coefficient vectors: `Σ y_i σ_r^i(z_j) x^{i+j}`, `x^d = π_K`.
    fn mul_coeffs(&self, y: &[RingElem], z: &[RingElem]) -> Vec<RingElem> {
        let d = self.d;
        let mut low = vec![self.t.zero(); d];
        let mut high = vec![self.t.zero(); d];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, zj) in z.iter().enumerate() {
                if zj.is_zero() {
                    continue;
                }
                let term = yi * &self.twist(zj, i as i64);
                let k = i + j;
                if k < d {
                    low[k] = &low[k] + &term;
                } else {
                    high[k - d] = &high[k - d] + &term;
                }
            }
        }
        low.iter().zip(&high).map(|(l, h)| l + &h.mul_pi_pow(1)).collect()
    }
}

/// An element of `A/π_K^N A`, written `Σ y_i π_D^i` with `y_i ∈ T`.
#[derive(Clone)]
pub struct OrderElem {
    ctx: Arc<AlgebraCtx>,
    c: Vec<RingElem>,
}

impl PartialEq for OrderElem {
    fn eq(&self, o: &Self) -> bool {
        *self.ctx == *o.ctx && self.c == o.c
    }
}

impl OrderElem {
    pub fn new(ctx: &Arc<AlgebraCtx>, coeffs: Vec<RingElem>) -> Result<Self> {
        if coeffs.len() != ctx.d || coeffs.iter().any(|c| **c.ctx() != *ctx.t) {
            return Err(Error::param("order elements need d coefficients in T"));
        }
        Ok(OrderElem { ctx: ctx.clone(), c: coeffs })
    }

    pub fn zero(ctx: &Arc<AlgebraCtx>) -> Self {
        OrderElem { ctx: ctx.clone(), c: vec![ctx.t.zero(); ctx.d] }
    }

    pub fn from_t(ctx: &Arc<AlgebraCtx>, t: &RingElem) -> Self {
        let mut e = Self::zero(ctx);
        e.c[0] = t.clone();
        e
    }

    pub fn one(ctx: &Arc<AlgebraCtx>) -> Self {
        Self::from_t(ctx, &ctx.t.one())
    }

    /// `π_D`; for `d = 1` this is `π_K`.
    pub fn pi_d(ctx: &Arc<AlgebraCtx>) -> Self {
        if ctx.d == 1 {
            return Self::from_t(ctx, &ctx.t.uniformizer());
        }
        let mut e = Self::zero(ctx);
        e.c[1] = ctx.t.one();
        e
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<AlgebraCtx>, rng: &mut R) -> Self {
        OrderElem { ctx: ctx.clone(), c: (0..ctx.d).map(|_| ctx.t.random(rng)).collect() }
    }

    pub fn ctx(&self) -> &Arc<AlgebraCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(RingElem::is_zero)
    }

    fn check(&self, o: &OrderElem) -> Result<()> {
        if *self.ctx != *o.ctx {
            return Err(Error::param("algebra mismatch"));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &OrderElem) -> Result<OrderElem> {
        self.check(o)?;
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect();
        Ok(OrderElem { ctx: self.ctx.clone(), c })
    }

    pub fn try_sub(&self, o: &OrderElem) -> Result<OrderElem> {
        self.check(o)?;
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect();
        Ok(OrderElem { ctx: self.ctx.clone(), c })
    }

    pub fn try_mul(&self, o: &OrderElem) -> Result<OrderElem> {
        self.check(o)?;
        Ok(OrderElem { ctx: self.ctx.clone(), c: self.ctx.mul_coeffs(&self.c, &o.c) })
    }

    pub fn neg(&self) -> OrderElem {
        OrderElem { ctx: self.ctx.clone(), c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn pow(&self, e: u64) -> OrderElem {
        (0..e).fold(Self::one(&self.ctx), |acc, _| &acc * self)
    }

    pub fn mul_pi_k(&self, k: usize) -> OrderElem {
        OrderElem { ctx: self.ctx.clone(), c: self.c.iter().map(|x| x.mul_pi_pow(k)).collect() }
    }

    /// `ord_D = min_i (d·ord(y_i) + i)`, normalized by `ord_D(π_D) = 1`.
    pub fn ord(&self) -> Valuation {
        let d = self.ctx.d as i64;
        let v = self
            .c
            .iter()
            .enumerate()
            .filter_map(|(i, y)| y.ord().finite().map(|o| d * o + i as i64))
            .min();
        v.map_or(Valuation::AtLeast(d * self.ctx.precision() as i64), Valuation::Finite)
    }

    /// Matrix of `l(a ⊗ t)` acting on `D` as a right `T`-module in the basis `π_D^s`.
    pub fn embed(&self, t: Option<&RingElem>) -> RMat {
        let ctx = &self.ctx;
        let d = ctx.d;
        let tt = ctx.t.clone();
        RMat::from_fn(&tt, d, d, |j, s| {
            let i = (j + d - s) % d;
            let mut e = ctx.twist(&self.c[i], -(j as i64)).mul_pi_pow((i + s) / d);
            if let Some(t) = t {
                e = &e * t;
            }
            e
        })
    }

    fn descend(&self, x: &RingElem, what: &str) -> Result<RingElem> {
        if x.frobenius(1) != *x {
            return Err(Error::internal(format!("{what} is not Galois invariant")));
        }
        self.ctx.t.coerce_to_base(x).map_err(|_| Error::internal(format!("{what} does not descend to S")))
    }

    pub fn trd(&self) -> Result<RingElem> {
        self.descend(&self.embed(None).trace(), "reduced trace")
    }

    pub fn nrd(&self) -> Result<RingElem> {
        self.descend(&self.embed(None).det()?, "reduced norm")
    }

    /// Left multiplication on `A` as a free `S`-module of rank `d²`, basis `θ^k π_D^j`
    /// (column `j·d + k`).
    pub fn full_matrix(&self) -> RMat {
        let ctx = &self.ctx;
        let (d, s) = (ctx.d, &ctx.s);
        let theta = ctx.t.theta();
        let mut cols: Vec<Vec<RingElem>> = Vec::with_capacity(d * d);
        for j in 0..d {
            let xj = OrderElem::pi_d_power(ctx, j);
            for k in 0..d {
                let basis = &OrderElem::from_t(ctx, &theta.pow(k as u64)) * &xj;
                let image = self * &basis;
                let mut col = Vec::with_capacity(d * d);
                for y in &image.c {
                    col.extend(ctx.t.base_coords(y));
                }
                cols.push(col);
            }
        }
        RMat::from_fn(s, d * d, d * d, |i, j| cols[j][i].clone())
    }

    /// `(Tr_{D/K}, N_{D/K})` from the `d² × d²` matrix over `S`.
    pub fn full_trace_norm(&self) -> Result<(RingElem, RingElem)> {
        let m = self.full_matrix();
        Ok((m.trace(), m.det()?))
    }

    /// `π_D^j` for `0 <= j < d` (for `d = 1` only `j = 0`).
    pub fn pi_d_power(ctx: &Arc<AlgebraCtx>, j: usize) -> Self {
        let mut e = Self::zero(ctx);
        if j < ctx.d {
            e.c[j] = ctx.t.one();
            e
        } else {
            Self::pi_d(ctx).pow(j as u64)
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.c.iter().map(RingElem::to_json).collect())
    }
}

macro_rules! order_binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&OrderElem> for &OrderElem {
            type Output = OrderElem;
            fn $f(self, rhs: &OrderElem) -> OrderElem {
                self.$m(rhs).expect("algebra mismatch")
            }
        }
    };
}

order_binop!(Add, add, try_add);
order_binop!(Sub, sub, try_sub);
order_binop!(Mul, mul, try_mul);

impl fmt::Debug for OrderElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_terms(&self.c, self.ctx.precision()))
    }
}

fn format_terms(c: &[RingElem], prec: usize) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, y)| !y.truncate(prec).is_zero())
        .map(|(i, y)| {
            let body = y.to_expr_at(prec);
            match i {
                0 => body,
                _ => {
                    let x = if i == 1 { "x".to_string() } else { format!("x^{i}") };
                    if body == "1" {
                        x
                    } else if body == "-1" {
                        format!("-{x}")
                    } else {
                        format!("({body})*{x}")
                    }
                }
            }
        })
        .collect();
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        match (k, t.strip_prefix('-')) {
            (0, _) => out.push_str(t),
            (_, Some(rest)) if !rest.contains(' ') => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            _ => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// An element of `K` as `π_K^shift · value`, with `value ∈ S` known modulo `π_K^prec`.
#[derive(Clone, PartialEq)]
pub struct KElem {
    pub shift: i64,
    pub value: RingElem,
    pub prec: usize,
}

impl KElem {
    pub fn ord(&self) -> Valuation {
        match self.value.truncate(self.prec).ord() {
            Valuation::Finite(v) => Valuation::Finite(self.shift + v),
            Valuation::AtLeast(_) => Valuation::AtLeast(self.shift + self.prec as i64),
        }
    }

    /// Agreement as elements of `K` to the precision both sides carry.
    pub fn agrees_with(&self, o: &KElem) -> bool {
        let m = self.shift.min(o.shift);
        let lift = |k: &KElem| k.value.mul_pi_pow((k.shift - m) as usize);
        let abs = (self.shift + self.prec as i64).min(o.shift + o.prec as i64);
        let rel = (abs - m).clamp(0, self.value.ctx().precision() as i64) as usize;
        (lift(self) - lift(o)).truncate(rel).is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({ "shift": self.shift, "value": self.value.to_json(), "prec": self.prec })
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value.to_expr_at(self.prec);
        match self.shift {
            0 => write!(f, "{v}"),
            s => write!(f, "pK^{s} * ({v})"),
        }
    }
}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [prec {}]", self.prec)
    }
}

/// An element `π_K^shift · Σ y_i π_D^i` of `D`.
///
/// Canonical form: the `y_i` are reduced modulo `π_K^prec` and, unless the element
/// vanishes at that precision, some `y_i` is a unit. Zero is stored with
/// `prec = 0` and `shift` equal to the known lower bound of its `π_K`-valuation.
#[derive(Clone)]
pub struct DElem {
    ctx: Arc<AlgebraCtx>,
    shift: i64,
    c: Vec<RingElem>,
    prec: usize,
}

impl DElem {
    fn normalize(ctx: &Arc<AlgebraCtx>, shift: i64, c: Vec<RingElem>, prec: usize) -> DElem {
        let prec = prec.min(ctx.precision());
        let c: Vec<RingElem> = c.iter().map(|y| y.truncate(prec)).collect();
        match c.iter().filter_map(|y| y.ord().finite()).min() {
            None => DElem { ctx: ctx.clone(), shift: shift + prec as i64, c, prec: 0 },
            Some(k) => {
                let k = k as usize;
                let c = c.iter().map(|y| y.div_pi_pow(k).expect("content divides")).collect();
                DElem { ctx: ctx.clone(), shift: shift + k as i64, c, prec: prec - k }
            }
        }
    }

    /// The element `π_K^shift · a`, with `a` known exactly in `A/π_K^N A`.
    pub fn from_order(a: &OrderElem, shift: i64) -> DElem {
        Self::normalize(&a.ctx, shift, a.c.clone(), a.ctx.precision())
    }

    pub fn from_t(ctx: &Arc<AlgebraCtx>, t: &RingElem) -> DElem {
        Self::from_order(&OrderElem::from_t(ctx, t), 0)
    }

    pub fn one(ctx: &Arc<AlgebraCtx>) -> DElem {
        Self::from_order(&OrderElem::one(ctx), 0)
    }

    pub fn pi_d(ctx: &Arc<AlgebraCtx>) -> DElem {
        Self::from_order(&OrderElem::pi_d(ctx), 0)
    }

    pub fn pi_k(ctx: &Arc<AlgebraCtx>) -> DElem {
        Self::from_order(&OrderElem::one(ctx), 1)
    }

    pub fn ctx(&self) -> &Arc<AlgebraCtx> {
        &self.ctx
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.c
    }

    /// Relative precision of the coefficients.
    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    /// The order element `π_K^shift · Σ y_i π_D^i`, if it lies in `A`.
    pub fn to_order(&self) -> Option<OrderElem> {
        (self.shift >= 0).then(|| OrderElem {
            ctx: self.ctx.clone(),
            c: self.c.iter().map(|y| y.mul_pi_pow(self.shift as usize)).collect(),
        })
    }

    fn check(&self, o: &DElem) -> Result<()> {
        if *self.ctx != *o.ctx {
            return Err(Error::param("algebra mismatch"));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &DElem) -> Result<DElem> {
        self.check(o)?;
        let m = self.shift.min(o.shift);
        let abs = (self.shift + self.prec as i64).min(o.shift + o.prec as i64);
        if abs <= m {
            return Ok(DElem::normalize(&self.ctx, abs, vec![self.ctx.t.zero(); self.ctx.d], 0));
        }
        let n = self.ctx.precision() as i64;
        let lift = |e: &DElem| -> Vec<RingElem> {
            let k = (e.shift - m).min(n) as usize;
            e.c.iter().map(|y| y.mul_pi_pow(k)).collect()
        };
        let c = lift(self).iter().zip(lift(o)).map(|(a, b)| a + &b).collect();
        Ok(DElem::normalize(&self.ctx, m, c, (abs - m) as usize))
    }

    pub fn neg(&self) -> DElem {
        DElem { c: self.c.iter().map(|y| -y).collect(), ..self.clone() }
    }

    pub fn try_sub(&self, o: &DElem) -> Result<DElem> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &DElem) -> Result<DElem> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            // a vanishing factor bounds the product below by the other's valuation
            let lo = |e: &DElem| e.shift;
            let abs = match (self.is_zero(), o.is_zero()) {
                (true, true) => self.shift + o.shift,
                (true, false) => self.shift + lo(o),
                _ => lo(self) + o.shift,
            };
            return Ok(DElem::normalize(&self.ctx, abs, vec![self.ctx.t.zero(); self.ctx.d], 0));
        }
        let c = self.ctx.mul_coeffs(&self.c, &o.c);
        Ok(DElem::normalize(&self.ctx, self.shift + o.shift, c, self.prec.min(o.prec)))
    }

    /// `ord_D`, with `ord_D(π_D) = 1` and `ord_D(π_K) = d`.
    pub fn ord(&self) -> Valuation {
        let d = self.ctx.d as i64;
        if self.is_zero() {
            return Valuation::AtLeast(d * self.shift);
        }
        let i0 = self.c.iter().position(RingElem::is_unit).expect("canonical form has a unit coefficient");
        Valuation::Finite(d * self.shift + i0 as i64)
    }

    /// Inverse via the unit `π_D^{-v} a`, whose inverse is found by Newton iteration in `A`.
    pub fn inv(&self) -> Result<DElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ctx = &self.ctx;
        let d = ctx.d;
        let i0 = self.c.iter().position(RingElem::is_unit).expect("canonical form has a unit coefficient");
        // u = π_K^{-shift} · a · π_D^{-i0}
        let mut u = vec![ctx.t.zero(); d];
        for (i, y) in self.c.iter().enumerate() {
            if i >= i0 {
                u[i - i0] = y.clone();
            } else {
                u[i + d - i0] = y.div_pi_pow(1)?;
            }
        }
        let prec = if i0 > 0 { self.prec - 1 } else { self.prec };
        if prec == 0 {
            return Err(Error::Precision(format!(
                "inverting an element known to relative precision {} leaves nothing",
                self.prec
            )));
        }
        let u = OrderElem { ctx: ctx.clone(), c: u };
        let one = OrderElem::one(ctx);
        let two = OrderElem::from_t(ctx, &ctx.t.from_int(2));
        let mut b = OrderElem::from_t(ctx, &u.c[0].inv()?);
        let target = d * ctx.precision();
        let steps = (usize::BITS - target.leading_zeros()) as usize + 1;
        for _ in 0..steps {
            b = &b * &(&two - &(&u * &b));
        }
        if &u * &b != one {
            return Err(Error::internal("Newton inversion in the order did not converge"));
        }
        let (shift, b) = if i0 > 0 {
            (-self.shift - 1, &OrderElem::pi_d_power(ctx, d - i0) * &b)
        } else {
            (-self.shift, b)
        };
        Ok(DElem::normalize(ctx, shift, b.c, prec))
    }

    pub fn pow(&self, e: i64) -> Result<DElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = DElem::one(&self.ctx);
        for _ in 0..e.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// `π · a · π^{-1}`.
    pub fn conjugate_by(&self, pi: &DElem) -> Result<DElem> {
        pi.try_mul(self)?.try_mul(&pi.inv()?)
    }

    /// Agreement to the precision both sides carry.
    pub fn agrees_with(&self, o: &DElem) -> bool {
        self.try_sub(o).is_ok_and(|z| z.is_zero())
    }

    /// Embedding matrix as `(shift, M)` meaning `π_K^shift · M`.
    pub fn embed(&self, t: Option<&RingElem>) -> (i64, RMat) {
        let a = OrderElem { ctx: self.ctx.clone(), c: self.c.clone() };
        (self.shift, a.embed(t))
    }

    /// Reduced trace and reduced norm.
    pub fn trd_nrd(&self) -> Result<(KElem, KElem)> {
        let a = OrderElem { ctx: self.ctx.clone(), c: self.c.clone() };
        let d = self.ctx.d as i64;
        let trd = a.trd()?.truncate(self.prec);
        let nrd = a.nrd()?.truncate(self.prec);
        Ok((
            KElem { shift: self.shift, value: trd, prec: self.prec },
            KElem { shift: d * self.shift, value: nrd, prec: self.prec },
        ))
    }

    /// Trace and norm of left multiplication on `D` as a `K`-vector space.
    pub fn full_trace_norm(&self) -> Result<(KElem, KElem)> {
        let a = OrderElem { ctx: self.ctx.clone(), c: self.c.clone() };
        let d = self.ctx.d as i64;
        let (tr, n) = a.full_trace_norm()?;
        Ok((
            KElem { shift: self.shift, value: tr.truncate(self.prec), prec: self.prec },
            KElem { shift: d * d * self.shift, value: n.truncate(self.prec), prec: self.prec },
        ))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "shift": self.shift,
            "coeffs": self.c.iter().map(RingElem::to_json).collect::<Vec<_>>(),
            "prec": self.prec,
        })
    }

    pub fn to_expr(&self) -> String {
        if self.is_zero() {
            return format!("O(pK^{})", self.shift);
        }
        let body = format_terms(&self.c, self.prec);
        match self.shift {
            0 => body,
            s => format!("pK^{s} * ({body})"),
        }
    }
}

impl fmt::Debug for DElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [prec {}]", self.to_expr(), self.prec)
    }
}

impl fmt::Display for DElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_ring::Mode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn algebra(p: u64, d: usize, r: i64, n: usize, mode: Mode) -> Arc<AlgebraCtx> {
        let s = LocalRingCtx::base(p, 1, n, mode).unwrap();
        let t = LocalRingCtx::unramified(&s, d).unwrap();
        AlgebraCtx::new(&t, r).unwrap()
    }

    #[test]
    fn rejects_non_coprime_twist() {
        let s = LocalRingCtx::base(3, 1, 4, Mode::Mixed).unwrap();
        let t = LocalRingCtx::unramified(&s, 4).unwrap();
        assert!(matches!(AlgebraCtx::new(&t, 2), Err(Error::Parameter(_))));
        assert!(AlgebraCtx::new(&t, 3).is_ok());
        assert!(AlgebraCtx::new(&s, 1).is_err());
    }

    #[test]
    fn quaternion_type_examples() {
        let a = algebra(3, 2, 1, 4, Mode::Mixed);
        let t = a.t().clone();
        let x = OrderElem::pi_d(&a);
        let three = OrderElem::from_t(&a, &t.from_int(3));
        assert_eq!(x.pow(2), three);
        let prod = &(&three + &x) * &(&three - &x);
        assert_eq!(prod, OrderElem::from_t(&a, &t.from_int(6)));
        let th = OrderElem::from_t(&a, &t.theta());
        assert_eq!(&x * &th, &OrderElem::from_t(&a, &t.theta().frobenius(1)) * &x);
        let m = (&three + &x).embed(None);
        let expect = [[3, 3], [1, 3]];
        for (j, row) in expect.iter().enumerate() {
            for (s, &v) in row.iter().enumerate() {
                assert_eq!(*m.get(j, s), t.from_int(v));
            }
        }
        let s = a.base().clone();
        assert_eq!((&three + &x).trd().unwrap(), s.from_int(6));
        assert_eq!((&three + &x).nrd().unwrap(), s.from_int(6));
        assert_eq!(x.nrd().unwrap(), s.from_int(-3));
        assert_eq!(x.trd().unwrap(), s.zero());
        assert_eq!((&three + &x).ord(), Valuation::Finite(1));
        let (tr, n) = x.full_trace_norm().unwrap();
        assert_eq!((tr, n), (s.zero(), s.from_int(9)));
    }

    #[test]
    fn pi_d_matrix_shape() {
        for (d, r) in [(2, 1), (3, 1), (3, 2), (4, 3)] {
            let a = algebra(5, d, r, 4, Mode::Mixed);
            let m = OrderElem::pi_d(&a).embed(None);
            let t = a.t();
            for j in 0..d {
                for s in 0..d {
                    let want = if j == s + 1 {
                        t.one()
                    } else if j == 0 && s == d - 1 {
                        t.uniformizer()
                    } else {
                        t.zero()
                    };
                    assert_eq!(*m.get(j, s), want);
                }
            }
            let sign = if d % 2 == 0 { -1 } else { 1 };
            assert_eq!(OrderElem::pi_d(&a).nrd().unwrap(), a.base().from_int(5 * sign));
            // diagonal embedding of T
            let th = a.t().theta();
            let mt = OrderElem::from_t(&a, &th).embed(None);
            for j in 0..d {
                assert_eq!(*mt.get(j, j), a.twist(&th, -(j as i64)));
            }
        }
    }

    #[test]
    fn embedding_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p, d, r, mode) in [(3, 2, 1, Mode::Mixed), (5, 3, 2, Mode::Mixed), (3, 3, 1, Mode::Equal), (3, 4, 3, Mode::Mixed)] {
            let a = algebra(p, d, r, 5, mode);
            for _ in 0..20 {
                let (x, y, z) = (OrderElem::random(&a, &mut rng), OrderElem::random(&a, &mut rng), OrderElem::random(&a, &mut rng));
                assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                assert_eq!((&x * &y).embed(None), x.embed(None).try_mul(&y.embed(None)).unwrap());
                let (tr, n) = x.full_trace_norm().unwrap();
                assert_eq!(n, x.nrd().unwrap().pow(d as u64));
                assert_eq!(tr, x.trd().unwrap().scale(d as i128));
            }
        }
    }

    #[test]
    fn inverse_and_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (p, d, r, mode) in [(3, 2, 1, Mode::Mixed), (5, 3, 2, Mode::Mixed), (3, 2, 1, Mode::Equal)] {
            let a = algebra(p, d, r, 6, mode);
            let one = DElem::one(&a);
            let pd = DElem::pi_d(&a);
            let pinv = pd.inv().unwrap();
            assert_eq!(pinv.shift(), -1);
            assert!(pd.try_mul(&pinv).unwrap().agrees_with(&one));
            for _ in 0..30 {
                let shift = rand::Rng::gen_range(&mut rng, -2..3);
                let x = DElem::from_order(&OrderElem::random(&a, &mut rng), shift);
                if x.is_zero() {
                    continue;
                }
                let xi = x.inv().unwrap();
                assert!(x.try_mul(&xi).unwrap().agrees_with(&one), "{x:?} * {xi:?}");
                let y = DElem::from_order(&OrderElem::random(&a, &mut rng), 0);
                let c = y.conjugate_by(&x).unwrap();
                assert_eq!(c.ord(), y.ord());
                assert_eq!(x.try_mul(&y).unwrap().ord().finite().unwrap(), x.ord().finite().unwrap() + y.ord().finite().unwrap());
            }
            let th = DElem::from_t(&a, &a.t().theta());
            let conj = th.conjugate_by(&pd).unwrap();
            assert!(conj.agrees_with(&DElem::from_t(&a, &a.twist(&a.t().theta(), 1))));
            assert!(DElem::pi_k(&a).inv().is_ok());
            assert_eq!(DElem::from_order(&OrderElem::zero(&a), 0).inv().unwrap_err(), Error::DivisionByZero);
        }
    }

    #[test]
    fn trivial_algebra() {
        let s = LocalRingCtx::base(3, 1, 4, Mode::Mixed).unwrap();
        let t = LocalRingCtx::unramified(&s, 1).unwrap();
        let a = AlgebraCtx::new(&t, 0).unwrap();
        let x = DElem::pi_d(&a);
        assert_eq!(x.ord(), Valuation::Finite(1));
        assert_eq!(x.shift(), 1);
        let (trd, nrd) = x.trd_nrd().unwrap();
        assert_eq!(trd.ord(), Valuation::Finite(1));
        assert_eq!(nrd.ord(), Valuation::Finite(1));
    }
}
