//! `p`-typical Witt vectors of finite length.
//!
//! Arithmetic runs through the ghost map: coordinates are lifted to a
//! `p`-torsion-free ring `L = W(F_{p^w})/p^{M+n} [t]/t^s` carrying a Frobenius
//! lift, ghost components are combined there, and Witt coordinates are solved
//! back top-down by exact division. The coefficient ring is reached from `L` by
//! reducing coefficients mod `p^M` (mixed) or `p` (equal, `s = N`).

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::local_ring::{LocalRingCtx, Mode, RingElem, Valuation};

/// Supported coefficient rings.
#[derive(Debug, Clone)]
pub enum CoeffRing {
    /// `ℤ/p^m`.
    IntMod { p: u64, m: usize },
    /// `F_{p^f}`.
    Field { p: u64, f: usize },
    /// `S/π^N` or `T/π^N` from [`local_ring`](crate::local_ring).
    Local(Arc<LocalRingCtx>),
}

impl CoeffRing {
    fn ring(&self) -> Result<Arc<LocalRingCtx>> {
        match self {
            CoeffRing::IntMod { p, m } => LocalRingCtx::base_any_precision(*p, 1, *m, Mode::Mixed),
            CoeffRing::Field { p, f } => LocalRingCtx::base_any_precision(*p, *f, 1, Mode::Mixed),
            CoeffRing::Local(c) => Ok(c.clone()),
        }
    }
}

/// Element of the lift ring: a truncated polynomial in `t` over `W(F_{p^w})/p^P`.
#[derive(Clone, PartialEq)]
pub struct LiftElem(Vec<RingElem>);

impl LiftElem {
    pub fn coeffs(&self) -> &[RingElem] {
        &self.0
    }

    pub fn add(&self, o: &LiftElem) -> LiftElem {
        LiftElem(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &LiftElem) -> LiftElem {
        LiftElem(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, o: &LiftElem) -> LiftElem {
        let s = self.0.len();
        let zero = self.0[0].ctx().zero();
        let mut out = vec![zero; s];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0[..s - i].iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        LiftElem(out)
    }

    fn pow(&self, mut e: u64) -> LiftElem {
        let mut base = self.clone();
        let mut acc = LiftElem(self.0.iter().enumerate().map(|(i, c)| if i == 0 { c.ctx().one() } else { c.ctx().zero() }).collect());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn mul_p_pow(&self, k: usize) -> LiftElem {
        LiftElem(self.0.iter().map(|c| c.mul_pi_pow(k)).collect())
    }

    fn div_p_pow(&self, k: usize) -> Result<LiftElem> {
        let c = self
            .0
            .iter()
            .map(|c| c.div_pi_pow(k))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::internal(format!("ghost component not divisible by p^{k}")))?;
        Ok(LiftElem(c))
    }
}

impl fmt::Debug for LiftElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(RingElem::to_expr)).finish()
    }
}

#[derive(Debug)]
pub struct WittCtx {
    p: u64,
    n: usize,
    coeff: Arc<LocalRingCtx>,
    lift: Arc<LocalRingCtx>,
    slots: usize,
}

impl WittCtx {
    /// Witt vectors of length up to `n` over `coeff`.
    pub fn new(coeff: &CoeffRing, n: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::param("Witt vector length must be at least 1"));
        }
        let c = coeff.ring()?;
        let m = match c.mode() {
            Mode::Mixed => c.precision(),
            Mode::Equal => 1,
        };
        let lift = LocalRingCtx::base_any_precision(c.p(), c.width(), m + n, Mode::Mixed)?;
        let ctx = Arc::new(WittCtx { p: c.p(), n, slots: c.slots(), coeff: c, lift });
        ctx.check_frobenius_lift()?;
        Ok(ctx)
    }

    fn check_frobenius_lift(self: &Arc<Self>) -> Result<()> {
        let mut gens = vec![self.coeff.theta()];
        if self.coeff.mode() == Mode::Equal {
            gens.push(self.coeff.uniformizer());
        }
        for g in gens {
            let l = self.lift_elem(&g);
            let diff = self.frobenius_lift(&l).sub(&l.pow(self.p));
            if diff.0.iter().any(|c| c.coeffs().iter().any(|&x| x % self.p != 0)) {
                return Err(Error::internal("Frobenius lift is not congruent to the p-th power"));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Maximal length.
    pub fn max_len(&self) -> usize {
        self.n
    }

    pub fn coeff_ring(&self) -> &Arc<LocalRingCtx> {
        &self.coeff
    }

    pub fn lift_elem(&self, a: &RingElem) -> LiftElem {
        let w = self.coeff.width();
        LiftElem(
            (0..self.slots)
                .map(|s| self.lift.elem(&a.coeffs()[s * w..(s + 1) * w]).expect("width matches"))
                .collect(),
        )
    }

    pub fn reduce(&self, l: &LiftElem) -> RingElem {
        let flat: Vec<u64> = l.0.iter().flat_map(|c| c.coeffs().iter().copied()).collect();
        self.coeff.elem(&flat).expect("width matches")
    }

    /// `φ_lift`: the Witt Frobenius on `W(F_{p^w})`, and `t ↦ t^p`.
    pub fn frobenius_lift(&self, l: &LiftElem) -> LiftElem {
        let mut out = vec![self.lift.zero(); self.slots];
        for (i, c) in l.0.iter().enumerate() {
            let j = i * self.p as usize;
            if j < self.slots {
                out[j] = c.abs_frobenius();
            }
        }
        LiftElem(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == 0 || len > self.n {
            return Err(Error::param(format!("Witt length {len} outside 1..={}", self.n)));
        }
        Ok(())
    }

    pub fn from_coords(self: &Arc<Self>, coords: Vec<RingElem>) -> Result<WittVec> {
        self.check_len(coords.len())?;
        if coords.iter().any(|c| **c.ctx() != *self.coeff) {
            return Err(Error::param("Witt coordinates lie in the wrong ring"));
        }
        Ok(WittVec { ctx: self.clone(), coords })
    }

    pub fn zero(self: &Arc<Self>, len: usize) -> Result<WittVec> {
        self.from_coords(vec![self.coeff.zero(); len])
    }

    pub fn one(self: &Arc<Self>, len: usize) -> Result<WittVec> {
        self.teich(&self.coeff.one(), len)
    }

    /// Teichmüller representative `[a] = (a, 0, …, 0)`.
    pub fn teich(self: &Arc<Self>, a: &RingElem, len: usize) -> Result<WittVec> {
        let mut c = vec![self.coeff.zero(); len];
        if len > 0 {
            c[0] = a.clone();
        }
        self.from_coords(c)
    }

    /// The image of the integer `k`.
    pub fn from_int(self: &Arc<Self>, k: i128, len: usize) -> Result<WittVec> {
        self.check_len(len)?;
        let v = LiftElem(
            (0..self.slots).map(|s| if s == 0 { self.lift.from_int(k) } else { self.lift.zero() }).collect(),
        );
        self.from_ghost(&vec![v; len])
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R, len: usize) -> Result<WittVec> {
        self.from_coords((0..len).map(|_| self.coeff.random(rng)).collect())
    }

    /// Random vector with every coordinate in `𝔪^m`.
    pub fn random_in_power<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R, len: usize, m: usize) -> Result<WittVec> {
        self.from_coords((0..len).map(|_| self.coeff.random(rng).mul_pi_pow(m)).collect())
    }

    /// Ghost components in the lift ring.
    pub fn ghost_of_lift(&self, coords: &[LiftElem]) -> Vec<LiftElem> {
        let mut out = Vec::with_capacity(coords.len());
        let mut powers: Vec<LiftElem> = Vec::new();
        for a in coords {
            for q in powers.iter_mut() {
                *q = q.pow(self.p);
            }
            powers.push(a.clone());
            let w = powers.iter().enumerate().fold(None::<LiftElem>, |acc, (j, q)| {
                let term = q.mul_p_pow(j);
                Some(acc.map_or(term.clone(), |s| s.add(&term)))
            });
            out.push(w.expect("at least one term"));
        }
        out
    }

    /// Solves `c_i = (g_i − Σ_{j<i} p^j c_j^{p^{i−j}}) / p^i`.
    pub fn solve_ghost(&self, ghost: &[LiftElem]) -> Result<Vec<LiftElem>> {
        let mut coords: Vec<LiftElem> = Vec::with_capacity(ghost.len());
        let mut powers: Vec<LiftElem> = Vec::new();
        for (i, g) in ghost.iter().enumerate() {
            for q in powers.iter_mut() {
                *q = q.pow(self.p);
            }
            let mut s = g.clone();
            for (j, q) in powers.iter().enumerate() {
                s = s.sub(&q.mul_p_pow(j));
            }
            let c = s.div_p_pow(i)?;
            powers.push(c.clone());
            coords.push(c);
        }
        Ok(coords)
    }

    fn from_ghost(self: &Arc<Self>, ghost: &[LiftElem]) -> Result<WittVec> {
        let c = self.solve_ghost(ghost)?;
        self.from_coords(c.iter().map(|l| self.reduce(l)).collect())
    }

    /// Dwork's congruences `w_{i+1} ≡ φ_lift(w_i) mod p^{i+1}`.
    pub fn satisfies_dwork(&self, ghost: &[LiftElem]) -> bool {
        ghost.windows(2).enumerate().all(|(i, w)| {
            let diff = w[1].sub(&self.frobenius_lift(&w[0]));
            diff.div_p_pow(i + 1).is_ok()
        })
    }
}

#[derive(Clone)]
pub struct WittVec {
    ctx: Arc<WittCtx>,
    coords: Vec<RingElem>,
}

impl PartialEq for WittVec {
    fn eq(&self, o: &Self) -> bool {
        self.coords == o.coords
    }
}

impl fmt::Debug for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c.to_expr())?;
        }
        write!(f, ")")
    }
}

impl WittVec {
    pub fn ctx(&self) -> &Arc<WittCtx> {
        &self.ctx
    }

    pub fn coords(&self) -> &[RingElem] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RingElem::is_zero)
    }

    pub fn lift(&self) -> Vec<LiftElem> {
        self.coords.iter().map(|c| self.ctx.lift_elem(c)).collect()
    }

    pub fn ghost_lift(&self) -> Vec<LiftElem> {
        self.ctx.ghost_of_lift(&self.lift())
    }

    /// Ghost components reduced to the coefficient ring.
    pub fn ghost(&self) -> Vec<RingElem> {
        self.ghost_lift().iter().map(|g| self.ctx.reduce(g)).collect()
    }

    fn same(&self, o: &WittVec) -> Result<()> {
        if *self.ctx.coeff != *o.ctx.coeff || self.len() != o.len() {
            return Err(Error::param("Witt vectors of different rings or lengths"));
        }
        Ok(())
    }

    fn combine(&self, o: &WittVec, f: impl Fn(&LiftElem, &LiftElem) -> LiftElem) -> Result<WittVec> {
        self.same(o)?;
        let g: Vec<LiftElem> = self.ghost_lift().iter().zip(o.ghost_lift().iter()).map(|(a, b)| f(a, b)).collect();
        self.ctx.from_ghost(&g)
    }

    /// Sum and product computed over the lift ring, before reduction.
    pub fn combine_in_lift(&self, o: &WittVec, mul: bool) -> Result<(Vec<LiftElem>, Vec<LiftElem>)> {
        self.same(o)?;
        let g: Vec<LiftElem> = self
            .ghost_lift()
            .iter()
            .zip(o.ghost_lift().iter())
            .map(|(a, b)| if mul { a.mul(b) } else { a.add(b) })
            .collect();
        Ok((self.ctx.solve_ghost(&g)?, g))
    }

    pub fn add(&self, o: &WittVec) -> Result<WittVec> {
        self.combine(o, LiftElem::add)
    }

    pub fn sub(&self, o: &WittVec) -> Result<WittVec> {
        self.combine(o, LiftElem::sub)
    }

    pub fn mul(&self, o: &WittVec) -> Result<WittVec> {
        self.combine(o, LiftElem::mul)
    }

    pub fn neg(&self) -> WittVec {
        let g: Vec<LiftElem> = self.ghost_lift().iter().map(|a| LiftElem(a.0.iter().map(RingElem::neg).collect())).collect();
        self.ctx.from_ghost(&g).expect("negation is a Witt operation")
    }

    pub fn pow(&self, mut e: u64) -> WittVec {
        let mut acc = self.ctx.one(self.len()).expect("length checked");
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Witt vector Frobenius `F : W_n → W_{n−1}`.
    pub fn frob(&self) -> Result<WittVec> {
        if self.len() < 2 {
            return Err(Error::param("F needs length at least 2"));
        }
        self.ctx.from_ghost(&self.ghost_lift()[1..])
    }

    /// `F(a) − R(a)^p` together with a `z` such that `p·z` equals it.
    ///
    /// `z` is solved over the lift ring from the ghost components
    /// `(w_{i+1} − w_i^p)/p` of the lifted vector and then reduced.
    pub fn frobenius_defect(&self) -> Result<(WittVec, WittVec)> {
        let defect = self.frob()?.sub(&self.restrict()?.pow(self.ctx.p))?;
        let g = self.ghost_lift();
        let zg = g
            .windows(2)
            .map(|w| w[1].sub(&w[0].pow(self.ctx.p)).div_p_pow(1))
            .collect::<Result<Vec<_>>>()?;
        Ok((defect, self.ctx.from_ghost(&zg)?))
    }

    /// Verschiebung `V : W_n → W_{n+1}`.
    pub fn ver(&self) -> Result<WittVec> {
        let mut c = Vec::with_capacity(self.len() + 1);
        c.push(self.ctx.coeff.zero());
        c.extend(self.coords.iter().cloned());
        self.ctx.from_coords(c)
    }

    /// Restriction `R : W_n → W_{n−1}`.
    pub fn restrict(&self) -> Result<WittVec> {
        if self.len() < 2 {
            return Err(Error::param("R needs length at least 2"));
        }
        self.ctx.from_coords(self.coords[..self.len() - 1].to_vec())
    }

    /// `W_n(h)` for a ring map `h` given coordinatewise.
    pub fn map_coords(&self, ctx: &Arc<WittCtx>, h: impl Fn(&RingElem) -> Result<RingElem>) -> Result<WittVec> {
        ctx.from_coords(self.coords.iter().map(h).collect::<Result<_>>()?)
    }

    /// The map induced by the absolute Frobenius `a ↦ φ(a)` of the coefficients.
    pub fn reindex(&self, k: usize) -> WittVec {
        let coords = self
            .coords
            .iter()
            .map(|c| (0..k).fold(c.clone(), |a, _| a.abs_frobenius()))
            .collect();
        WittVec { ctx: self.ctx.clone(), coords }
    }

    /// Minimal valuation of the coordinates.
    pub fn ord(&self) -> Valuation {
        let n = self.ctx.coeff.precision() as i64;
        self.coords.iter().filter_map(|c| c.ord().finite()).min().map_or(Valuation::AtLeast(n), Valuation::Finite)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(RingElem::to_json).collect())
    }
}

/// A monomial `coeff · a_0^{e_0} a_1^{e_1} b_0^{e_2} b_1^{e_3}` of a length-2 law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: i128,
    pub exps: [u32; 4],
}

fn binomial(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Second coordinate of the sum of `(a_0, a_1)` and `(b_0, b_1)`.
pub fn addition_law_n2(p: u64) -> Vec<Monomial> {
    let mut out = vec![Monomial { coeff: 1, exps: [0, 1, 0, 0] }, Monomial { coeff: 1, exps: [0, 0, 0, 1] }];
    for k in 1..p {
        out.push(Monomial { coeff: -binomial(p, k) / p as i128, exps: [k as u32, 0, (p - k) as u32, 0] });
    }
    out
}

/// Second coordinate of the product of `(a_0, a_1)` and `(b_0, b_1)`.
pub fn multiplication_law_n2(p: u64) -> Vec<Monomial> {
    vec![
        Monomial { coeff: 1, exps: [p as u32, 0, 0, 1] },
        Monomial { coeff: 1, exps: [0, 1, p as u32, 0] },
        Monomial { coeff: p as i128, exps: [0, 1, 0, 1] },
    ]
}

pub fn eval_law(law: &[Monomial], vars: [&RingElem; 4]) -> RingElem {
    let ctx = vars[0].ctx().clone();
    law.iter().fold(ctx.zero(), |acc, m| {
        let term = (0..4).fold(ctx.from_int(m.coeff), |t, i| &t * &vars[i].pow(m.exps[i] as u64));
        &acc + &term
    })
}

pub fn law_to_string(law: &[Monomial]) -> String {
    let names = ["a0", "a1", "b0", "b1"];
    let mut s = String::new();
    for (idx, m) in law.iter().enumerate() {
        let mag = m.coeff.unsigned_abs();
        if idx == 0 {
            if m.coeff < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if m.coeff < 0 { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if mag != 1 {
            factors.push(mag.to_string());
        }
        for (i, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].to_string()),
                _ => factors.push(format!("{}^{e}", names[i])),
            }
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        s.push_str(&factors.join("*"));
    }
    s
}

/// Sizes (as powers of `p`) of the fixed points of `σ` on `W_n(T)` and of the image of `W_n(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoints {
    pub fixed_log: usize,
    pub image_log: usize,
    /// `σ` fixes every element of the image.
    pub image_fixed: bool,
}

/// Compares `W_n(T)^σ` with the image of `W_n(S)`, coordinatewise over the prime ring.
pub fn galois_fixed_points(t: &Arc<LocalRingCtx>, n: usize) -> Result<FixedPoints> {
    if t.base_ring().is_none() {
        return Err(Error::param("Galois fixed points need an extension T/S"));
    }
    let sigma = t.sigma_matrix(1);
    let embed = t.embed_matrix();
    let w = t.width();
    let id = crate::zmod::ZMat::identity(w, t.p(), t.modulus());
    let e = id.exponent();
    let fixed_block: usize = sigma.sub(&id).elementary_divisors().iter().map(|&v| v.min(e)).sum();
    let image_block: usize = embed.elementary_divisors().iter().map(|&v| e - v.min(e)).sum();
    Ok(FixedPoints {
        fixed_log: fixed_block * t.slots() * n,
        image_log: image_block * t.slots() * n,
        image_fixed: sigma.mul(embed) == *embed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zp(p: u64, m: usize, n: usize) -> Arc<WittCtx> {
        WittCtx::new(&CoeffRing::IntMod { p, m }, n).unwrap()
    }

    fn ints(ctx: &Arc<WittCtx>, v: &[i128]) -> WittVec {
        ctx.from_coords(v.iter().map(|&x| ctx.coeff_ring().from_int(x)).collect()).unwrap()
    }

    #[test]
    fn ghost_examples() {
        let c = zp(2, 6, 3);
        let g = ints(&c, &[1, 1]).ghost();
        assert_eq!(g, vec![c.coeff_ring().from_int(1), c.coeff_ring().from_int(3)]);
        let c = zp(3, 6, 3);
        let g = ints(&c, &[1, 1, 1]).ghost();
        let want: Vec<RingElem> = [1, 4, 13].iter().map(|&x| c.coeff_ring().from_int(x)).collect();
        assert_eq!(g, want);
        let a = c.coeff_ring().from_int(5);
        let t = c.teich(&a, 3).unwrap().ghost();
        assert_eq!(t, vec![a.clone(), a.pow(3), a.pow(9)]);
    }

    #[test]
    fn length_two_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2, 3, 5] {
            let c = zp(p, 6, 2);
            for _ in 0..20 {
                let (x, y) = (c.random(&mut rng, 2).unwrap(), c.random(&mut rng, 2).unwrap());
                let vars = [&x.coords()[0], &x.coords()[1], &y.coords()[0], &y.coords()[1]];
                let s = x.add(&y).unwrap();
                assert_eq!(s.coords()[0], vars[0] + vars[2]);
                assert_eq!(s.coords()[1], eval_law(&addition_law_n2(p), vars));
                let m = x.mul(&y).unwrap();
                assert_eq!(m.coords()[0], vars[0] * vars[2]);
                assert_eq!(m.coords()[1], eval_law(&multiplication_law_n2(p), vars));
                // F(a0, a1) = a0^p + p a1
                assert_eq!(x.frob().unwrap().coords()[0], &vars[0].pow(p) + &vars[1].scale(p as i128));
            }
        }
        assert_eq!(law_to_string(&addition_law_n2(2)), "a1 + b1 - a0*b0");
    }

    #[test]
    fn f_v_r_examples() {
        let c = zp(3, 6, 4);
        let a = c.coeff_ring().from_int(7);
        let v = c.teich(&a, 1).unwrap().ver().unwrap();
        assert_eq!(v, ints(&c, &[0, 7]));
        assert_eq!(v.frob().unwrap(), ints(&c, &[21]));
        assert_eq!(ints(&c, &[1, 2, 3]).restrict().unwrap(), ints(&c, &[1, 2]));
        assert!(ints(&c, &[1]).frob().is_err());
        assert!(ints(&c, &[1, 2, 3, 4]).ver().is_err());
        assert_eq!(c.from_int(3, 3).unwrap(), c.one(3).unwrap().add(&c.one(3).unwrap()).unwrap().add(&c.one(3).unwrap()).unwrap());
        let x = ints(&c, &[2, 5, 1]);
        assert!(x.add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn coefficient_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s_mixed = LocalRingCtx::base(3, 2, 4, Mode::Mixed).unwrap();
        let s_equal = LocalRingCtx::base(3, 1, 4, Mode::Equal).unwrap();
        let t_equal = LocalRingCtx::unramified(&s_equal, 2).unwrap();
        for coeff in [
            CoeffRing::Field { p: 5, f: 2 },
            CoeffRing::Local(s_mixed),
            CoeffRing::Local(s_equal),
            CoeffRing::Local(t_equal),
        ] {
            let c = WittCtx::new(&coeff, 3).unwrap();
            for _ in 0..5 {
                let (x, y, z) = (c.random(&mut rng, 3).unwrap(), c.random(&mut rng, 3).unwrap(), c.random(&mut rng, 3).unwrap());
                assert_eq!(x.add(&y).unwrap().mul(&z).unwrap(), x.mul(&z).unwrap().add(&y.mul(&z).unwrap()).unwrap());
                assert_eq!(x.mul(&c.one(3).unwrap()).unwrap(), x);
                assert!(c.satisfies_dwork(&x.ghost_lift()));
                let (sum, g) = x.combine_in_lift(&y, false).unwrap();
                assert_eq!(c.ghost_of_lift(&sum), g);
            }
        }
    }

    #[test]
    fn galois_fixed_points_match() {
        for mode in [Mode::Mixed, Mode::Equal] {
            let s = LocalRingCtx::base(3, 1, 4, mode).unwrap();
            for d in [2, 3] {
                let t = LocalRingCtx::unramified(&s, d).unwrap();
                let fp = galois_fixed_points(&t, 2).unwrap();
                assert!(fp.image_fixed);
                assert_eq!(fp.fixed_log, fp.image_log);
                assert_eq!(fp.image_log, 2 * 4);
            }
        }
    }
}
