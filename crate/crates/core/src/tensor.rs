//! The ring `T ⊗_S T` presented as `T[u]/(G(u))`, with the left factor carried by
//! `u`, its Galois idempotents, and the order `A ⊗_S T`.
//!
//! Galois elements are indexed by Frobenius exponent: index `k` stands for
//! `σ^k`, where `σ` is the `q`-power Frobenius. The component map is
//! `w_k(t₁ ⊗ t₂) = σ^k(t₁)·t₂`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde_json::Value;

use crate::division_algebra::{AlgebraCtx, OrderElem};
use crate::error::{Error, Result};
use crate::ff::FFElem;
use crate::local_ring::{LocalRingCtx, RingElem};
use crate::rmat::RMat;

pub struct TensorRingCtx {
    alg: Arc<AlgebraCtx>,
    /// `σ^k(θ)` for `k < d`.
    roots: Vec<RingElem>,
    /// Monic `G(u) = Π (u − σ^k(θ))`, low to high, length `d + 1`.
    g: Vec<RingElem>,
    /// Coefficients of the idempotents `e_k`.
    idem: Vec<Vec<RingElem>>,
}

impl fmt::Debug for TensorRingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorRingCtx({:?})", self.alg)
    }
}

impl TensorRingCtx {
    pub fn new(alg: &Arc<AlgebraCtx>) -> Result<Arc<Self>> {
        let t = alg.t().clone();
        let d = alg.d();
        let theta = t.theta();
        let roots: Vec<RingElem> = (0..d as i64).map(|k| theta.frobenius(k)).collect();
        let mut g = vec![t.one()];
        for root in &roots {
            // multiply by (u − root)
            let mut next = vec![t.zero(); g.len() + 1];
            for (i, c) in g.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * root);
            }
            g = next;
        }
        for c in &g {
            if t.coerce_to_base(c).is_err() {
                return Err(Error::internal("Frobenius orbit polynomial does not descend to S"));
            }
        }
        let eval = |x: &RingElem| g.iter().rev().fold(t.zero(), |acc, c| &(&acc * x) + c);
        if !eval(&theta).is_zero() {
            return Err(Error::internal("Frobenius orbit polynomial does not vanish at θ"));
        }
        let raw = Arc::new(TensorRingCtx { alg: alg.clone(), roots, g, idem: Vec::new() });
        let mut idem = Vec::with_capacity(d);
        for k in 0..d {
            let mut e = TensorElem::one(&raw);
            for j in (0..d).filter(|&j| j != k) {
                let denom = (&raw.roots[k] - &raw.roots[j])
                    .inv()
                    .map_err(|_| Error::internal("conjugates of θ are not distinct mod π"))?;
                let lin = TensorElem::from_poly(&raw, vec![-&(&raw.roots[j] * &denom), denom]);
                e = &e * &lin;
            }
            idem.push(e.c);
        }
        Ok(Arc::new(TensorRingCtx { idem, ..raw.shallow() }))
    }

    fn shallow(&self) -> TensorRingCtx {
        TensorRingCtx { alg: self.alg.clone(), roots: self.roots.clone(), g: self.g.clone(), idem: self.idem.clone() }
    }

    pub fn algebra(&self) -> &Arc<AlgebraCtx> {
        &self.alg
    }

    pub fn t(&self) -> &Arc<LocalRingCtx> {
        self.alg.t()
    }

    pub fn d(&self) -> usize {
        self.alg.d()
    }

    pub fn r(&self) -> i64 {
        self.alg.r()
    }

    /// Coefficients of `G(u)` in `T`, low to high.
    pub fn orbit_poly(&self) -> &[RingElem] {
        &self.g
    }

    pub fn roots(&self) -> &[RingElem] {
        &self.roots
    }

    /// Galois index of `σ_r^i`.
    pub fn twist_index(&self, i: i64) -> usize {
        (self.r() * i).rem_euclid(self.d() as i64) as usize
    }

    pub fn idempotent(self: &Arc<Self>, k: usize) -> TensorElem {
        TensorElem { ctx: self.clone(), c: self.idem[k % self.d()].clone() }
    }

    pub fn idempotents(self: &Arc<Self>) -> Vec<TensorElem> {
        (0..self.d()).map(|k| self.idempotent(k)).collect()
    }
}

/// An element of `T ⊗_S T` as a polynomial in `u` with `T`-coefficients (right factor).
#[derive(Clone)]
pub struct TensorElem {
    ctx: Arc<TensorRingCtx>,
    c: Vec<RingElem>,
}

impl PartialEq for TensorElem {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl TensorElem {
    fn reduce(ctx: &Arc<TensorRingCtx>, mut c: Vec<RingElem>) -> TensorElem {
        let d = ctx.d();
        let t = ctx.t();
        while c.len() > d {
            let top = c.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let base = c.len() - d;
            for (j, gj) in ctx.g[..d].iter().enumerate() {
                c[base + j] = &c[base + j] - &(&top * gj);
            }
        }
        c.resize(d, t.zero());
        TensorElem { ctx: ctx.clone(), c }
    }

    pub fn from_poly(ctx: &Arc<TensorRingCtx>, c: Vec<RingElem>) -> TensorElem {
        Self::reduce(ctx, c)
    }

    pub fn zero(ctx: &Arc<TensorRingCtx>) -> Self {
        Self::reduce(ctx, Vec::new())
    }

    pub fn one(ctx: &Arc<TensorRingCtx>) -> Self {
        Self::right(ctx, &ctx.t().one())
    }

    /// `1 ⊗ t`.
    pub fn right(ctx: &Arc<TensorRingCtx>, t: &RingElem) -> Self {
        Self::reduce(ctx, vec![t.clone()])
    }

    /// `t ⊗ 1`, written through the `S`-basis `θ^j` of `T`.
    pub fn left(ctx: &Arc<TensorRingCtx>, t: &RingElem) -> Self {
        let tt = ctx.t();
        let c = tt
            .base_coords(t)
            .iter()
            .map(|s| tt.embed_base(s).expect("coordinates lie in S"))
            .collect();
        Self::reduce(ctx, c)
    }

    /// The element with prescribed components `w_k`.
    pub fn from_components(ctx: &Arc<TensorRingCtx>, comps: &[RingElem]) -> Self {
        comps.iter().enumerate().fold(Self::zero(ctx), |acc, (k, w)| {
            let e = TensorElem { ctx: ctx.clone(), c: ctx.idem[k].clone() };
            &acc + &(&e * &Self::right(ctx, w))
        })
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<TensorRingCtx>, rng: &mut R) -> Self {
        Self::reduce(ctx, (0..ctx.d()).map(|_| ctx.t().random(rng)).collect())
    }

    pub fn ctx(&self) -> &Arc<TensorRingCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(RingElem::is_zero)
    }

    pub fn add(&self, o: &TensorElem) -> TensorElem {
        TensorElem { ctx: self.ctx.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &TensorElem) -> TensorElem {
        TensorElem { ctx: self.ctx.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &TensorElem) -> TensorElem {
        let t = self.ctx.t();
        let mut prod = vec![t.zero(); 2 * self.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        Self::reduce(&self.ctx, prod)
    }

    pub fn mul_pi_pow(&self, k: usize) -> TensorElem {
        TensorElem { ctx: self.ctx.clone(), c: self.c.iter().map(|x| x.mul_pi_pow(k)).collect() }
    }

    /// `w_k(x)`: evaluation of the `u`-polynomial at `σ^k(θ)`.
    pub fn component(&self, k: usize) -> RingElem {
        let t = self.ctx.t();
        let root = &self.ctx.roots[k % self.ctx.d()];
        self.c.iter().rev().fold(t.zero(), |acc, c| &(&acc * root) + c)
    }

    pub fn components(&self) -> Vec<RingElem> {
        (0..self.ctx.d()).map(|k| self.component(k)).collect()
    }

    /// `(σ^r ⊗ id)(x)`, by permuting components: the new `k`-component is the old `(k + r)`.
    pub fn sigma_left(&self, r: i64) -> TensorElem {
        let d = self.ctx.d() as i64;
        let comps = self.components();
        let permuted: Vec<RingElem> =
            (0..d).map(|k| comps[(k + r).rem_euclid(d) as usize].clone()).collect();
        Self::from_components(&self.ctx, &permuted)
    }

    /// `(σ^r ⊗ id)(x)`, by substituting `u ↦ σ^r(θ) ⊗ 1`.
    pub fn sigma_left_by_substitution(&self, r: i64) -> TensorElem {
        let image = Self::left(&self.ctx, &self.ctx.t().theta().frobenius(r));
        self.c.iter().rev().fold(Self::zero(&self.ctx), |acc, c| {
            &(&acc * &image) + &Self::right(&self.ctx, c)
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.c.iter().map(RingElem::to_json).collect())
    }
}

impl fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.c.iter().enumerate().map(|(i, c)| format!("({c})u^{i}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl std::ops::Add<&TensorElem> for &TensorElem {
    type Output = TensorElem;
    fn add(self, o: &TensorElem) -> TensorElem {
        TensorElem::add(self, o)
    }
}

impl std::ops::Sub<&TensorElem> for &TensorElem {
    type Output = TensorElem;
    fn sub(self, o: &TensorElem) -> TensorElem {
        TensorElem::sub(self, o)
    }
}

impl std::ops::Mul<&TensorElem> for &TensorElem {
    type Output = TensorElem;
    fn mul(self, o: &TensorElem) -> TensorElem {
        TensorElem::mul(self, o)
    }
}

impl std::ops::Neg for &TensorElem {
    type Output = TensorElem;
    fn neg(self) -> TensorElem {
        TensorElem { ctx: self.ctx.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

/// An element `Σ z_i x^i` of `A ⊗_S T`, `z_i ∈ T ⊗_S T`, `x = π_D ⊗ 1`.
#[derive(Clone, PartialEq)]
pub struct TensorOrderElem {
    c: Vec<TensorElem>,
}

impl TensorOrderElem {
    pub fn new(coeffs: Vec<TensorElem>) -> Self {
        TensorOrderElem { c: coeffs }
    }

    fn ctx(&self) -> &Arc<TensorRingCtx> {
        self.c[0].ctx()
    }

    pub fn zero(ctx: &Arc<TensorRingCtx>) -> Self {
        TensorOrderElem { c: vec![TensorElem::zero(ctx); ctx.d()] }
    }

    pub fn scalar(z: &TensorElem) -> Self {
        let mut e = Self::zero(z.ctx());
        e.c[0] = z.clone();
        e
    }

    pub fn one(ctx: &Arc<TensorRingCtx>) -> Self {
        Self::scalar(&TensorElem::one(ctx))
    }

    /// `π_D^i ⊗ 1` for `0 <= i < d`.
    pub fn x_pow(ctx: &Arc<TensorRingCtx>, i: usize) -> Self {
        if ctx.d() == 1 {
            let pi = TensorElem::right(ctx, &ctx.t().uniformizer());
            return (0..i).fold(Self::one(ctx), |acc, _| &acc * &Self::scalar(&pi));
        }
        let mut e = Self::zero(ctx);
        e.c[i] = TensorElem::one(ctx);
        e
    }

    /// `a ⊗ 1`.
    pub fn from_order(ctx: &Arc<TensorRingCtx>, a: &OrderElem) -> Self {
        TensorOrderElem { c: a.coeffs().iter().map(|y| TensorElem::left(ctx, y)).collect() }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<TensorRingCtx>, rng: &mut R) -> Self {
        TensorOrderElem { c: (0..ctx.d()).map(|_| TensorElem::random(ctx, rng)).collect() }
    }

    pub fn coeffs(&self) -> &[TensorElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(TensorElem::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        TensorOrderElem { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        TensorOrderElem { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    /// `Σ y_i (σ_r ⊗ id)^i(z_j) x^{i+j}` with `x^d = π_K ⊗ 1`.
    pub fn mul(&self, o: &Self) -> Self {
        let ctx = self.ctx().clone();
        let d = ctx.d();
        let r = ctx.r();
        let mut low = vec![TensorElem::zero(&ctx); d];
        let mut high = vec![TensorElem::zero(&ctx); d];
        for (i, y) in self.c.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            for (j, z) in o.c.iter().enumerate() {
                if z.is_zero() {
                    continue;
                }
                let term = y * &z.sigma_left(r * i as i64);
                let k = i + j;
                if k < d {
                    low[k] = &low[k] + &term;
                } else {
                    high[k - d] = &high[k - d] + &term;
                }
            }
        }
        TensorOrderElem { c: low.iter().zip(&high).map(|(l, h)| l + &h.mul_pi_pow(1)).collect() }
    }

    /// The matrix `l(z) ∈ M_d(T)`.
    pub fn embed(&self) -> RMat {
        let ctx = self.ctx();
        let d = ctx.d();
        RMat::from_fn(ctx.t(), d, d, |j, s| {
            let i = (j + d - s) % d;
            let k = ctx.twist_index(-(j as i64));
            self.c[i].component(k).mul_pi_pow((i + s) / d)
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.c.iter().map(TensorElem::to_json).collect())
    }
}

impl fmt::Debug for TensorOrderElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.c.iter().enumerate().map(|(i, z)| format!("[{z:?}]x^{i}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl std::ops::Add<&TensorOrderElem> for &TensorOrderElem {
    type Output = TensorOrderElem;
    fn add(self, o: &TensorOrderElem) -> TensorOrderElem {
        TensorOrderElem::add(self, o)
    }
}

impl std::ops::Sub<&TensorOrderElem> for &TensorOrderElem {
    type Output = TensorOrderElem;
    fn sub(self, o: &TensorOrderElem) -> TensorOrderElem {
        TensorOrderElem::sub(self, o)
    }
}

impl std::ops::Mul<&TensorOrderElem> for &TensorOrderElem {
    type Output = TensorOrderElem;
    fn mul(self, o: &TensorOrderElem) -> TensorOrderElem {
        TensorOrderElem::mul(self, o)
    }
}

/// Whether `M mod 𝔪_T` is lower triangular.
pub fn is_lower_triangular_mod_m(m: &RMat) -> bool {
    (0..m.rows()).all(|j| (j + 1..m.cols()).all(|s| !m.get(j, s).is_unit()))
}

/// Whether `M mod 𝔪_T` is strictly lower triangular.
pub fn is_strictly_lower_mod_m(m: &RMat) -> bool {
    (0..m.rows()).all(|j| (j..m.cols()).all(|s| !m.get(j, s).is_unit()))
}

/// Result of the Milnor-square membership test.
#[derive(Debug, Clone)]
pub struct MilnorResult {
    pub member: bool,
    pub preimage: Option<TensorOrderElem>,
}

/// Membership of `M` in the image of `l`, and a preimage when it exists.
///
/// Position `(j, s)` of `l(z)` sees exactly the component `w_{σ_r^{-j}}` of
/// `z_{(j-s) mod d}`, times `π_K` above the diagonal; this is a bijection between
/// matrix positions and the `d²` coordinates of `z` in the idempotent basis.
pub fn milnor(ctx: &Arc<TensorRingCtx>, m: &RMat) -> Result<MilnorResult> {
    let d = ctx.d();
    if m.rows() != d || m.cols() != d || **m.ctx() != **ctx.t() {
        return Err(Error::param("expected a d x d matrix over T"));
    }
    if !is_lower_triangular_mod_m(m) {
        return Ok(MilnorResult { member: false, preimage: None });
    }
    let t = ctx.t();
    let mut comps = vec![vec![t.zero(); d]; d];
    let mut seen = vec![vec![false; d]; d];
    for j in 0..d {
        for s in 0..d {
            let i = (j + d - s) % d;
            let k = ctx.twist_index(-(j as i64));
            let v = if s > j { m.get(j, s).div_pi_pow(1)? } else { m.get(j, s).clone() };
            if seen[i][k] {
                return Err(Error::internal("matrix positions do not match tensor coordinates"));
            }
            seen[i][k] = true;
            comps[i][k] = v;
        }
    }
    let z = TensorOrderElem { c: comps.iter().map(|c| TensorElem::from_components(ctx, c)).collect() };
    if z.embed() != *m {
        return Err(Error::internal("Milnor preimage does not reproduce the matrix"));
    }
    Ok(MilnorResult { member: true, preimage: Some(z) })
}

/// `T`-spanning set `(θ^k ⊗ 1)·x^i` of `A ⊗_S T`.
pub fn spanning_set(ctx: &Arc<TensorRingCtx>) -> Vec<TensorOrderElem> {
    let d = ctx.d();
    let theta = ctx.t().theta();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for k in 0..d {
            let left = TensorOrderElem::scalar(&TensorElem::left(ctx, &theta.pow(k as u64)));
            out.push(&left * &TensorOrderElem::x_pow(ctx, i));
        }
    }
    out
}

/// Spanning set of `𝔪_D ⊗_S T`: the spanning set with `x^0` replaced by `π_K`.
pub fn radical_spanning_set(ctx: &Arc<TensorRingCtx>) -> Vec<TensorOrderElem> {
    let d = ctx.d();
    let pi = TensorOrderElem::scalar(&TensorElem::right(ctx, &ctx.t().uniformizer()));
    spanning_set(ctx)
        .into_iter()
        .enumerate()
        .map(|(n, z)| if n < d { &pi * &z } else { z })
        .collect()
}

/// Dimension over `k_T` of the span of `l(z) mod 𝔪_T`.
pub fn residue_span_dim(images: &[RMat]) -> usize {
    let rows: Vec<Vec<FFElem>> = images.iter().map(|m| m.residue().into_iter().flatten().collect()).collect();
    crate::ff::rank(&rows)
}

/// Basis of the image of `l` modulo `𝔪_T`, over `F_p`: for each lower-triangular
/// position, the `F_p`-basis of `k_T` placed there.
pub fn milnor_basis(ctx: &Arc<TensorRingCtx>) -> Vec<Vec<Vec<FFElem>>> {
    let images: Vec<RMat> = spanning_set(ctx).iter().map(TensorOrderElem::embed).collect();
    let d = ctx.d();
    let k_t = ctx.t().residue_field().clone();
    let mut basis = Vec::new();
    for j in 0..d {
        for s in 0..=j {
            debug_assert!(images.iter().any(|m| m.get(j, s).is_unit()));
            for b in 0..k_t.degree() {
                let mut c = vec![0; k_t.degree()];
                c[b] = 1;
                let mut mat = vec![vec![k_t.zero(); d]; d];
                mat[j][s] = k_t.elem(&c).expect("basis vector");
                basis.push(mat);
            }
        }
    }
    basis
}

/// A Peirce piece `e_g (A ⊗_S T) e_h`.
#[derive(Debug, Clone)]
pub struct PeircePiece {
    pub g: usize,
    pub h: usize,
    /// Power of `x` in the generator.
    pub i: usize,
    pub generator: TensorOrderElem,
    pub rank: usize,
    /// Whether left multiplication by `x` onto the `(g − r, h)` piece is onto.
    pub x_is_iso: bool,
    /// `T`-length of the cokernel of that map.
    pub cokernel_length: usize,
}

/// The generator `e_g x^i e_h` with `g = h − r·i`, and the behaviour of `x·` on it.
pub fn peirce(ctx: &Arc<TensorRingCtx>, g: usize, h: usize) -> Result<PeircePiece> {
    let d = ctx.d();
    if g >= d || h >= d {
        return Err(Error::param(format!("Galois index out of range 0..{d}")));
    }
    let i = (0..d)
        .find(|&i| ctx.twist_index(i as i64) == (h + d - g) % d)
        .ok_or_else(|| Error::internal("twist does not generate the Galois group"))?;
    let eg = TensorOrderElem::scalar(&ctx.idempotent(g));
    let eh = TensorOrderElem::scalar(&ctx.idempotent(h));
    let generator = &(&eg * &TensorOrderElem::x_pow(ctx, i)) * &eh;
    if generator.is_zero() || &(&eg * &generator) * &eh != generator {
        return Err(Error::internal("Peirce generator is not in its piece"));
    }
    // x · generator = λ · (generator of the (g − r, h) piece)
    let g2 = (g + d - ctx.twist_index(1)) % d;
    let image = &TensorOrderElem::x_pow(ctx, 1) * &generator;
    let i2 = (i + 1) % d;
    let lambda = image.c[i2].component(g2);
    let mut expected = TensorOrderElem::zero(ctx);
    expected.c[i2] = TensorElem::from_components(ctx, &unit_vector(ctx, g2, &lambda));
    if expected != image {
        return Err(Error::internal("x does not map Peirce pieces to Peirce pieces"));
    }
    let ord = lambda.ord().finite().ok_or_else(|| Error::internal("x kills a Peirce piece"))?;
    Ok(PeircePiece { g, h, i, generator, rank: 1, x_is_iso: ord == 0, cokernel_length: ord as usize })
}

fn unit_vector(ctx: &Arc<TensorRingCtx>, k: usize, v: &RingElem) -> Vec<RingElem> {
    (0..ctx.d()).map(|j| if j == k { v.clone() } else { ctx.t().zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_ring::Mode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tensor(p: u64, d: usize, r: i64, n: usize, mode: Mode) -> Arc<TensorRingCtx> {
        let s = LocalRingCtx::base(p, 1, n, mode).unwrap();
        let t = LocalRingCtx::unramified(&s, d).unwrap();
        TensorRingCtx::new(&AlgebraCtx::new(&t, r).unwrap()).unwrap()
    }

    #[test]
    fn orbit_polynomial_and_idempotents() {
        let c = tensor(3, 2, 1, 4, Mode::Mixed);
        let t = c.t();
        // G = u² + 1 since σ(θ) = −θ
        assert_eq!(c.orbit_poly(), &[t.one(), t.zero(), t.one()]);
        let e0 = c.idempotent(0);
        // e_id = (u + θ)/(2θ)
        let inv = (&t.from_int(2) * &t.theta()).inv().unwrap();
        assert_eq!(e0.coeffs(), &[&t.theta() * &inv, inv.clone()]);
        for d in [1, 2, 3, 4] {
            let c = tensor(5, d, 1, 4, Mode::Mixed);
            let sum = c.idempotents().iter().fold(TensorElem::zero(&c), |a, e| &a + e);
            assert_eq!(sum, TensorElem::one(&c));
            for g in 0..d {
                for h in 0..d {
                    let prod = &c.idempotent(g) * &c.idempotent(h);
                    let want = if g == h { c.idempotent(g) } else { TensorElem::zero(&c) };
                    assert_eq!(prod, want);
                    let w = c.idempotent(h).component(g);
                    assert_eq!(w, if g == h { c.t().one() } else { c.t().zero() });
                }
                assert_eq!(c.idempotent(g).sigma_left(1), c.idempotent((g + d - 1) % d));
            }
        }
    }

    #[test]
    fn components_and_twist() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, d, mode) in [(3, 2, Mode::Mixed), (5, 3, Mode::Mixed), (3, 3, Mode::Equal)] {
            let c = tensor(p, d, 1, 5, mode);
            let t = c.t().clone();
            for _ in 0..10 {
                let (a, b) = (t.random(&mut rng), t.random(&mut rng));
                let x = &TensorElem::left(&c, &a) * &TensorElem::right(&c, &b);
                for k in 0..d {
                    assert_eq!(x.component(k), &a.frobenius(k as i64) * &b);
                }
                let z = TensorElem::random(&c, &mut rng);
                assert_eq!(TensorElem::from_components(&c, &z.components()), z);
                for r in 0..d as i64 {
                    assert_eq!(z.sigma_left(r), z.sigma_left_by_substitution(r));
                }
            }
            let u = TensorElem::left(&c, &t.theta());
            assert_eq!(u.components(), c.roots().to_vec());
        }
    }

    #[test]
    fn order_embedding_and_milnor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, d, r, mode) in [(3, 2, 1, Mode::Mixed), (5, 3, 2, Mode::Mixed), (3, 2, 1, Mode::Equal), (3, 4, 1, Mode::Mixed)] {
            let c = tensor(p, d, r, 5, mode);
            let alg = c.algebra().clone();
            for _ in 0..10 {
                let (a, b) = (OrderElem::random(&alg, &mut rng), OrderElem::random(&alg, &mut rng));
                let (ta, tb) = (TensorOrderElem::from_order(&c, &a), TensorOrderElem::from_order(&c, &b));
                assert_eq!(&ta * &tb, TensorOrderElem::from_order(&c, &(&a * &b)));
                assert_eq!(ta.embed(), a.embed(None));
                let (z, w) = (TensorOrderElem::random(&c, &mut rng), TensorOrderElem::random(&c, &mut rng));
                assert_eq!((&z * &w).embed(), z.embed().try_mul(&w.embed()).unwrap());
                let m = z.embed();
                assert!(is_lower_triangular_mod_m(&m));
                let res = milnor(&c, &m).unwrap();
                assert!(res.member);
                assert_eq!(res.preimage.unwrap().embed(), m);
            }
            let span: Vec<RMat> = spanning_set(&c).iter().map(TensorOrderElem::embed).collect();
            assert_eq!(residue_span_dim(&span), d * (d + 1) / 2);
            let rad: Vec<RMat> = radical_spanning_set(&c).iter().map(TensorOrderElem::embed).collect();
            assert!(rad.iter().all(is_strictly_lower_mod_m));
            assert_eq!(residue_span_dim(&rad), d * (d - 1) / 2);
            assert_eq!(milnor_basis(&c).len(), d * (d + 1) / 2 * d);
        }
    }

    #[test]
    fn milnor_membership_examples() {
        let c = tensor(3, 2, 1, 4, Mode::Mixed);
        let t = c.t().clone();
        let x = TensorOrderElem::x_pow(&c, 1);
        assert!(milnor(&c, &x.embed()).unwrap().member);
        let mut upper = RMat::zeros(&t, 2, 2);
        upper.set(0, 1, t.one());
        assert!(!milnor(&c, &upper).unwrap().member);
        let any = RMat::from_fn(&t, 2, 2, |i, j| t.from_int(3 * (1 + i as i128 + 2 * j as i128)));
        let res = milnor(&c, &any).unwrap();
        assert!(res.member);
        assert_eq!(res.preimage.unwrap().embed(), any);
    }

    #[test]
    fn peirce_pattern() {
        for (d, r) in [(1, 0), (2, 1), (3, 1), (3, 2), (4, 3)] {
            let c = tensor(5, d, r, 4, Mode::Mixed);
            for h in 0..d {
                let mut non_iso = 0;
                for g in 0..d {
                    let piece = peirce(&c, g, h).unwrap();
                    assert_eq!(piece.rank, 1);
                    if g == h {
                        assert_eq!(piece.i, 0);
                    }
                    if !piece.x_is_iso {
                        non_iso += 1;
                        assert_eq!(piece.cokernel_length, 1);
                        assert_eq!(g, (h + c.twist_index(1)) % d);
                    }
                }
                assert_eq!(non_iso, 1);
            }
        }
    }
}
