//! Graded `(T, G)`-modules with `φ` and left `A ⊗_S T`-modules.
//!
//! A [`GradedPhiModule`] stores free blocks `P_k ≅ T^{n_k}` indexed by Galois
//! exponent `k`, and matrices `φ_k : P_k → P_{k−r}` (degree `σ_r^{-1}`, where `σ_r`
//! is conjugation by `π_D`). An [`AlgebraModule`] is a free `T`-module with
//! explicit matrices for the idempotents `e_k` and for `x = π_D ⊗ 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::local_ring::{RingElem, Valuation};
use crate::rmat::RMat;
use crate::tensor::{TensorOrderElem, TensorRingCtx};

#[derive(Clone, Debug)]
pub struct GradedPhiModule {
    ctx: Arc<TensorRingCtx>,
    ranks: Vec<usize>,
    phi: Vec<RMat>,
}

impl PartialEq for GradedPhiModule {
    fn eq(&self, o: &Self) -> bool {
        self.ctx.d() == o.ctx.d() && **self.ctx.t() == **o.ctx.t() && self.ranks == o.ranks && self.phi == o.phi
    }
}

impl GradedPhiModule {
    /// Checks shapes only; see [`validate`](Self::validate) for the cycle condition.
    pub fn new(ctx: &Arc<TensorRingCtx>, ranks: Vec<usize>, phi: Vec<RMat>) -> Result<Self> {
        let d = ctx.d();
        if ranks.len() != d || phi.len() != d {
            return Err(Error::param(format!("expected {d} blocks")));
        }
        for (k, m) in phi.iter().enumerate() {
            let target = ranks[(k + d - ctx.twist_index(1)) % d];
            if m.rows() != target || m.cols() != ranks[k] || **m.ctx() != **ctx.t() {
                return Err(Error::param(format!(
                    "φ_{k} must be a {target}x{} matrix over T, got {}x{}",
                    ranks[k],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(GradedPhiModule { ctx: ctx.clone(), ranks, phi })
    }

    pub fn ctx(&self) -> &Arc<TensorRingCtx> {
        &self.ctx
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn phi(&self, k: usize) -> &RMat {
        &self.phi[k % self.ctx.d()]
    }

    /// Degree reached from `k` by one application of `φ`.
    pub fn next(&self, k: usize) -> usize {
        let d = self.ctx.d();
        (k + d - self.ctx.twist_index(1)) % d
    }

    /// `φ^i` starting at degree `k`.
    pub fn phi_power(&self, k: usize, i: usize) -> RMat {
        let mut m = RMat::identity(self.ctx.t(), self.ranks[k]);
        let mut deg = k;
        for _ in 0..i {
            m = self.phi[deg].try_mul(&m).expect("shapes chain");
            deg = self.next(deg);
        }
        m
    }

    /// Per-degree residual `φ^d − π_K` around the cycle; all zero iff valid.
    pub fn cycle_residuals(&self) -> Vec<RMat> {
        let t = self.ctx.t();
        (0..self.ctx.d())
            .map(|k| {
                let pi = RMat::scalar(t, self.ranks[k], &t.uniformizer());
                self.phi_power(k, self.ctx.d()).try_sub(&pi).expect("square")
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad: Vec<String> = self
            .cycle_residuals()
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(k, r)| format!("degree {k}: residual {r}"))
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(format!("φ^d ≠ π_K at {}", bad.join("; "))))
        }
    }

    /// Common rank of the blocks, if they agree.
    pub fn size(&self) -> Option<usize> {
        let n = self.ranks[0];
        self.ranks.iter().all(|&m| m == n).then_some(n)
    }

    /// Direct sum.
    pub fn sum(&self, o: &GradedPhiModule) -> GradedPhiModule {
        let t = self.ctx.t();
        let ranks: Vec<usize> = self.ranks.iter().zip(&o.ranks).map(|(a, b)| a + b).collect();
        let phi = (0..self.ctx.d())
            .map(|k| {
                let (a, b) = (&self.phi[k], &o.phi[k]);
                RMat::from_fn(t, a.rows() + b.rows(), a.cols() + b.cols(), |i, j| {
                    match (i < a.rows(), j < a.cols()) {
                        (true, true) => a.get(i, j).clone(),
                        (false, false) => b.get(i - a.rows(), j - a.cols()).clone(),
                        _ => t.zero(),
                    }
                })
            })
            .collect();
        GradedPhiModule { ctx: self.ctx.clone(), ranks, phi }
    }

    /// Transport along per-degree invertible matrices: `φ'_k = U_{k−r} φ_k U_k^{-1}`.
    pub fn change_basis(&self, u: &[RMat]) -> Result<GradedPhiModule> {
        let mut phi = Vec::with_capacity(self.ctx.d());
        for k in 0..self.ctx.d() {
            let inv = u[k].inverse()?;
            phi.push(u[self.next(k)].try_mul(&self.phi[k])?.try_mul(&inv)?);
        }
        Ok(GradedPhiModule { phi, ..self.clone() })
    }

    pub fn to_json(&self) -> Value {
        let mut ranks = Map::new();
        let mut phi = Map::new();
        for k in 0..self.ctx.d() {
            ranks.insert(k.to_string(), json!(self.ranks[k]));
            phi.insert(k.to_string(), self.phi[k].to_json());
        }
        json!({ "ranks": ranks, "phi": phi })
    }

    pub fn from_json(ctx: &Arc<TensorRingCtx>, v: &Value) -> Result<GradedPhiModule> {
        let d = ctx.d();
        let t = ctx.t();
        let bad = |msg: &str| Error::param(format!("module file: {msg}"));
        let ranks_obj = v.get("ranks").and_then(Value::as_object).ok_or_else(|| bad("missing ranks"))?;
        let phi_obj = v.get("phi").and_then(Value::as_object).ok_or_else(|| bad("missing phi"))?;
        let mut ranks = vec![0usize; d];
        for (key, n) in ranks_obj {
            let k: usize = key.parse().map_err(|_| bad("degree keys are integers"))?;
            if k >= d {
                return Err(bad("degree out of range"));
            }
            ranks[k] = n.as_u64().ok_or_else(|| bad("ranks are integers"))? as usize;
        }
        let mut phi = Vec::with_capacity(d);
        let r = ctx.twist_index(1);
        for k in 0..d {
            let rows = ranks[(k + d - r) % d];
            let m = phi_obj.get(&k.to_string());
            let mat = match m {
                None if rows == 0 || ranks[k] == 0 => RMat::zeros(t, rows, ranks[k]),
                None => return Err(bad("missing φ block")),
                Some(m) => {
                    let arr = m.as_array().ok_or_else(|| bad("φ blocks are arrays of rows"))?;
                    if arr.len() != rows {
                        return Err(bad("φ block has the wrong number of rows"));
                    }
                    let mut out = RMat::zeros(t, rows, ranks[k]);
                    for (i, row) in arr.iter().enumerate() {
                        let row = row.as_array().ok_or_else(|| bad("rows are arrays"))?;
                        if row.len() != ranks[k] {
                            return Err(bad("φ block has the wrong number of columns"));
                        }
                        for (j, e) in row.iter().enumerate() {
                            out.set(i, j, t.from_json(e)?);
                        }
                    }
                    out
                }
            };
            phi.push(mat);
        }
        GradedPhiModule::new(ctx, ranks, phi)
    }
}

/// The standard size-1 object `F(A ⊗_S T · e_h)`: `φ` is `π_K` out of degree `h + r`, else 1.
pub fn standard(ctx: &Arc<TensorRingCtx>, h: usize) -> GradedPhiModule {
    let d = ctx.d();
    let t = ctx.t();
    let jump = (h + ctx.twist_index(1)) % d;
    let phi = (0..d)
        .map(|k| RMat::scalar(t, 1, &if k == jump { t.uniformizer() } else { t.one() }))
        .collect();
    GradedPhiModule { ctx: ctx.clone(), ranks: vec![1; d], phi }
}

/// `F(A ⊗_S T · e_h)` read off from the ring: basis the Peirce generators `e_g x^i e_h`.
pub fn standard_from_ring(ctx: &Arc<TensorRingCtx>, h: usize) -> Result<GradedPhiModule> {
    let d = ctx.d();
    let t = ctx.t();
    let mut phi = Vec::with_capacity(d);
    for g in 0..d {
        let piece = crate::tensor::peirce(ctx, g, h)?;
        let lambda = if piece.x_is_iso { t.one() } else { t.uniformizer() };
        phi.push(RMat::scalar(t, 1, &lambda));
    }
    GradedPhiModule::new(ctx, vec![1; d], phi)
}

/// `ind_g(Q)` for a free module of rank `q`.
pub fn ind(ctx: &Arc<TensorRingCtx>, q: usize, g: usize) -> Result<GradedPhiModule> {
    let d = ctx.d();
    if g >= d {
        return Err(Error::param(format!("Galois index {g} out of range 0..{d}")));
    }
    let t = ctx.t();
    let phi = (0..d)
        .map(|k| RMat::scalar(t, q, &if k == g { t.uniformizer() } else { t.one() }))
        .collect();
    Ok(GradedPhiModule { ctx: ctx.clone(), ranks: vec![q; d], phi })
}

/// `deg_g(P) = P_g`, returned as its rank.
pub fn deg(p: &GradedPhiModule, g: usize) -> Result<usize> {
    p.ranks.get(g).copied().ok_or_else(|| Error::param(format!("Galois index {g} out of range")))
}

/// Reduced trace `deg_1`: rank of the degree-0 block.
pub fn trd(p: &GradedPhiModule) -> usize {
    p.ranks[0]
}

/// Trace `⊕_g deg_g`.
pub fn tr(p: &GradedPhiModule) -> usize {
    p.ranks.iter().sum()
}

/// `Ird(Q) = H(ind_1(Q))`.
pub fn ird(ctx: &Arc<TensorRingCtx>, q: usize) -> Result<AlgebraModule> {
    Ok(h_functor(&ind(ctx, q, 0)?))
}

/// A degree-preserving, `φ`-equivariant map given by per-degree blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    pub blocks: Vec<RMat>,
}

impl ModuleMap {
    pub fn is_equivariant(&self, src: &GradedPhiModule, dst: &GradedPhiModule) -> bool {
        (0..src.ctx.d()).all(|k| {
            let lhs = self.blocks[src.next(k)].try_mul(&src.phi[k]);
            let rhs = dst.phi[k].try_mul(&self.blocks[k]);
            matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b)
        })
    }

    pub fn compose(&self, after: &ModuleMap) -> Result<ModuleMap> {
        let blocks = self.blocks.iter().zip(&after.blocks).map(|(a, b)| b.try_mul(a)).collect::<Result<_>>()?;
        Ok(ModuleMap { blocks })
    }

    pub fn identity(p: &GradedPhiModule) -> ModuleMap {
        ModuleMap { blocks: p.ranks.iter().map(|&n| RMat::identity(p.ctx.t(), n)).collect() }
    }
}

/// The adjunction `α(f)_h = f ∘ φ^i` for `f : P_g → Q`, with `g = h − r·i`.
pub fn adjoint(p: &GradedPhiModule, g: usize, f: &RMat) -> Result<ModuleMap> {
    let d = p.ctx.d();
    if g >= d || f.cols() != p.ranks[g] {
        return Err(Error::param("adjoint expects a map out of deg_g(P)"));
    }
    let mut blocks = Vec::with_capacity(d);
    for h in 0..d {
        let i = (0..d)
            .find(|&i| (h + d * d - p.ctx.twist_index(i as i64)) % d == g)
            .expect("twist generates the Galois group");
        blocks.push(f.try_mul(&p.phi_power(h, i))?);
    }
    Ok(ModuleMap { blocks })
}

/// Inverse of [`adjoint`]: restriction to degree `g`.
pub fn adjoint_inverse(u: &ModuleMap, g: usize) -> RMat {
    u.blocks[g].clone()
}

/// Unit of the adjunction, `P → ind_g(deg_g P)`.
pub fn unit(p: &GradedPhiModule, g: usize) -> Result<ModuleMap> {
    adjoint(p, g, &RMat::identity(p.ctx.t(), p.ranks[g]))
}

/// Applies `ind_g` to a map of free modules.
pub fn ind_map(ctx: &Arc<TensorRingCtx>, f: &RMat) -> ModuleMap {
    ModuleMap { blocks: vec![f.clone(); ctx.d()] }
}

/// A left `A ⊗_S T`-module, free over `T` of rank `n`, given by action matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraModule {
    pub idempotents: Vec<RMat>,
    pub x: RMat,
}

impl AlgebraModule {
    pub fn rank(&self) -> usize {
        self.x.rows()
    }

    /// The action of `z ∈ A ⊗_S T`: `Σ_i Z_i X^i` with `Z_i = Σ_k w_k(z_i) E_k`.
    pub fn act(&self, z: &TensorOrderElem) -> Result<RMat> {
        let t = self.x.ctx().clone();
        let n = self.rank();
        let mut out = RMat::zeros(&t, n, n);
        let mut xpow = RMat::identity(&t, n);
        for zi in z.coeffs() {
            let mut zi_mat = RMat::zeros(&t, n, n);
            for (k, e) in self.idempotents.iter().enumerate() {
                zi_mat = zi_mat.try_add(&e.scale(&zi.component(k)))?;
            }
            out = out.try_add(&zi_mat.try_mul(&xpow)?)?;
            xpow = self.x.try_mul(&xpow)?;
        }
        Ok(out)
    }
}

/// `H`: the `T ⊗_S T`-action by `w_k` on block `k`, and `x` acting by `φ`.
/// The basis is ordered by degree.
pub fn h_functor(p: &GradedPhiModule) -> AlgebraModule {
    let t = p.ctx.t();
    let d = p.ctx.d();
    let offsets: Vec<usize> = p.ranks.iter().scan(0, |acc, &n| {
        let o = *acc;
        *acc += n;
        Some(o)
    }).collect();
    let n: usize = p.ranks.iter().sum();
    let idempotents = (0..d)
        .map(|k| {
            RMat::from_fn(t, n, n, |i, j| {
                if i == j && i >= offsets[k] && i < offsets[k] + p.ranks[k] {
                    t.one()
                } else {
                    t.zero()
                }
            })
        })
        .collect();
    let mut x = RMat::zeros(t, n, n);
    for k in 0..d {
        let target = p.next(k);
        for i in 0..p.ranks[target] {
            for j in 0..p.ranks[k] {
                x.set(offsets[target] + i, offsets[k] + j, p.phi[k].get(i, j).clone());
            }
        }
    }
    AlgebraModule { idempotents, x }
}

/// `F`: splits a module by its idempotents. The idempotents must be diagonal
/// `0/1` projections with disjoint supports summing to the identity.
pub fn f_functor(ctx: &Arc<TensorRingCtx>, m: &AlgebraModule) -> Result<GradedPhiModule> {
    let t = ctx.t();
    let d = ctx.d();
    let n = m.rank();
    if m.idempotents.len() != d {
        return Err(Error::Representation(format!("expected {d} idempotent actions")));
    }
    let mut owner = vec![None; n];
    for (k, e) in m.idempotents.iter().enumerate() {
        if e.rows() != n || e.cols() != n {
            return Err(Error::Representation("idempotent action has the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = e.get(i, j);
                let ok = if i == j { v.is_zero() || *v == t.one() } else { v.is_zero() };
                if !ok {
                    return Err(Error::Representation(format!(
                        "e_{k} is not a coordinate projection; its image is not presented as a free summand"
                    )));
                }
            }
            if *e.get(i, i) == t.one() {
                if owner[i].is_some() {
                    return Err(Error::Representation(format!("basis vector {i} lies in two graded pieces")));
                }
                owner[i] = Some(k);
            }
        }
    }
    let owner: Vec<usize> = owner
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| Error::Representation(format!("basis vector {i} lies in no graded piece"))))
        .collect::<Result<_>>()?;
    let blocks: Vec<Vec<usize>> = (0..d).map(|k| (0..n).filter(|&i| owner[i] == k).collect()).collect();
    let r = ctx.twist_index(1);
    let mut phi = Vec::with_capacity(d);
    for k in 0..d {
        let target = (k + d - r) % d;
        for &j in &blocks[k] {
            for i in 0..n {
                if owner[i] != target && !m.x.get(i, j).is_zero() {
                    return Err(Error::Validation(format!("x does not map degree {k} into degree {target}")));
                }
            }
        }
        phi.push(RMat::from_fn(t, blocks[target].len(), blocks[k].len(), |a, b| {
            m.x.get(blocks[target][a], blocks[k][b]).clone()
        }));
    }
    let p = GradedPhiModule::new(ctx, blocks.iter().map(Vec::len).collect(), phi)?;
    p.validate()?;
    Ok(p)
}

/// Selection rule for the first basis vector in the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Minimal total orbit valuation, lowest index.
    MinOrbit,
    /// Maximal total orbit valuation, highest index.
    MaxOrbit,
}

/// One step of the decomposition: a size-1 sub-object with its label and the
/// per-degree bases `B_k = [w_k | e_j, j ≠ pivot_k]` used to split it off.
#[derive(Debug, Clone)]
pub struct DecompositionStep {
    pub label: usize,
    pub bases: Vec<RMat>,
    /// Entries below the first row of the first column of `B^{-1} φ B`, which must vanish.
    pub residual: usize,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub steps: Vec<DecompositionStep>,
}

impl Decomposition {
    pub fn labels(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.label).collect()
    }

    pub fn sorted_labels(&self) -> Vec<usize> {
        let mut l = self.labels();
        l.sort_unstable();
        l
    }
}

fn vec_ord(v: &[RingElem]) -> Valuation {
    let n = v.first().map_or(0, |x| x.ctx().precision()) as i64;
    v.iter().filter_map(|x| x.ord().finite()).min().map_or(Valuation::AtLeast(n), Valuation::Finite)
}

/// Splits a projective module of size `r` into size-1 pieces, labelled by the
/// standard object `F(A ⊗_S T · e_h)` each is isomorphic to.
pub fn decompose(p: &GradedPhiModule, rule: Selection) -> Result<Decomposition> {
    p.validate()?;
    let size = p.size().ok_or_else(|| Error::Classification("blocks of unequal rank".into()))?;
    let n_prec = p.ctx.t().precision();
    if 2 * size > n_prec {
        return Err(Error::Precision(format!(
            "size {size} exceeds half the precision N = {n_prec}"
        )));
    }
    let mut steps = Vec::with_capacity(size);
    let mut cur = p.clone();
    while cur.ranks[0] > 0 {
        let (step, rest) = split_one(&cur, rule)?;
        steps.push(step);
        cur = rest;
    }
    Ok(Decomposition { steps })
}

fn split_one(p: &GradedPhiModule, rule: Selection) -> Result<(DecompositionStep, GradedPhiModule)> {
    let ctx = p.ctx.clone();
    let t = ctx.t().clone();
    let d = ctx.d();
    let n = p.ranks[0];
    // orbit of each basis vector of P_1 (degree 0)
    let mut best: Option<(usize, i64, usize)> = None; // (index, total, jump step)
    for j in 0..n {
        let mut v: Vec<RingElem> = (0..n).map(|i| if i == j { t.one() } else { t.zero() }).collect();
        let mut deg = 0;
        let mut ords = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            ords.push(vec_ord(&v).lower_bound());
            if ords.len() == d + 1 {
                break;
            }
            v = p.phi[deg].apply(&v);
            deg = p.next(deg);
        }
        let jumps: Vec<usize> = (0..d).filter(|&i| ords[i + 1] > ords[i]).collect();
        if ords[0] != 0 || ords[d] != 1 || jumps.len() != 1 {
            return Err(Error::Classification(format!(
                "orbit valuations {ords:?} do not rise by one exactly once"
            )));
        }
        let total: i64 = ords[..d].iter().sum();
        let better = match (best, rule) {
            (None, _) => true,
            (Some((_, b, _)), Selection::MinOrbit) => total < b,
            (Some((_, b, _)), Selection::MaxOrbit) => total >= b,
        };
        if better {
            best = Some((j, total, jumps[0]));
        }
    }
    let (j, _, jump) = best.expect("module is nonzero");
    // the chain restarts just after the jump, where φ^{jump+1}(e_j) is divisible by π
    let mut v: Vec<RingElem> = (0..n).map(|i| if i == j { t.one() } else { t.zero() }).collect();
    let mut deg = 0;
    for _ in 0..=jump {
        v = p.phi[deg].apply(&v);
        deg = p.next(deg);
    }
    let start = deg;
    let mut w = v.iter().map(|x| x.div_pi_pow(1)).collect::<Result<Vec<_>>>()?;
    let mut chain: Vec<Option<Vec<RingElem>>> = vec![None; d];
    for _ in 0..d {
        chain[deg] = Some(w.clone());
        w = p.phi[deg].apply(&w);
        deg = p.next(deg);
    }
    let pi = t.uniformizer();
    if w.iter().zip(chain[start].as_ref().expect("start set")).any(|(a, b)| *a != b * &pi) {
        return Err(Error::internal("φ^d is not π_K on the chosen line"));
    }
    let jump_deg = (0..d).find(|&k| p.next(k) == start).expect("φ is a permutation of degrees");
    // bases B_k = [w_k | e_i, i ≠ pivot]
    let mut bases = Vec::with_capacity(d);
    for chain_k in chain.iter().take(d) {
        let wk = chain_k.as_ref().expect("every degree visited");
        let pivot = wk
            .iter()
            .position(RingElem::is_unit)
            .ok_or_else(|| Error::Classification("chain vector is not saturated".into()))?;
        let others: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
        bases.push(RMat::from_fn(&t, n, n, |i, c| {
            if c == 0 {
                wk[i].clone()
            } else if i == others[c - 1] {
                t.one()
            } else {
                t.zero()
            }
        }));
    }
    let mut residual = 0;
    let mut rest_phi = Vec::with_capacity(d);
    let mut non_iso = 0;
    for k in 0..d {
        let new = bases[p.next(k)].inverse()?.try_mul(&p.phi[k])?.try_mul(&bases[k])?;
        let lambda = new.get(0, 0).clone();
        let want = if k == jump_deg { pi.clone() } else { t.one() };
        if lambda != want {
            residual += 1;
        }
        if !lambda.is_unit() {
            non_iso += 1;
        }
        residual += (1..n).filter(|&i| !new.get(i, 0).is_zero()).count();
        rest_phi.push(new.block(1, 1, n - 1, n - 1));
    }
    if residual != 0 {
        return Err(Error::internal(format!("split-off line is not φ-stable ({residual} residual entries)")));
    }
    if non_iso != 1 {
        return Err(Error::Classification(format!("size-1 factor has {non_iso} non-isomorphisms")));
    }
    let rest = GradedPhiModule::new(&ctx, vec![n - 1; d], rest_phi)?;
    Ok((DecompositionStep { label: start, bases, residual }, rest))
}

/// Random element of `GL_n(T)`.
pub fn random_gl<R: Rng + ?Sized>(ctx: &Arc<TensorRingCtx>, n: usize, rng: &mut R) -> RMat {
    let t = ctx.t();
    loop {
        let m = RMat::from_fn(t, n, n, |_, _| t.random(rng));
        if m.det().is_ok_and(|x| x.is_unit()) {
            return m;
        }
    }
}

/// A direct sum of standards with the given labels, scrambled by random basis changes.
pub fn random_projective<R: Rng + ?Sized>(
    ctx: &Arc<TensorRingCtx>,
    labels: &[usize],
    rng: &mut R,
) -> Result<GradedPhiModule> {
    let d = ctx.d();
    let mut p = GradedPhiModule { ctx: ctx.clone(), ranks: vec![0; d], phi: vec![RMat::zeros(ctx.t(), 0, 0); d] };
    for &h in labels {
        p = p.sum(&standard(ctx, h));
    }
    let u: Vec<RMat> = (0..d).map(|_| random_gl(ctx, labels.len(), rng)).collect();
    p.change_basis(&u)
}

/// Multiset of labels as counts per Galois index.
pub fn label_counts(labels: &[usize], d: usize) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for k in 0..d {
        m.insert(k, 0);
    }
    for &l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division_algebra::AlgebraCtx;
    use crate::local_ring::{LocalRingCtx, Mode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tensor(p: u64, d: usize, r: i64, mode: Mode) -> Arc<TensorRingCtx> {
        let s = LocalRingCtx::base(p, 1, 8, mode).unwrap();
        let t = LocalRingCtx::unramified(&s, d).unwrap();
        TensorRingCtx::new(&AlgebraCtx::new(&t, r).unwrap()).unwrap()
    }

    #[test]
    fn standards_match_the_ring() {
        for (d, r) in [(1, 0), (2, 1), (3, 1), (3, 2)] {
            let c = tensor(5, d, r, Mode::Mixed);
            for h in 0..d {
                let s = standard(&c, h);
                s.validate().unwrap();
                assert_eq!(standard_from_ring(&c, h).unwrap(), s);
            }
        }
    }

    #[test]
    fn validation_examples() {
        let c = tensor(3, 2, 1, Mode::Mixed);
        let t = c.t().clone();
        let ident = GradedPhiModule::new(&c, vec![1, 1], vec![RMat::identity(&t, 1), RMat::identity(&t, 1)]).unwrap();
        assert!(matches!(ident.validate(), Err(Error::Validation(_))));
        let u = t.from_int(2);
        let s = standard(&c, 0);
        let scaled = GradedPhiModule::new(
            &c,
            vec![1, 1],
            vec![s.phi(0).scale(&u), s.phi(1).scale(&u.inv().unwrap())],
        )
        .unwrap();
        scaled.validate().unwrap();
    }

    #[test]
    fn functors_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, d, r, mode) in [(3, 2, 1, Mode::Mixed), (5, 3, 2, Mode::Mixed), (3, 3, 1, Mode::Equal)] {
            let c = tensor(p, d, r, mode);
            for _ in 0..5 {
                let labels: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..d)).collect();
                let m = random_projective(&c, &labels, &mut rng).unwrap();
                m.validate().unwrap();
                let h = h_functor(&m);
                assert_eq!(f_functor(&c, &h).unwrap(), m);
                assert_eq!(h_functor(&f_functor(&c, &h).unwrap()), h);
                // H(M) is a module: the action is multiplicative
                let (z, y) = (TensorOrderElem::random(&c, &mut rng), TensorOrderElem::random(&c, &mut rng));
                assert_eq!(h.act(&z.mul(&y)).unwrap(), h.act(&z).unwrap().try_mul(&h.act(&y).unwrap()).unwrap());
                let dec = decompose(&m, Selection::MinOrbit).unwrap();
                let mut want = labels.clone();
                want.sort_unstable();
                assert_eq!(dec.sorted_labels(), want);
                assert_eq!(decompose(&m, Selection::MaxOrbit).unwrap().sorted_labels(), want);
            }
        }
    }

    #[test]
    fn f_rejects_non_canonical_input() {
        let c = tensor(3, 2, 1, Mode::Mixed);
        let t = c.t().clone();
        let mut h = h_functor(&standard(&c, 0));
        h.idempotents[0].set(0, 1, t.one());
        assert!(matches!(f_functor(&c, &h), Err(Error::Representation(_))));
    }

    #[test]
    fn adjunction_and_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = tensor(5, 3, 2, Mode::Mixed);
        let t = c.t().clone();
        for g in 0..3 {
            let q = 2;
            let ind_q = ind(&c, q, g).unwrap();
            ind_q.validate().unwrap();
            assert_eq!(deg(&ind_q, g).unwrap(), q);
            let p = random_projective(&c, &[0, 2], &mut rng).unwrap();
            let f = RMat::from_fn(&t, q, 2, |_, _| t.random(&mut rng));
            let a = adjoint(&p, g, &f).unwrap();
            assert!(a.is_equivariant(&p, &ind_q));
            assert_eq!(adjoint_inverse(&a, g), f);
            // ind_g(ε) ∘ η_{ind_g Q} = id
            let eta = unit(&ind_q, g).unwrap();
            assert_eq!(eta.compose(&ind_map(&c, &RMat::identity(&t, q))).unwrap(), ModuleMap::identity(&ind_q));
            // ε ∘ deg_g(η_P) = id
            assert_eq!(unit(&p, g).unwrap().blocks[g], RMat::identity(&t, 2));
        }
        for q in 1..=3 {
            let i = ird(&c, q).unwrap();
            let back = f_functor(&c, &i).unwrap();
            assert_eq!(tr(&back), 3 * q);
            assert_eq!(trd(&back), q);
        }
        // H(ind_1(T)) is the standard object of e_{σ^{-1}}
        let one = ind(&c, 1, 0).unwrap();
        let label = decompose(&one, Selection::MinOrbit).unwrap().labels();
        assert_eq!(label, vec![(3 - c.twist_index(1)) % 3]);
        assert_eq!(one, standard(&c, (3 - c.twist_index(1)) % 3));
    }

    #[test]
    fn json_round_trip() {
        let c = tensor(3, 2, 1, Mode::Equal);
        let m = random_projective(&c, &[1, 0], &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(GradedPhiModule::from_json(&c, &m.to_json()).unwrap(), m);
    }
}
