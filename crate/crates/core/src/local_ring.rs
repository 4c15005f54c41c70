//! Truncated complete discrete valuation rings.
//!
//! Two families are supported:
//!
//! * mixed characteristic: `W(F_{p^e}) / p^N = (Z/p^N)[θ]/(G)`, with `G` the
//!   lift (coefficients in `0..p`) of the defining polynomial of `F_{p^e}`;
//! * equal characteristic: `F_{p^e}[t]/(t^N)`.
//!
//! A base ring `S` has residue field `F_q`, `q = p^f`. Its unramified extension
//! `T` of degree `d` has residue field `F_{q^d}` and carries the relative
//! Frobenius `σ` (the lift of `x ↦ x^q`), which generates `Gal(T/S)`.
//!
//! Every element is a flat coefficient vector split into `slots` blocks of
//! `width` entries: one block over `Z/p^N` in mixed mode, `N` blocks (one per
//! power of `t`) over `F_p` in equal mode. All maps that fix the prime ring
//! (`σ`, the absolute Frobenius, the embedding of `S`) act blockwise through
//! one [`ZMat`].

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{add_mod, mul_mod, neg_mod, sub_mod, symmetric, val_p};
use crate::error::{Error, Result};
use crate::ff::{frobenius_matrix, FFElem, FieldCtx};
use crate::zmod::ZMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Mixed,
    Equal,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixed" => Ok(Mode::Mixed),
            "equal" => Ok(Mode::Equal),
            other => Err(Error::param(format!("unknown mode {other:?}"))),
        }
    }
}

/// A valuation observed at finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Valuation {
    Finite(i64),
    /// The element vanishes at the working precision; its valuation is at least this.
    AtLeast(i64),
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn lower_bound(self) -> i64 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

pub struct LocalRingCtx {
    mode: Mode,
    p: u64,
    f: usize,
    d: usize,
    n: usize,
    residue: Arc<FieldCtx>,
    base_residue: Arc<FieldCtx>,
    width: usize,
    slots: usize,
    modulus: u64,
    /// Mixed mode: monic `G`, length `width + 1`.
    gpoly: Vec<u64>,
    /// `σ^k` for `k < d`.
    sigma: Vec<ZMat>,
    /// Absolute Frobenius (lift of `x ↦ x^p`, fixing `t` in equal mode).
    frob: ZMat,
    base: Option<Arc<LocalRingCtx>>,
    /// Base coordinates -> coordinates, `width x f`.
    embed: ZMat,
    coerce_rows: Vec<usize>,
    coerce_inv: ZMat,
    /// Inverse of the matrix of the `S`-basis `θ^j` (columns `j*f + a` hold `β^a θ^j`).
    scoords_inv: ZMat,
}

impl PartialEq for LocalRingCtx {
    fn eq(&self, o: &Self) -> bool {
        (self.mode, self.p, self.f, self.d, self.n) == (o.mode, o.p, o.f, o.d, o.n)
    }
}

impl fmt::Debug for LocalRingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalRingCtx({:?}, p={}, f={}, d={}, N={})",
            self.mode, self.p, self.f, self.d, self.n
        )
    }
}

fn newton_steps(n: usize) -> usize {
    (usize::BITS - n.max(1).leading_zeros()) as usize + 1
}

impl LocalRingCtx {
    /// The base ring `S` with residue field `F_{p^f}` at precision `N >= 2`.
    pub fn base(p: u64, f: usize, n: usize, mode: Mode) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::param(format!("precision N = {n} must be at least 2")));
        }
        Self::base_any_precision(p, f, n, mode)
    }

    pub(crate) fn base_any_precision(p: u64, f: usize, n: usize, mode: Mode) -> Result<Arc<Self>> {
        if f == 0 {
            return Err(Error::param("residue degree f must be at least 1"));
        }
        if n == 0 {
            return Err(Error::param("precision must be positive"));
        }
        let residue = FieldCtx::new(p, f)?;
        let width = f;
        let (slots, modulus) = match mode {
            Mode::Mixed => {
                let m = p
                    .checked_pow(n as u32)
                    .filter(|&m| m < (1u64 << 62))
                    .ok_or_else(|| Error::param(format!("modulus {p}^{n} exceeds the 62-bit budget")))?;
                (1, m)
            }
            Mode::Equal => {
                if n > 1 << 12 {
                    return Err(Error::param(format!("precision {n} too large")));
                }
                (n, p)
            }
        };
        let id = ZMat::identity(width, p, modulus);
        let raw = Arc::new(LocalRingCtx {
            mode,
            p,
            f,
            d: 1,
            n,
            base_residue: residue.clone(),
            residue: residue.clone(),
            width,
            slots,
            modulus,
            gpoly: residue.defining_poly().to_vec(),
            sigma: vec![id.clone()],
            frob: id.clone(),
            base: None,
            embed: id.clone(),
            coerce_rows: (0..width).collect(),
            coerce_inv: id.clone(),
            scoords_inv: id,
        });
        let frob = raw.absolute_frobenius_matrix()?;
        Ok(Arc::new(LocalRingCtx { frob, ..raw.shallow() }))
    }

    /// The unramified extension `T` of degree `d` over the base ring `s`.
    pub fn unramified(s: &Arc<Self>, d: usize) -> Result<Arc<Self>> {
        if s.base.is_some() {
            return Err(Error::param("unramified extensions are built over a base ring"));
        }
        if d == 0 {
            return Err(Error::param("relative degree d must be at least 1"));
        }
        let (p, f, n) = (s.p, s.f, s.n);
        if d == 1 {
            return Ok(Arc::new(LocalRingCtx { base: Some(s.clone()), ..s.shallow() }));
        }
        let residue = FieldCtx::new(p, f * d)?;
        let width = f * d;
        let id = ZMat::identity(width, p, s.modulus);
        let raw = Arc::new(LocalRingCtx {
            mode: s.mode,
            p,
            f,
            d,
            n,
            base_residue: s.residue.clone(),
            residue: residue.clone(),
            width,
            slots: s.slots,
            modulus: s.modulus,
            gpoly: residue.defining_poly().to_vec(),
            sigma: vec![id.clone()],
            frob: id.clone(),
            base: Some(s.clone()),
            embed: ZMat::zeros(width, f, p, s.modulus),
            coerce_rows: Vec::new(),
            coerce_inv: id.clone(),
            scoords_inv: id,
        });

        // Relative Frobenius.
        let sigma1 = match s.mode {
            Mode::Mixed => {
                let q = residue.p().pow(f as u32);
                let start = raw.theta().pow(q);
                let root = raw.newton_root(&raw.gpoly, start)?;
                raw.power_columns(&root)
            }
            Mode::Equal => {
                let m = frobenius_matrix(&residue, f as i64);
                ZMat::from_columns(
                    &(0..width).map(|j| (0..width).map(|i| m[i][j]).collect()).collect::<Vec<_>>(),
                    width,
                    p,
                    s.modulus,
                )
            }
        };
        let mut sigma = vec![ZMat::identity(width, p, s.modulus)];
        for k in 1..d {
            sigma.push(sigma1.mul(&sigma[k - 1]));
        }
        let full = sigma1.mul(&sigma[d - 1]);
        if full != sigma[0] {
            return Err(Error::internal("relative Frobenius does not have order dividing d"));
        }
        let frob = raw.absolute_frobenius_matrix()?;

        // Embedding of S.
        let field_emb = residue.embedding_from(&s.residue)?;
        let embed = match s.mode {
            Mode::Mixed => {
                let start = raw.lift_residue(&field_emb.image_of_generator());
                let beta = raw.newton_root(&s.gpoly, start)?;
                let mut cols = Vec::with_capacity(f);
                let mut pow = raw.one();
                for _ in 0..f {
                    cols.push(pow.c.clone());
                    pow = &pow * &beta;
                }
                ZMat::from_columns(&cols, width, p, s.modulus)
            }
            Mode::Equal => {
                let m = field_emb.matrix();
                let cols: Vec<Vec<u64>> = (0..f).map(|j| (0..width).map(|i| m[i][j]).collect()).collect();
                ZMat::from_columns(&cols, width, p, s.modulus)
            }
        };
        let coerce_rows = independent_rows(&embed);
        let coerce_inv = embed
            .select_rows(&coerce_rows)
            .inverse()
            .ok_or_else(|| Error::internal("embedding of the base ring is not split"))?;

        let staged = Arc::new(LocalRingCtx { sigma, frob, embed, coerce_rows, coerce_inv, ..raw.shallow() });
        // S-basis θ^j: columns j*f + a hold the coordinates of β^a θ^j.
        let mut cols = Vec::with_capacity(width);
        let mut theta_pow = staged.one();
        for _ in 0..d {
            for a in 0..f {
                let mut e = vec![0u64; f];
                e[a] = 1;
                let beta_a = pad_slots(&staged.embed.apply(&e), width, staged.slots);
                let prod = &staged.wrap(beta_a) * &theta_pow;
                // constant in t: first block suffices
                cols.push(prod.c[..width].to_vec());
            }
            theta_pow = &theta_pow * &staged.theta();
        }
        let scoords_inv = ZMat::from_columns(&cols, width, p, s.modulus)
            .inverse()
            .ok_or_else(|| Error::internal("θ-powers do not form an S-basis"))?;
        Ok(Arc::new(LocalRingCtx { scoords_inv, ..staged.shallow() }))
    }

    /// The same ring rebuilt at another precision; elements correspond coefficientwise.
    pub fn with_precision(&self, n: usize) -> Result<Arc<Self>> {
        match &self.base {
            None => Self::base_any_precision(self.p, self.f, n, self.mode),
            Some(s) => {
                let s2 = Self::base_any_precision(s.p, s.f, n, s.mode)?;
                Self::unramified(&s2, self.d)
            }
        }
    }

    fn shallow(&self) -> LocalRingCtx {
        LocalRingCtx {
            mode: self.mode,
            p: self.p,
            f: self.f,
            d: self.d,
            n: self.n,
            residue: self.residue.clone(),
            base_residue: self.base_residue.clone(),
            width: self.width,
            slots: self.slots,
            modulus: self.modulus,
            gpoly: self.gpoly.clone(),
            sigma: self.sigma.clone(),
            frob: self.frob.clone(),
            base: self.base.clone(),
            embed: self.embed.clone(),
            coerce_rows: self.coerce_rows.clone(),
            coerce_inv: self.coerce_inv.clone(),
            scoords_inv: self.scoords_inv.clone(),
        }
    }

    fn absolute_frobenius_matrix(self: &Arc<Self>) -> Result<ZMat> {
        match self.mode {
            Mode::Mixed => {
                if self.width == 1 {
                    return Ok(ZMat::identity(1, self.p, self.modulus));
                }
                let start = self.theta().pow(self.p);
                let root = self.newton_root(&self.gpoly, start)?;
                Ok(self.power_columns(&root))
            }
            Mode::Equal => {
                let m = frobenius_matrix(&self.residue, 1);
                let cols: Vec<Vec<u64>> =
                    (0..self.width).map(|j| (0..self.width).map(|i| m[i][j]).collect()).collect();
                Ok(ZMat::from_columns(&cols, self.width, self.p, self.modulus))
            }
        }
    }

    /// Matrix whose column `j` is the coordinate vector of `z^j` (mixed mode).
    fn power_columns(self: &Arc<Self>, z: &RingElem) -> ZMat {
        let mut cols = Vec::with_capacity(self.width);
        let mut pow = self.one();
        for _ in 0..self.width {
            cols.push(pow.c.clone());
            pow = &pow * z;
        }
        ZMat::from_columns(&cols, self.width, self.p, self.modulus)
    }

    /// Newton iteration `z <- z - P(z)/P'(z)` for a prime-ring polynomial `P`.
    fn newton_root(self: &Arc<Self>, poly: &[u64], start: RingElem) -> Result<RingElem> {
        let deriv: Vec<u64> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.modulus, self.modulus))
            .collect();
        let mut z = start;
        for _ in 0..newton_steps(self.n) {
            let value = self.eval_prime_poly(poly, &z);
            let slope = self.eval_prime_poly(&deriv, &z);
            let inv = slope
                .inv()
                .map_err(|_| Error::internal("Newton step hit a non-unit derivative"))?;
            z = &z - &(&value * &inv);
        }
        if !self.eval_prime_poly(poly, &z).is_zero() {
            return Err(Error::internal("Newton iteration did not converge"));
        }
        Ok(z)
    }

    fn eval_prime_poly(self: &Arc<Self>, poly: &[u64], z: &RingElem) -> RingElem {
        poly.iter().rev().fold(self.zero(), |acc, &c| &(&acc * z) + &self.prime_const(c))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue degree of the base ring.
    pub fn f(&self) -> usize {
        self.f
    }

    /// Relative degree over the base ring (1 for the base itself).
    pub fn d(&self) -> usize {
        self.d
    }

    /// Precision exponent `N`.
    pub fn precision(&self) -> usize {
        self.n
    }

    pub fn residue_field(&self) -> &Arc<FieldCtx> {
        &self.residue
    }

    pub fn base_ring(&self) -> Option<&Arc<LocalRingCtx>> {
        self.base.as_ref()
    }

    pub fn is_base(&self) -> bool {
        self.base.is_none()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn slots(&self) -> usize {
        self.slots
    }

    /// Coefficient modulus: `p^N` (mixed) or `p` (equal).
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn defining_poly(&self) -> &[u64] {
        &self.gpoly
    }

    pub(crate) fn sigma_matrix(&self, k: i64) -> &ZMat {
        &self.sigma[k.rem_euclid(self.d as i64) as usize]
    }

    pub(crate) fn embed_matrix(&self) -> &ZMat {
        &self.embed
    }

    pub(crate) fn wrap(self: &Arc<Self>, c: Vec<u64>) -> RingElem {
        debug_assert_eq!(c.len(), self.width * self.slots);
        RingElem { ctx: self.clone(), c }
    }

    /// Apply a blockwise linear map to a flat coefficient vector.
    pub(crate) fn block_map(&self, m: &ZMat, c: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(m.rows * self.slots);
        for s in 0..self.slots {
            out.extend(m.apply(&c[s * m.cols..(s + 1) * m.cols]));
        }
        out
    }

    pub fn zero(self: &Arc<Self>) -> RingElem {
        self.wrap(vec![0; self.width * self.slots])
    }

    pub fn one(self: &Arc<Self>) -> RingElem {
        self.prime_const(1)
    }

    fn prime_const(self: &Arc<Self>, c: u64) -> RingElem {
        let mut v = vec![0; self.width * self.slots];
        v[0] = c % self.modulus;
        self.wrap(v)
    }

    pub fn from_int(self: &Arc<Self>, n: i128) -> RingElem {
        self.prime_const(n.rem_euclid(self.modulus as i128) as u64)
    }

    /// The generator `θ` of the ring over its prime ring (`th` in expressions).
    pub fn theta(self: &Arc<Self>) -> RingElem {
        let mut v = vec![0; self.width * self.slots];
        let g = self.residue.gen_vec();
        match self.mode {
            Mode::Mixed if self.width == 1 => v[0] = neg_mod(self.gpoly[0], self.modulus),
            Mode::Mixed => v[1] = 1,
            Mode::Equal => v[..self.width].copy_from_slice(&g),
        }
        self.wrap(v)
    }

    /// The uniformizer `p` (mixed) or `t` (equal).
    pub fn uniformizer(self: &Arc<Self>) -> RingElem {
        match self.mode {
            Mode::Mixed => self.prime_const(self.p),
            Mode::Equal => {
                let mut v = vec![0; self.width * self.slots];
                if self.slots > 1 {
                    v[self.width] = 1;
                }
                self.wrap(v)
            }
        }
    }

    /// Element from a flat coefficient vector (see the module docs for layout).
    pub fn elem(self: &Arc<Self>, coeffs: &[u64]) -> Result<RingElem> {
        let len = self.width * self.slots;
        if coeffs.len() > len {
            return Err(Error::param(format!("{} coefficients exceed ring width {len}", coeffs.len())));
        }
        let mut c = vec![0; len];
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            *dst = src % self.modulus;
        }
        Ok(self.wrap(c))
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> RingElem {
        let c = (0..self.width * self.slots).map(|_| rng.gen_range(0..self.modulus)).collect();
        self.wrap(c)
    }

    /// Random element of valuation exactly `k` (requires `k < N`).
    pub fn random_with_ord<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R, k: usize) -> RingElem {
        loop {
            let u = self.random(rng);
            if u.ord() == Valuation::Finite(0) {
                return u.mul_pi_pow(k);
            }
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> RingElem {
        self.random_with_ord(rng, 0)
    }

    /// Coefficientwise lift of a residue class (digits in `0..p`).
    pub fn lift_residue(self: &Arc<Self>, a: &FFElem) -> RingElem {
        let mut v = vec![0; self.width * self.slots];
        v[..self.width].copy_from_slice(a.coeffs());
        self.wrap(v)
    }

    /// Teichmüller lift: the unique lift fixed by `y ↦ y^{|k|}`.
    pub fn teichmuller(self: &Arc<Self>, a: &FFElem) -> Result<RingElem> {
        if **a.ctx() != *self.residue {
            return Err(Error::param("residue field mismatch"));
        }
        let q = self.residue.order();
        let mut y = self.lift_residue(a);
        for _ in 0..=self.n + 1 {
            let next = y.pow(q);
            if next == y {
                return Ok(y);
            }
            y = next;
        }
        Err(Error::internal("Teichmüller iteration did not stabilize"))
    }

    /// Image of a base-ring element.
    pub fn embed_base(self: &Arc<Self>, s: &RingElem) -> Result<RingElem> {
        match &self.base {
            None if *s.ctx == **self => Ok(self.wrap(s.c.clone())),
            Some(b) if *s.ctx == **b => Ok(self.wrap(self.block_map(&self.embed, &s.c))),
            _ => Err(Error::param("element does not belong to the base ring")),
        }
    }

    /// Inverse of [`embed_base`](Self::embed_base); fails if `x` is not in the image.
    pub fn coerce_to_base(self: &Arc<Self>, x: &RingElem) -> Result<RingElem> {
        let Some(base) = &self.base else {
            return Ok(x.clone());
        };
        let mut s = Vec::with_capacity(self.f * self.slots);
        for slot in 0..self.slots {
            let block = &x.c[slot * self.width..(slot + 1) * self.width];
            let picked: Vec<u64> = self.coerce_rows.iter().map(|&r| block[r]).collect();
            s.extend(self.coerce_inv.apply(&picked));
        }
        let s = base.wrap(s);
        if self.embed_base(&s)? != *x {
            return Err(Error::Validation("element is not in the image of the base ring".into()));
        }
        Ok(s)
    }

    /// Coordinates over the base ring in the basis `1, θ, …, θ^{d-1}`.
    pub fn base_coords(self: &Arc<Self>, x: &RingElem) -> Vec<RingElem> {
        let Some(base) = &self.base else {
            return vec![x.clone()];
        };
        let (f, d) = (self.f, self.d);
        let mut per_j = vec![Vec::with_capacity(f * self.slots); d];
        for slot in 0..self.slots {
            let y = self.scoords_inv.apply(&x.c[slot * self.width..(slot + 1) * self.width]);
            for (j, out) in per_j.iter_mut().enumerate() {
                out.extend_from_slice(&y[j * f..(j + 1) * f]);
            }
        }
        per_j.into_iter().map(|c| base.wrap(c)).collect()
    }

    /// Relative trace `Σ σ^k(x)` in the base ring.
    pub fn trace_to_base(self: &Arc<Self>, x: &RingElem) -> Result<RingElem> {
        let t = (0..self.d as i64).fold(self.zero(), |acc, k| &acc + &x.frobenius(k));
        self.coerce_to_base(&t).map_err(|_| Error::internal("trace is not Galois invariant"))
    }

    /// Relative norm `Π σ^k(x)` in the base ring.
    pub fn norm_to_base(self: &Arc<Self>, x: &RingElem) -> Result<RingElem> {
        let t = (0..self.d as i64).fold(self.one(), |acc, k| &acc * &x.frobenius(k));
        self.coerce_to_base(&t).map_err(|_| Error::internal("norm is not Galois invariant"))
    }

    /// Basis of the ring over its prime ring: `θ^k` (mixed) and `θ^k` constants (equal).
    pub fn prime_basis(self: &Arc<Self>) -> Vec<RingElem> {
        (0..self.width)
            .map(|k| {
                let mut v = vec![0; self.width * self.slots];
                v[k] = 1;
                self.wrap(v)
            })
            .collect()
    }

    pub fn from_json(self: &Arc<Self>, v: &Value) -> Result<RingElem> {
        let bad = || Error::param(format!("malformed ring element {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        match self.mode {
            Mode::Mixed => {
                let c: Vec<u64> = arr
                    .iter()
                    .map(|x| {
                        x.as_i64()
                            .map(|i| (i as i128).rem_euclid(self.modulus as i128) as u64)
                            .ok_or_else(bad)
                    })
                    .collect::<Result<_>>()?;
                self.elem(&c)
            }
            Mode::Equal => {
                if arr.len() > self.slots {
                    return Err(bad());
                }
                let mut c = vec![0; self.width * self.slots];
                for (s, block) in arr.iter().enumerate() {
                    let block = block.as_array().ok_or_else(bad)?;
                    if block.len() > self.width {
                        return Err(bad());
                    }
                    for (k, x) in block.iter().enumerate() {
                        let i = x.as_i64().ok_or_else(bad)?;
                        c[s * self.width + k] = (i as i128).rem_euclid(self.p as i128) as u64;
                    }
                }
                Ok(self.wrap(c))
            }
        }
    }
}

/// Greedy choice of `cols` rows that are independent modulo `p`.
fn independent_rows(m: &ZMat) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for r in 0..m.rows {
        let mut trial = chosen.clone();
        trial.push(r);
        if m.select_rows(&trial).rank_mod_p() == trial.len() {
            chosen = trial;
        }
        if chosen.len() == m.cols {
            break;
        }
    }
    chosen
}

fn pad_slots(c: &[u64], width: usize, slots: usize) -> Vec<u64> {
    let mut v = vec![0; width * slots];
    v[..c.len()].copy_from_slice(c);
    v
}

/// An element of a truncated local ring.
#[derive(Clone)]
pub struct RingElem {
    ctx: Arc<LocalRingCtx>,
    c: Vec<u64>,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && *self.ctx == *other.ctx
    }
}

impl Eq for RingElem {}

impl RingElem {
    pub fn ctx(&self) -> &Arc<LocalRingCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.ord() == Valuation::Finite(0)
    }

    fn same_ring(&self, o: &RingElem) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &o.ctx) || *self.ctx == *o.ctx {
            Ok(())
        } else {
            Err(Error::param(format!("ring mismatch: {:?} vs {:?}", self.ctx, o.ctx)))
        }
    }

    pub fn try_add(&self, o: &RingElem) -> Result<RingElem> {
        self.same_ring(o)?;
        let m = self.ctx.modulus;
        Ok(self.ctx.wrap(self.c.iter().zip(&o.c).map(|(&a, &b)| add_mod(a, b, m)).collect()))
    }

    pub fn try_sub(&self, o: &RingElem) -> Result<RingElem> {
        self.same_ring(o)?;
        let m = self.ctx.modulus;
        Ok(self.ctx.wrap(self.c.iter().zip(&o.c).map(|(&a, &b)| sub_mod(a, b, m)).collect()))
    }

    pub fn try_mul(&self, o: &RingElem) -> Result<RingElem> {
        self.same_ring(o)?;
        let ctx = &self.ctx;
        let (w, m) = (ctx.width, ctx.modulus);
        let out = match ctx.mode {
            Mode::Mixed => {
                let mut prod = vec![0u64; 2 * w - 1];
                for (i, &x) in self.c.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in o.c.iter().enumerate() {
                        prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, m), m);
                    }
                }
                for k in (w..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    for j in 0..w {
                        prod[k - w + j] = sub_mod(prod[k - w + j], mul_mod(c, ctx.gpoly[j], m), m);
                    }
                }
                prod.truncate(w);
                prod
            }
            Mode::Equal => {
                let n = ctx.slots;
                let mut out = vec![0u64; w * n];
                for s1 in 0..n {
                    let a = &self.c[s1 * w..(s1 + 1) * w];
                    if a.iter().all(|&x| x == 0) {
                        continue;
                    }
                    for s2 in 0..n - s1 {
                        let b = &o.c[s2 * w..(s2 + 1) * w];
                        if b.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let prod = ctx.residue.mul_v(a, b);
                        let dst = &mut out[(s1 + s2) * w..(s1 + s2 + 1) * w];
                        for (d, x) in dst.iter_mut().zip(prod) {
                            *d = add_mod(*d, x, m);
                        }
                    }
                }
                out
            }
        };
        Ok(ctx.wrap(out))
    }

    pub fn neg(&self) -> RingElem {
        let m = self.ctx.modulus;
        self.ctx.wrap(self.c.iter().map(|&x| neg_mod(x, m)).collect())
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        let mut acc = self.ctx.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Multiplication by a prime-ring integer.
    pub fn scale(&self, k: i128) -> RingElem {
        let m = self.ctx.modulus;
        let k = k.rem_euclid(m as i128) as u64;
        self.ctx.wrap(self.c.iter().map(|&x| mul_mod(x, k, m)).collect())
    }

    /// Largest `k <= N` with `x ∈ π^k R`.
    pub fn ord(&self) -> Valuation {
        let ctx = &self.ctx;
        match ctx.mode {
            Mode::Mixed => {
                let v = self.c.iter().filter(|&&x| x != 0).map(|&x| val_p(x, ctx.p, ctx.n)).min();
                match v {
                    Some(v) => Valuation::Finite(v as i64),
                    None => Valuation::AtLeast(ctx.n as i64),
                }
            }
            Mode::Equal => {
                let w = ctx.width;
                match (0..ctx.slots).find(|&s| self.c[s * w..(s + 1) * w].iter().any(|&x| x != 0)) {
                    Some(s) => Valuation::Finite(s as i64),
                    None => Valuation::AtLeast(ctx.n as i64),
                }
            }
        }
    }

    pub fn mul_pi_pow(&self, k: usize) -> RingElem {
        let ctx = &self.ctx;
        match ctx.mode {
            Mode::Mixed => {
                if k >= ctx.n {
                    return ctx.zero();
                }
                self.scale(ctx.p.pow(k as u32) as i128)
            }
            Mode::Equal => {
                let w = ctx.width;
                let mut v = vec![0; w * ctx.slots];
                for s in 0..ctx.slots.saturating_sub(k) {
                    v[(s + k) * w..(s + k + 1) * w].copy_from_slice(&self.c[s * w..(s + 1) * w]);
                }
                ctx.wrap(v)
            }
        }
    }

    /// Reduction modulo `π^k` (digits at and beyond `π^k` cleared).
    pub fn truncate(&self, k: usize) -> RingElem {
        let ctx = &self.ctx;
        if k >= ctx.n {
            return self.clone();
        }
        match ctx.mode {
            Mode::Mixed => {
                let pk = ctx.p.pow(k as u32);
                ctx.wrap(self.c.iter().map(|&x| x % pk).collect())
            }
            Mode::Equal => {
                let mut c = self.c.clone();
                c[k * ctx.width..].iter_mut().for_each(|x| *x = 0);
                ctx.wrap(c)
            }
        }
    }

    /// Exact division by `π^k`; the top `k` digits of the quotient are unknown and set to zero.
    pub fn div_pi_pow(&self, k: usize) -> Result<RingElem> {
        if k == 0 {
            return Ok(self.clone());
        }
        let ctx = &self.ctx;
        if self.ord().lower_bound() < k as i64 {
            return Err(Error::NotInvertible { ord: self.ord().lower_bound() as usize });
        }
        match ctx.mode {
            Mode::Mixed => {
                if k >= ctx.n {
                    return Ok(ctx.zero());
                }
                let pk = ctx.p.pow(k as u32);
                Ok(ctx.wrap(self.c.iter().map(|&x| x / pk).collect()))
            }
            Mode::Equal => {
                let w = ctx.width;
                let mut v = vec![0; w * ctx.slots];
                for s in k..ctx.slots {
                    v[(s - k) * w..(s - k + 1) * w].copy_from_slice(&self.c[s * w..(s + 1) * w]);
                }
                Ok(ctx.wrap(v))
            }
        }
    }

    /// Reduction modulo the maximal ideal.
    pub fn residue(&self) -> FFElem {
        let ctx = &self.ctx;
        let c = self.c[..ctx.width].iter().map(|&x| x % ctx.p).collect();
        ctx.residue.wrap(c)
    }

    /// Inverse of a unit: residue inverse refined by `b <- b(2 - xb)`.
    pub fn inv(&self) -> Result<RingElem> {
        match self.ord() {
            Valuation::Finite(0) => {}
            v => return Err(Error::NotInvertible { ord: v.lower_bound() as usize }),
        }
        let ctx = &self.ctx;
        let r = self.residue().inv()?;
        let mut b = ctx.lift_residue(&r);
        let two = ctx.from_int(2);
        for _ in 0..newton_steps(ctx.n) {
            b = &b * &(&two - &(self * &b));
        }
        debug_assert!((self * &b) == ctx.one());
        Ok(b)
    }

    /// `σ^k(x)` with `k` read modulo `d`.
    pub fn frobenius(&self, k: i64) -> RingElem {
        let k = k.rem_euclid(self.ctx.d as i64);
        if k == 0 {
            return self.clone();
        }
        self.ctx.wrap(self.ctx.block_map(self.ctx.sigma_matrix(k), &self.c))
    }

    /// The absolute Frobenius lift (`x ≡ x^p`), fixing `t` in equal mode.
    pub fn abs_frobenius(&self) -> RingElem {
        self.ctx.wrap(self.ctx.block_map(&self.ctx.frob, &self.c))
    }

    pub fn to_json(&self) -> Value {
        let ctx = &self.ctx;
        match ctx.mode {
            Mode::Mixed => json!(self.c),
            Mode::Equal => Value::Array(
                (0..ctx.slots).map(|s| json!(self.c[s * ctx.width..(s + 1) * ctx.width])).collect(),
            ),
        }
    }

    /// Human-readable expression in `th` (and `t`), with symmetric integer residues.
    pub fn to_expr(&self) -> String {
        self.to_expr_at(self.ctx.n)
    }

    /// As [`RingElem::to_expr`] for the element known modulo `π^k`.
    pub fn to_expr_at(&self, k: usize) -> String {
        let ctx = &self.ctx;
        let k = k.min(ctx.n);
        let modulus = match ctx.mode {
            Mode::Mixed => ctx.p.pow(k as u32),
            Mode::Equal => ctx.modulus,
        };
        let this = self.truncate(k);
        let mut terms: Vec<String> = Vec::new();
        for s in 0..ctx.slots {
            for k in 0..ctx.width {
                let raw = this.c[s * ctx.width + k];
                if raw == 0 {
                    continue;
                }
                let c = symmetric(raw, modulus);
                let mut mono = Vec::new();
                if k == 1 {
                    mono.push("th".to_string());
                } else if k > 1 {
                    mono.push(format!("th^{k}"));
                }
                if s == 1 {
                    mono.push("t".to_string());
                } else if s > 1 {
                    mono.push(format!("t^{s}"));
                }
                let body = mono.join("*");
                let term = match (c, body.is_empty()) {
                    (c, true) => c.to_string(),
                    (1, false) => body,
                    (-1, false) => format!("-{body}"),
                    (c, false) => format!("{c}*{body}"),
                };
                terms.push(term);
            }
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

macro_rules! ring_binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $f(self, rhs: &RingElem) -> RingElem {
                self.$m(rhs).expect("ring mismatch")
            }
        }
        impl std::ops::$tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $f(self, rhs: RingElem) -> RingElem {
                (&self).$m(&rhs).expect("ring mismatch")
            }
        }
    };
}

ring_binop!(Add, add, try_add);
ring_binop!(Sub, sub, try_sub);
ring_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

impl std::ops::Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(&self)
    }
}
