use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Env, Failure, Fault, Runner, Suite};
use crate::division_algebra::{DElem, OrderElem};
use crate::error::Result;
use crate::ff::FFElem;
use crate::local_ring::{LocalRingCtx, RingElem, Valuation};
use crate::modcat::{self, GradedPhiModule, Selection};
use crate::rmat::RMat;
use crate::tensor::{self, TensorElem, TensorOrderElem};
use crate::witt::{self, CoeffRing, WittCtx, WittVec};

pub(super) fn run_suite(suite: Suite, env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    match suite {
        Suite::Field => field(env, run),
        Suite::Ring => ring(env, run),
        Suite::Norm => norm(env, run),
        Suite::Valuation => valuation(env, run),
        Suite::Conjugation => conjugation(env, run),
        Suite::Milnor => milnor(env, run),
        Suite::Idempotents => idempotents(env, run),
        Suite::Modules => modules(env, run),
        Suite::Morita => morita(env, run),
        Suite::Witt => witt_suite(env, run),
    }
}

struct Checks {
    case: usize,
    failures: Vec<Failure>,
}

impl Checks {
    fn new(case: usize) -> Self {
        Checks { case, failures: Vec::new() }
    }

    fn eq<T: PartialEq>(&mut self, what: &str, inputs: Value, expected: &T, got: &T, show: impl Fn(&T) -> Value) {
        if expected != got {
            self.fail(what, inputs, show(expected), show(got));
        }
    }

    fn holds(&mut self, what: &str, ok: bool, inputs: Value) {
        if !ok {
            self.fail(what, inputs, json!(true), json!(false));
        }
    }

    fn fail(&mut self, what: &str, inputs: Value, expected: Value, got: Value) {
        self.failures.push(Failure {
            inputs: json!({ "case": self.case, "check": what, "values": inputs }),
            expected,
            got,
        });
    }

    fn done(self) -> Result<Vec<Failure>> {
        Ok(self.failures)
    }
}

fn rj(x: &RingElem) -> Value {
    x.to_json()
}

fn fj(x: &FFElem) -> Value {
    json!(x.coeffs())
}

fn mj(x: &RMat) -> Value {
    x.to_json()
}

fn random_ff(k: &Arc<crate::ff::FieldCtx>, rng: &mut ChaCha8Rng) -> FFElem {
    let c: Vec<u64> = (0..k.degree()).map(|_| rng.gen_range(0..k.p())).collect();
    k.elem(&c).expect("degree matches")
}

fn field(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let kt = env.t.residue_field().clone();
    let ks = env.s.residue_field().clone();
    let emb = kt.embedding_from(&ks)?;
    let p = kt.p();
    let fault = run.faulty(Fault::FieldFrobenius);
    Ok(run.cases(50, |rng, i| {
        let mut c = Checks::new(i);
        let (a, b) = (random_ff(&kt, rng), random_ff(&kt, rng));
        let inputs = json!({ "a": fj(&a), "b": fj(&b) });
        let mut ap = a.pow(p);
        if fault {
            ap = &ap + &kt.one();
        }
        c.eq("frobenius additive", inputs.clone(), &(&a + &b).pow(p), &(&ap + &b.pow(p)), fj);
        c.eq("a^|k| = a", inputs.clone(), &a, &a.pow(kt.order()), fj);
        c.eq("distributive", inputs.clone(), &(&(&a + &b) * &a), &(&(&a * &a) + &(&b * &a)), fj);
        if !a.is_zero() {
            c.eq("inverse", inputs.clone(), &kt.one(), &(&a * &a.inv()?), fj);
        }
        let (x, y) = (random_ff(&ks, rng), random_ff(&ks, rng));
        let inputs = json!({ "x": fj(&x), "y": fj(&y) });
        c.eq("embedding multiplicative", inputs.clone(), &emb.apply(&(&x * &y)), &(&emb.apply(&x) * &emb.apply(&y)), fj);
        c.eq("embedding additive", inputs, &emb.apply(&(&x + &y)), &(&emb.apply(&x) + &emb.apply(&y)), fj);
        c.done()
    }))
}

fn ring(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let t = env.t.clone();
    let d = env.params.d as i64;
    let n = env.params.n;
    let fault = run.faulty(Fault::RingInverse);
    Ok(run.cases(50, |rng, i| {
        let mut c = Checks::new(i);
        let (a, b, z) = (t.random(rng), t.random(rng), t.random(rng));
        let inputs = json!({ "a": rj(&a), "b": rj(&b), "c": rj(&z) });
        c.eq("distributive", inputs.clone(), &(&(&a + &b) * &z), &(&(&a * &z) + &(&b * &z)), rj);
        c.eq("associative", inputs.clone(), &(&(&a * &b) * &z), &(&a * &(&b * &z)), rj);
        let u = t.random_unit(rng);
        let mut inv = u.inv()?;
        if fault {
            inv = &inv + &t.uniformizer().pow(n as u64 - 1);
        }
        c.eq("inverse", json!({ "u": rj(&u) }), &t.one(), &(&u * &inv), rj);
        c.eq("sigma multiplicative", inputs.clone(), &(&a * &b).frobenius(1), &(&a.frobenius(1) * &b.frobenius(1)), rj);
        c.eq("sigma^d = id", inputs.clone(), &a, &a.frobenius(d), rj);
        c.eq("absolute frobenius lifts p-th power", inputs.clone(), &a.pow(t.p()).residue(), &a.abs_frobenius().residue(), fj);
        let (ka, kb) = (rng.gen_range(0..n / 2), rng.gen_range(0..n / 2));
        let (x, y) = (t.random_with_ord(rng, ka), t.random_with_ord(rng, kb));
        c.eq(
            "ord multiplicative",
            json!({ "x": rj(&x), "y": rj(&y) }),
            &Valuation::Finite((ka + kb) as i64),
            &(&x * &y).ord(),
            |v| json!(v.to_string()),
        );
        let (ra, rb) = (a.residue(), b.residue());
        let (ta, tb) = (t.teichmuller(&ra)?, t.teichmuller(&rb)?);
        c.eq("teichmuller multiplicative", inputs.clone(), &t.teichmuller(&(&ra * &rb))?, &(&ta * &tb), rj);
        c.eq("teichmuller section", inputs.clone(), &ra, &ta.residue(), fj);
        let na = t.norm_to_base(&a)?;
        let nb = t.norm_to_base(&b)?;
        c.eq("norm multiplicative", inputs.clone(), &t.norm_to_base(&(&a * &b))?, &(&na * &nb), rj);
        c.eq(
            "trace additive",
            inputs.clone(),
            &t.trace_to_base(&(&a + &b))?,
            &(&t.trace_to_base(&a)? + &t.trace_to_base(&b)?),
            rj,
        );
        let s = env.s.random(rng);
        c.eq("base coercion", json!({ "s": rj(&s) }), &s, &t.coerce_to_base(&t.embed_base(&s)?)?, rj);
        c.done()
    }))
}

fn norm(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let d = env.params.d;
    let fault = run.faulty(Fault::NormNrd);
    Ok(run.cases(100, |rng, i| {
        let mut c = Checks::new(i);
        let a = OrderElem::random(&env.alg, rng);
        let inputs = a.to_json();
        let (tr, n) = a.full_trace_norm()?;
        let mut nrd = a.nrd()?;
        if fault {
            nrd = &nrd + &env.s.one();
        }
        let trd = a.trd()?;
        c.eq("N = Nrd^d", inputs.clone(), &n, &nrd.pow(d as u64), rj);
        c.eq("Tr = d Trd", inputs, &tr, &trd.scale(d as i128), rj);
        c.done()
    }))
}

fn random_unit_order(env: &Env, rng: &mut ChaCha8Rng) -> OrderElem {
    loop {
        let u = OrderElem::random(&env.alg, rng);
        if u.coeffs()[0].is_unit() {
            return u;
        }
    }
}

fn valuation(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let (d, n) = (env.params.d, env.params.n);
    let fault = run.faulty(Fault::ValuationOrd);
    Ok(run.cases(100, |rng, i| {
        let mut c = Checks::new(i);
        let v = rng.gen_range(0..=d * (n - 2));
        let u = random_unit_order(env, rng);
        let b = &OrderElem::pi_d_power(&env.alg, v % d) * &u;
        let a = DElem::from_order(&b, (v / d) as i64);
        let inputs = json!({ "target": v, "a": a.to_json() });
        let mut ord = a.ord();
        if fault {
            ord = Valuation::Finite(ord.lower_bound() + 1);
        }
        let show = |x: &Valuation| json!(x.to_string());
        c.eq("ord_D", inputs.clone(), &Valuation::Finite(v as i64), &ord, show);
        let (_, nrd) = a.trd_nrd()?;
        c.eq("v_K(Nrd) = ord_D", inputs, &ord, &nrd.ord(), show);
        c.done()
    }))
}

fn conjugation(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let (d, r) = (env.params.d as i64, env.alg.r());
    let pi = DElem::pi_d(&env.alg);
    let fault = run.faulty(Fault::ConjugationTwist);
    let twist = if fault { r + 1 } else { r };
    let mut structural = Checks::new(0);
    for b in env.t.prime_basis() {
        let conj = DElem::from_t(&env.alg, &b).conjugate_by(&pi)?;
        let want = DElem::from_t(&env.alg, &b.frobenius(twist));
        structural.holds("π_D t π_D^-1 = σ^r(t)", conj.agrees_with(&want), json!({ "t": rj(&b) }));
    }
    let theta = DElem::from_t(&env.alg, &env.t.theta());
    let mut cur = theta.clone();
    for k in 1..=d {
        cur = cur.conjugate_by(&pi)?;
        let fixed = cur.agrees_with(&theta);
        structural.holds("conjugation has order exactly d on T", fixed == (k == d), json!({ "power": k }));
    }
    let mut failures = structural.done()?;
    let (cases, more) = run.cases(30, |rng, i| {
        let mut c = Checks::new(i + 1);
        let (a, b) = (env.t.random(rng), env.t.random(rng));
        let conj = |x: &RingElem| DElem::from_t(&env.alg, x).conjugate_by(&pi);
        let lhs = conj(&(&a * &b))?;
        let rhs = conj(&a)?.try_mul(&conj(&b)?)?;
        c.holds("conjugation multiplicative", lhs.agrees_with(&rhs), json!({ "a": rj(&a), "b": rj(&b) }));
        c.holds(
            "conjugation is σ^r",
            conj(&a)?.agrees_with(&DElem::from_t(&env.alg, &a.frobenius(twist))),
            json!({ "a": rj(&a) }),
        );
        c.done()
    });
    failures.extend(more);
    Ok((cases + 1, failures))
}

fn milnor(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let ctx = &env.tensor;
    let d = env.params.d;
    let fault = run.faulty(Fault::MilnorPreimage);
    let mut structural = Checks::new(0);
    let span: Vec<RMat> = tensor::spanning_set(ctx).iter().map(TensorOrderElem::embed).collect();
    let rad: Vec<RMat> = tensor::radical_spanning_set(ctx).iter().map(TensorOrderElem::embed).collect();
    let show = |x: &usize| json!(x);
    structural.eq("image dimension", json!({}), &(d * (d + 1) / 2), &tensor::residue_span_dim(&span), show);
    structural.eq("radical image dimension", json!({}), &(d * (d - 1) / 2), &tensor::residue_span_dim(&rad), show);
    for (k, m) in rad.iter().enumerate() {
        structural.holds("radical image strictly lower", tensor::is_strictly_lower_mod_m(m), json!({ "element": k }));
    }
    let mut failures = structural.done()?;
    let (cases, more) = run.cases(100, |rng, i| {
        let mut c = Checks::new(i + 1);
        let z = TensorOrderElem::random(ctx, rng);
        let m = z.embed();
        let inputs = z.to_json();
        c.holds("l(z) lower triangular mod m_T", tensor::is_lower_triangular_mod_m(&m), inputs.clone());
        let res = tensor::milnor(ctx, &m)?;
        c.holds("image is a member", res.member, inputs.clone());
        if let Some(mut pre) = res.preimage {
            if fault {
                pre = pre.add(&TensorOrderElem::one(ctx));
            }
            c.eq("l(preimage) = M", inputs.clone(), &m, &pre.embed(), mj);
        }
        if d > 1 {
            let mut bad = m.clone();
            bad.set(0, d - 1, &bad.get(0, d - 1).clone() + &env.t.one());
            let res = tensor::milnor(ctx, &bad)?;
            c.holds("unit above the diagonal is rejected", !res.member, inputs);
        }
        c.done()
    });
    failures.extend(more);
    Ok((cases + 1, failures))
}

fn idempotents(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let ctx = &env.tensor;
    let d = env.params.d;
    let r = ctx.twist_index(1);
    let tj = |x: &TensorElem| x.to_json();
    let mut c = Checks::new(0);
    let mut sum = ctx.idempotents().iter().fold(TensorElem::zero(ctx), |a, e| &a + e);
    if run.faulty(Fault::IdempotentsSum) {
        sum = sum.add(&TensorElem::right(ctx, &env.t.uniformizer().pow(env.params.n as u64 - 1)));
    }
    c.eq("sum of idempotents", json!({}), &TensorElem::one(ctx), &sum, tj);
    for g in 0..d {
        for h in 0..d {
            let want = if g == h { ctx.idempotent(g) } else { TensorElem::zero(ctx) };
            c.eq("orthogonality", json!({ "g": g, "h": h }), &want, &(&ctx.idempotent(g) * &ctx.idempotent(h)), tj);
        }
        let moved = ctx.idempotent(g).sigma_left(env.alg.r());
        c.eq("(σ⊗id) e_g = e_{gσ^-1}", json!({ "g": g }), &ctx.idempotent((g + d - r) % d), &moved, tj);
    }
    for h in 0..d {
        let mut non_iso = Vec::new();
        for g in 0..d {
            let piece = tensor::peirce(ctx, g, h)?;
            c.eq("Peirce rank", json!({ "g": g, "h": h }), &1, &piece.rank, |x| json!(x));
            if !piece.x_is_iso {
                non_iso.push((g, piece.cokernel_length));
            }
        }
        c.eq("one non-iso per column, cokernel length 1", json!({ "h": h }), &vec![((h + r) % d, 1)], &non_iso, |x| {
            json!(x)
        });
    }
    let mut failures = c.done()?;
    let (cases, more) = run.cases(20, |rng, i| {
        let mut c = Checks::new(i + 1);
        let z = TensorElem::random(ctx, rng);
        let split = (0..d).fold(TensorElem::zero(ctx), |a, g| &a + &(&ctx.idempotent(g) * &z));
        c.eq("z = Σ e_g z", z.to_json(), &z, &split, tj);
        for g in 0..d {
            let ez = &ctx.idempotent(g) * &z;
            let want = TensorElem::from_components(
                ctx,
                &(0..d).map(|k| if k == g { z.component(g) } else { env.t.zero() }).collect::<Vec<_>>(),
            );
            c.eq("e_g picks component g", z.to_json(), &want, &ez, tj);
        }
        c.done()
    });
    failures.extend(more);
    Ok((cases + 1, failures))
}

fn module_json(m: &GradedPhiModule) -> Value {
    m.to_json()
}

fn modules(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let ctx = &env.tensor;
    let (d, n) = (env.params.d, env.params.n);
    let t = env.t.clone();
    let fault = run.faulty(Fault::ModcatCycle);
    let (c1, mut failures) = run.cases(100, |rng, i| {
        let mut c = Checks::new(i);
        let size = rng.gen_range(1..=3);
        let mut labels: Vec<usize> = (0..size).map(|_| rng.gen_range(0..d)).collect();
        let mut m = modcat::random_projective(ctx, &labels, rng)?;
        if fault {
            let mut phi0 = m.phi(0).clone();
            phi0.set(0, 0, phi0.get(0, 0) + &t.uniformizer().pow(n as u64 - 1));
            let mut phi: Vec<RMat> = (0..d).map(|k| m.phi(k).clone()).collect();
            phi[0] = phi0;
            m = GradedPhiModule::new(ctx, m.ranks().to_vec(), phi)?;
        }
        let inputs = json!({ "labels": labels, "module": module_json(&m) });
        if let Err(e) = m.validate() {
            let residuals: Vec<Value> = m.cycle_residuals().iter().map(mj).collect();
            c.fail("cycle condition", inputs, json!("all residuals zero"), json!({ "error": e.to_string(), "residuals": residuals }));
            return c.done();
        }
        let h = modcat::h_functor(&m);
        let back = modcat::f_functor(ctx, &h)?;
        c.eq("F(H(P)) = P", inputs.clone(), &m, &back, module_json);
        c.holds("H(F(M)) = M", modcat::h_functor(&back) == h, inputs.clone());
        labels.sort_unstable();
        for rule in [Selection::MinOrbit, Selection::MaxOrbit] {
            let got = modcat::decompose(&m, rule)?.sorted_labels();
            c.eq("decomposition labels", inputs.clone(), &labels, &got, |x| json!(x));
        }
        c.done()
    });
    let (c2, more) = run.cases(50, |rng, i| {
        let mut c = Checks::new(100 + i);
        let labels: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..d)).collect();
        let p = modcat::random_projective(ctx, &labels, rng)?;
        let g = rng.gen_range(0..d);
        let q = rng.gen_range(1..=3);
        let ind_q = modcat::ind(ctx, q, g)?;
        let f = RMat::from_fn(&t, q, labels.len(), |_, _| t.random(rng));
        let inputs = json!({ "labels": labels, "g": g, "q": q, "f": mj(&f) });
        let a = modcat::adjoint(&p, g, &f)?;
        c.holds("α(f) is equivariant", a.is_equivariant(&p, &ind_q), inputs.clone());
        c.eq("α^-1 α = id", inputs.clone(), &f, &modcat::adjoint_inverse(&a, g), mj);
        let eta = modcat::unit(&ind_q, g)?;
        let tri = eta.compose(&modcat::ind_map(ctx, &RMat::identity(&t, q)))?;
        c.holds("ind(ε)∘η = id", tri == modcat::ModuleMap::identity(&ind_q), inputs.clone());
        let eta_p = modcat::unit(&p, g)?;
        c.eq("ε∘deg(η) = id", inputs, &RMat::identity(&t, labels.len()), &eta_p.blocks[g], mj);
        c.done()
    });
    failures.extend(more);
    Ok((c1 + c2, failures))
}

fn morita(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let ctx = &env.tensor;
    let d = env.params.d;
    let t = env.t.clone();
    let fault = run.faulty(Fault::MoritaInd);
    let (cases, failures) = run.cases(3, |_, i| {
        let q = i + 1;
        let mut c = Checks::new(i);
        let inputs = json!({ "rank": q });
        let mut ird = modcat::ird(ctx, q)?;
        if fault {
            ird.x = RMat::identity(&t, d * q);
        }
        let p = match modcat::f_functor(ctx, &ird) {
            Ok(p) => p,
            Err(e) => {
                c.fail("F(Ird(Q)) is a graded module", inputs, json!("valid"), json!(e.to_string()));
                return c.done();
            }
        };
        c.eq("rank tr(Ird Q) = d rank Q", inputs.clone(), &(d * q), &modcat::tr(&p), |x| json!(x));
        c.eq("rank trd(Ird Q) = rank Q", inputs.clone(), &q, &modcat::trd(&p), |x| json!(x));
        // the counit deg_1(ind_1 Q) → Q is the identity on the degree-1 block
        let unit = modcat::unit(&p, 0)?;
        c.eq("trd(Ird Q) ≅ Q", inputs.clone(), &RMat::identity(&t, q), &unit.blocks[0], mj);
        c.eq("F(Ird Q) = ind_1 Q", inputs.clone(), &modcat::ind(ctx, q, 0)?, &p, module_json);
        for g in 0..d {
            let i_g = (0..d).find(|&i| (d * d - ctx.twist_index(i as i64)) % d == g).expect("twist generates");
            let det = p.phi_power(0, i_g).det()?;
            let ok = det.ord().finite().is_some_and(|v| v <= q as i64);
            c.holds("φ^i : deg_1 → deg_g invertible after inverting π_K", ok, json!({ "rank": q, "g": g }));
        }
        let labels = modcat::decompose(&p, Selection::MinOrbit)?.labels();
        let want = vec![(d - ctx.twist_index(1)) % d; q];
        c.eq("Ird(T) is the standard object of e_{σ^-1}", inputs, &want, &labels, |x| json!(x));
        c.done()
    });
    Ok((cases, failures))
}

struct WittRing {
    name: String,
    ctx: Arc<WittCtx>,
    /// The maximal ideal is nonzero.
    has_m: bool,
}

fn witt_rings(env: &Env) -> Result<Vec<WittRing>> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        let s = LocalRingCtx::base(p, env.params.f, 6, env.params.mode)?;
        for (name, coeff, has_m) in [
            (format!("Z/{p}^6"), CoeffRing::IntMod { p, m: 6 }, true),
            (format!("F_{p}^2"), CoeffRing::Field { p, f: 2 }, false),
            (format!("S/pi^6 (p={p})"), CoeffRing::Local(s), true),
        ] {
            out.push(WittRing { name, ctx: WittCtx::new(&coeff, 5)?, has_m });
        }
    }
    Ok(out)
}

fn wj(x: &WittVec) -> Value {
    x.to_json()
}

fn witt_suite(env: &Env, run: &Runner) -> Result<(usize, Vec<Failure>)> {
    let rings = witt_rings(env)?;
    let fault = run.faulty(Fault::WittGhost);
    let per = 3;
    let total = rings.len() * 4 * per;
    let (c1, mut failures) = run.cases(total, |rng, i| {
        let ring = &rings[i / (4 * per)];
        let len = (i / per) % 4 + 1;
        let w = &ring.ctx;
        let p = w.p();
        let mut c = Checks::new(i);
        let (x, y) = (w.random(rng, len)?, w.random(rng, len)?);
        let inputs = json!({ "ring": ring.name, "x": wj(&x), "y": wj(&y) });
        for mul in [false, true] {
            let (coords, mut target) = x.combine_in_lift(&y, mul)?;
            if fault {
                target[0] = target[0].add(&w.lift_elem(&w.coeff_ring().one()));
            }
            c.holds("ghost is a ring map (lift)", w.ghost_of_lift(&coords) == target, inputs.clone());
        }
        c.holds("Dwork congruences", w.satisfies_dwork(&x.ghost_lift()), inputs.clone());
        let a = w.coeff_ring().random(rng);
        let b = w.coeff_ring().random(rng);
        c.eq("[a][b] = [ab]", inputs.clone(), &w.teich(&(&a * &b), len)?, &w.teich(&a, len)?.mul(&w.teich(&b, len)?)?, wj);
        let fv = x.ver()?.frob()?;
        c.eq("FV = p", inputs.clone(), &w.from_int(p as i128, len)?.mul(&x)?, &fv, wj);
        if len >= 2 {
            c.eq("F[a] = [a^p]", inputs.clone(), &w.teich(&a.pow(p), len - 1)?, &w.teich(&a, len)?.frob()?, wj);
            let (fx, fy) = (x.frob()?, y.frob()?);
            c.eq("F multiplicative", inputs.clone(), &fx.mul(&fy)?, &x.mul(&y)?.frob()?, wj);
            c.eq("F additive", inputs.clone(), &fx.add(&fy)?, &x.add(&y)?.frob()?, wj);
            let z = w.random(rng, len - 1)?;
            let lhs = x.mul(&z.ver()?)?;
            let rhs = fx.mul(&z)?.ver()?;
            c.eq("projection formula", json!({ "ring": ring.name, "x": wj(&x), "z": wj(&z) }), &lhs, &rhs, wj);
            let (defect, z) = x.frobenius_defect()?;
            c.eq(
                "F(a) ≡ R(a)^p mod pW",
                json!({ "ring": ring.name, "a": wj(&x), "z": wj(&z) }),
                &defect,
                &w.from_int(p as i128, len - 1)?.mul(&z)?,
                wj,
            );
            if ring.has_m {
                for m in 1..=4 {
                    let v = w.random_in_power(rng, len, m)?;
                    let fv = v.frob()?;
                    let ok = fv.ord().lower_bound() >= (m + 1) as i64;
                    c.holds("F(W(m^k)) ⊂ W(m^(k+1))", ok, json!({ "ring": ring.name, "k": m, "v": wj(&v), "F(v)": wj(&fv) }));
                }
            }
            if !ring.has_m {
                // over the residue field F is R composed with the coordinatewise Frobenius
                c.eq("F = R∘φ on W(k)", inputs.clone(), &x.reindex(1).restrict()?, &fx, wj);
                let f = w.coeff_ring().f();
                let back = x.reindex(len).reindex((f - len % f) % f);
                c.eq("φ^n is bijective", inputs.clone(), &x, &back, wj);
            }
        }
        c.done()
    });
    // F^{N-1} kills W_n(m) at precision N
    let (c2, more) = run.cases(3, |rng, i| {
        let p = [2u64, 3, 5][i];
        let mut c = Checks::new(total + i);
        let s = LocalRingCtx::base(p, env.params.f, 3, env.params.mode)?;
        let w = WittCtx::new(&CoeffRing::Local(s), 4)?;
        let v = w.random_in_power(rng, 4, 1)?;
        let f2 = v.frob()?.frob()?;
        c.holds("F^(N-1)(W(m)) = 0", f2.is_zero(), json!({ "p": p, "v": wj(&v), "F^2(v)": wj(&f2) }));
        c.done()
    });
    failures.extend(more);
    let (c3, more) = run.cases(6, |rng, i| {
        let p = [2u64, 3, 5][i / 2];
        let d = 2 + i % 2;
        let mut c = Checks::new(total + 3 + i);
        let s = LocalRingCtx::base(p, env.params.f, 6, env.params.mode)?;
        let t = LocalRingCtx::unramified(&s, d)?;
        for n in 1..=3 {
            let fp = witt::galois_fixed_points(&t, n)?;
            let inputs = json!({ "p": p, "d": d, "n": n });
            c.eq("|W_n(T)^σ| = |W_n(S)|", inputs.clone(), &fp.image_log, &fp.fixed_log, |x| json!(x));
            c.holds("σ fixes W_n(S)", fp.image_fixed, inputs);
        }
        let ws = WittCtx::new(&CoeffRing::Local(s.clone()), 3)?;
        let wt = WittCtx::new(&CoeffRing::Local(t.clone()), 3)?;
        let (x, y) = (ws.random(rng, 3)?, ws.random(rng, 3)?);
        let up = |v: &WittVec| v.map_coords(&wt, |a| t.embed_base(a));
        let inputs = json!({ "p": p, "d": d, "x": wj(&x), "y": wj(&y) });
        c.eq("W(S) → W(T) additive", inputs.clone(), &up(&x.add(&y)?)?, &up(&x)?.add(&up(&y)?)?, wj);
        c.eq("W(S) → W(T) multiplicative", inputs.clone(), &up(&x.mul(&y)?)?, &up(&x)?.mul(&up(&y)?)?, wj);
        let ux = up(&x)?;
        c.eq("σ fixes the image", inputs.clone(), &ux, &ux.map_coords(&wt, |a| Ok(a.frobenius(1)))?, wj);
        let z = wt.random(rng, 3)?;
        let sz = |v: &WittVec| v.map_coords(&wt, |a| Ok(a.frobenius(1)));
        c.eq("σ is a ring map on W(T)", inputs, &sz(&z.mul(&ux)?)?, &sz(&z)?.mul(&sz(&ux)?)?, wj);
        c.done()
    });
    failures.extend(more);
    Ok((c1 + c2 + c3, failures))
}
