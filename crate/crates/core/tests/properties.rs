use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hasse_order::division_algebra::{AlgebraCtx, OrderElem};
use hasse_order::expr;
use hasse_order::ff::FieldCtx;
use hasse_order::local_ring::{LocalRingCtx, Mode};
use hasse_order::modcat;
use hasse_order::tensor::TensorRingCtx;
use hasse_order::witt::{CoeffRing, WittCtx};

fn algebra(p: u64, d: usize, r: i64, mode: Mode) -> Arc<AlgebraCtx> {
    let s = LocalRingCtx::base(p, 1, 6, mode).unwrap();
    AlgebraCtx::new(&LocalRingCtx::unramified(&s, d).unwrap(), r).unwrap()
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Mixed), Just(Mode::Equal)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_frobenius_has_order_degree(p in prop_oneof![Just(2u64), Just(3), Just(5)], m in 1usize..5, c in prop::collection::vec(0u64..5, 4)) {
        let k = FieldCtx::new(p, m).unwrap();
        let coeffs: Vec<u64> = c.iter().take(m).map(|x| x % p).collect();
        let a = k.elem(&coeffs).unwrap();
        prop_assert_eq!(a.pow(k.order()), a.clone());
        prop_assert_eq!(a.frobenius(m as i64), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.try_mul(&a.inv().unwrap()).unwrap(), k.one());
        }
    }

    #[test]
    fn ring_elements_print_and_parse_back(seed in any::<u64>(), mode in mode()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = LocalRingCtx::base(3, 1, 5, mode).unwrap();
        let t = LocalRingCtx::unramified(&s, 3).unwrap();
        let a = t.random(&mut rng);
        prop_assert_eq!(expr::parse(&a.to_expr()).unwrap().eval_ring(&t).unwrap(), a);
    }

    #[test]
    fn frobenius_is_a_ring_automorphism(seed in any::<u64>(), mode in mode(), k in -3i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = LocalRingCtx::base(5, 1, 5, mode).unwrap();
        let t = LocalRingCtx::unramified(&s, 3).unwrap();
        let (a, b) = (t.random(&mut rng), t.random(&mut rng));
        let fa = a.frobenius(k);
        prop_assert_eq!(a.try_mul(&b).unwrap().frobenius(k), fa.try_mul(&b.frobenius(k)).unwrap());
        prop_assert_eq!(a.try_add(&b).unwrap().frobenius(k), fa.try_add(&b.frobenius(k)).unwrap());
        prop_assert_eq!(a.frobenius(3), a);
    }

    #[test]
    fn reduced_norm_is_multiplicative(seed in any::<u64>(), mode in mode(), d in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebra(5, d, 1, mode);
        let (a, b) = (OrderElem::random(&alg, &mut rng), OrderElem::random(&alg, &mut rng));
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(ab.nrd().unwrap(), a.nrd().unwrap().try_mul(&b.nrd().unwrap()).unwrap());
        prop_assert_eq!(ab.trd().unwrap(), b.try_mul(&a).unwrap().trd().unwrap());
        let (_, n) = a.full_trace_norm().unwrap();
        prop_assert_eq!(n, a.nrd().unwrap().pow(d as u64));
    }

    #[test]
    fn valuation_is_additive(seed in any::<u64>(), mode in mode()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebra(3, 2, 1, mode);
        let (a, b) = (OrderElem::random(&alg, &mut rng), OrderElem::random(&alg, &mut rng));
        let (oa, ob) = (a.ord().finite(), b.ord().finite());
        if let (Some(x), Some(y)) = (oa, ob) {
            if x + y < 8 {
                prop_assert_eq!(a.try_mul(&b).unwrap().ord().finite(), Some(x + y));
            }
        }
    }

    #[test]
    fn idempotents_are_orthogonal(mode in mode(), r in prop_oneof![Just(1i64), Just(2)]) {
        let tensor = TensorRingCtx::new(&algebra(5, 3, r, mode)).unwrap();
        let es = tensor.idempotents();
        for (i, e) in es.iter().enumerate() {
            for (j, f) in es.iter().enumerate() {
                let ef = e.mul(f);
                let ok = if i == j { ef == *e } else { ef.is_zero() };
                prop_assert!(ok, "e_{} e_{}", i, j);
            }
        }
    }

    #[test]
    fn projectives_survive_the_round_trip(seed in any::<u64>(), labels in prop::collection::vec(0usize..3, 1..4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tensor = TensorRingCtx::new(&algebra(5, 3, 1, Mode::Mixed)).unwrap();
        let p = modcat::random_projective(&tensor, &labels, &mut rng).unwrap();
        prop_assert_eq!(&modcat::f_functor(&tensor, &modcat::h_functor(&p)).unwrap(), &p);
        let mut expected = labels.clone();
        expected.sort_unstable();
        prop_assert_eq!(modcat::decompose(&p, modcat::Selection::MinOrbit).unwrap().sorted_labels(), expected);
    }

    #[test]
    fn witt_ghost_is_a_ring_map(seed in any::<u64>(), p in prop_oneof![Just(2u64), Just(3)], len in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = WittCtx::new(&CoeffRing::IntMod { p, m: 6 }, 5).unwrap();
        let (a, b) = (w.random(&mut rng, len).unwrap(), w.random(&mut rng, len).unwrap());
        let (ga, gb) = (a.ghost(), b.ghost());
        let sum: Vec<_> = ga.iter().zip(&gb).map(|(x, y)| x.try_add(y).unwrap()).collect();
        let prod: Vec<_> = ga.iter().zip(&gb).map(|(x, y)| x.try_mul(y).unwrap()).collect();
        prop_assert_eq!(a.add(&b).unwrap().ghost(), sum);
        prop_assert_eq!(a.mul(&b).unwrap().ghost(), prod);
        let fv = a.ver().unwrap().frob().unwrap();
        prop_assert_eq!(fv, w.from_int(p as i128, len).unwrap().mul(&a).unwrap());
    }
}
