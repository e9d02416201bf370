use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmtest::charfind::{find_characterization, sample_size_prime, verify_characterization};
use rmtest::gf::{field_of_order, Fe};
use rmtest::oracle::{
    builtin_strategy, AdversarialOracle, AdversaryMode, Answer, GroundTruth, QueryAccess,
    StrategyParams,
};
use rmtest::poly::{
    all_points, enumerate_exponents, interpolate, random_polynomial, DenseTable, Evaluate,
};
use rmtest::space::{AffineMap, AffineSampling};
use rmtest::tester::{
    default_params, default_sample_size, erasure_resilient_test, sample_points, Decision,
};

fn field_order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_is_additive(q in field_order(), a in any::<u32>(), b in any::<u32>()) {
        let f = field_of_order(q).unwrap();
        let (a, b) = (Fe(a % q as u32), Fe(b % q as u32));
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn nonzero_elements_have_inverses(q in field_order(), a in 1u32..1000) {
        let f = field_of_order(q).unwrap();
        let a = Fe(a % (q as u32 - 1) + 1);
        prop_assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
        prop_assert_eq!(f.pow(a, q - 1), Fe::ONE);
    }

    #[test]
    fn restriction_never_raises_degree(
        seed in any::<u64>(),
        (q, n, k) in prop::sample::select(vec![(2u64, 5usize, 3usize), (3, 4, 2), (4, 3, 2), (5, 3, 2)]),
        d in 0u64..3,
    ) {
        let f = field_of_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_polynomial(f.clone(), n, d, 0.6, &mut rng);
        let t = AffineMap::sample(f.clone(), n, k, AffineSampling::Uniform, &mut rng).unwrap();
        let table = DenseTable::from_fn(f.clone(), k, |x| g.eval(&t.apply(x))).unwrap();
        prop_assert!(interpolate(&table).degree() <= d as i64);
    }

    #[test]
    fn characterizations_satisfy_their_contract(
        seed in any::<u64>(),
        (q, d, k) in prop::sample::select(vec![(2u64, 1u64, 4usize), (2, 2, 7), (3, 1, 3), (5, 1, 2), (7, 1, 2)]),
    ) {
        let f = field_of_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sample_size_prime(d, k as u64).unwrap() as usize;
        let s = sample_points(q as u32, k, m, &mut rng);
        let c = find_characterization(&f, k, &s, d, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let c = c.expect("sample-size point sets are solvable");
        prop_assert!(verify_characterization(&c).unwrap().passed());
        prop_assert_eq!(c.witness.weight(), d + 1);
        for p in c.h.entries().keys() {
            prop_assert!(s.binary_search(p).is_ok());
        }
        for e in enumerate_exponents(k, q as u32, d) {
            prop_assert!(c.h.monomial_inner_product(&e).is_zero());
        }
        prop_assert_eq!(c.h.monomial_inner_product(&c.witness), Fe::ONE);

        // Completeness certificate against random low-degree polynomials.
        for _ in 0..5 {
            let g = random_polynomial(f.clone(), k, d, 0.8, &mut rng);
            prop_assert!(c.h.inner_product(&g).unwrap().is_zero());
        }

        // Same points, same seed: same h.
        let again = find_characterization(&f, k, &s, d, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap().unwrap();
        prop_assert_eq!(again.h.entries(), c.h.entries());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_modes_restrict_answers(
        seed in any::<u64>(),
        name in prop::sample::select(vec!["span-eraser", "pairwise-sum", "random-eraser", "value-corruptor", "random-corruptor"]),
        t in 0u64..4,
    ) {
        let f = field_of_order(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_polynomial(f.clone(), 3, 2, 0.7, &mut rng);
        let mode = if name.contains("corruptor") { AdversaryMode::Corruption } else { AdversaryMode::Erasure };
        let s = builtin_strategy(name, &StrategyParams { seed, ..Default::default() }).unwrap();
        let mut o = AdversarialOracle::new(GroundTruth::Polynomial(g.clone()), mode, t, s);
        let pts: Vec<_> = all_points(3, 3).collect();
        let mut erased_so_far = 0;
        for _ in 0..40 {
            let x = &pts[rng.gen_range(0..pts.len())];
            match (mode, o.query(x)) {
                (AdversaryMode::Corruption, Answer::Erased) => prop_assert!(false, "erasure in corruption mode"),
                (AdversaryMode::Erasure, Answer::Value(v)) => prop_assert_eq!(v, g.eval(x)),
                _ => {}
            }
            // Erasures are never undone.
            prop_assert!(o.erased().len() >= erased_so_far);
            erased_so_far = o.erased().len();
        }
        prop_assert!(o.stats().budget_spent <= 40 * t);
    }

    #[test]
    fn low_degree_truths_always_accept(
        seed in any::<u64>(),
        (q, n, d, k) in prop::sample::select(vec![
            (2u64, 6usize, 1u64, 3usize), (2, 6, 2, 4), (3, 4, 1, 2), (5, 3, 1, 2), (4, 4, 1, 3), (9, 3, 1, 3),
        ]),
        name in prop::sample::select(vec!["null", "span-eraser", "pairwise-sum", "random-eraser"]),
        t in 0u64..4,
    ) {
        let f = field_of_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_polynomial(f.clone(), n, d, 0.7, &mut rng);
        let mut params = default_params(&f, d, 0.25, t, n);
        params.k = k;
        params.m = default_sample_size(&f, d, k);
        params.repetitions = 4;
        let s = builtin_strategy(name, &StrategyParams { seed, ..Default::default() }).unwrap();
        let mut o = AdversarialOracle::new(GroundTruth::Polynomial(g), AdversaryMode::Erasure, t, s);
        let v = erasure_resilient_test(&mut o, &params, &mut rng).unwrap();
        prop_assert_eq!(v.decision, Decision::Accept);
        // No early exit, so every round issues exactly m queries.
        prop_assert_eq!(v.queries, params.repetitions * params.m as u64);
    }
}
