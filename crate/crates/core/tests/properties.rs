//! Property tests over randomly generated matrices, multisets, circuits and
//! gadgets.

use std::path::PathBuf;

use ldc_core::circuit::{self, isomorphic, tensor_parallel, Circuit};
use ldc_core::exponential::{multiset_count, multisets, ordering_count, orderings, sub_multiset_pairs};
use ldc_core::matrix::{residual, split_idempotent, ComplexMatrix};
use ldc_core::rewrite::normalize;
use ldc_core::structures::builtins::builtin;
use ldc_core::structures::Gadget;
use ldc_core::validity::validate;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> Circuit {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}.json"));
    circuit::parse(&std::fs::read(path).expect("fixture file")).expect("fixture parses")
}

const FIXTURES: [&str; 8] = [
    "left-distributor",
    "reverse-distributor",
    "intro-elim",
    "open-intro-elim",
    "unit-thinning",
    "counit-thinning",
    "generator-merge",
    "dagger-box",
];

proptest! {
    #[test]
    fn projectors_split_exactly(seed in any::<u64>(), n in 1usize..7, frac in 0.0f64..=1.0) {
        let rank = (frac * n as f64).round() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = ComplexMatrix::random_projector(n, rank, &mut rng);
        let (r, s) = split_idempotent(&e, 1e-8).unwrap();
        prop_assert_eq!(r.rows(), rank);
        prop_assert!(residual(&r.then(&s), &e) <= 1e-8);
        prop_assert!(residual(&s.then(&r), &ComplexMatrix::identity(rank)) <= 1e-8);
    }

    #[test]
    fn pseudo_inverse_is_a_generalized_inverse(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, rank in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rank.min(rows).min(cols);
        let a = ComplexMatrix::random(rows, k, &mut rng).mul(&ComplexMatrix::random(k, cols, &mut rng));
        let p = a.pseudo_inverse(1e-10);
        prop_assert!(residual(&a.mul(&p).mul(&a), &a) <= 1e-8);
        prop_assert!(residual(&p.mul(&a).mul(&p), &p) <= 1e-8 * (1.0 + p.max_abs()));
    }

    #[test]
    fn multiset_enumeration_matches_count(n in 0usize..5, d in 0usize..5) {
        let all = multisets(n, d);
        prop_assert_eq!(all.len(), multiset_count(n, d));
        for m in &all {
            prop_assert!(m.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(orderings(m).len(), ordering_count(m));
            let pairs = sub_multiset_pairs(m);
            let expected: usize = (0..n).map(|x| m.iter().filter(|&&y| y == x).count() + 1).product();
            prop_assert_eq!(pairs.len(), expected);
        }
    }

    #[test]
    fn normalize_is_idempotent_and_preserves_validity(i in 0..FIXTURES.len(), j in 0..FIXTURES.len()) {
        let c = tensor_parallel(&fixture(FIXTURES[i]), &fixture(FIXTURES[j]));
        let n = normalize(&c);
        prop_assert!(isomorphic(&normalize(&n), &n));
        prop_assert_eq!(validate(&c).unwrap().valid, validate(&n).unwrap().valid);
        prop_assert!(n.nodes().len() <= c.nodes().len());
    }

    #[test]
    fn circuit_json_round_trips(i in 0..FIXTURES.len(), j in 0..FIXTURES.len()) {
        let c = tensor_parallel(&fixture(FIXTURES[i]), &fixture(FIXTURES[j]));
        let back = circuit::parse(&circuit::serialize(&c)).unwrap();
        prop_assert!(isomorphic(&back, &c));
        prop_assert_eq!(circuit::serialize(&back), circuit::serialize(&c));
    }

    #[test]
    fn gadget_json_round_trips(which in 0usize..4, seed in any::<u64>()) {
        let name = ["weil", "quad4", "quad4-flip", "qubit-zx"][which];
        let mut g = builtin(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = g.morphism("mul").unwrap().clone();
        g.set("mul", ComplexMatrix::random(m.rows(), m.cols(), &mut rng));
        let back = Gadget::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), g.to_json());
    }
}
