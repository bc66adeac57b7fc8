use num_rational::BigRational as Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use gapforge::bell::bell_kp;
use gapforge::io::{self, Artifact};
use gapforge::label_cover::{gen_planted, gen_random};
use gapforge::math::{lp_norm_pow, rat, FiniteField};
use gapforge::modified_vs::{bernoulli_tail, search_mvs, verify_mvs};
use gapforge::reduction::{base_path_cost, ReductionInstance};
use gapforge::tensor::{min_cost, min_cost_with, path_norm, TensorPath};
use gapforge::trees::{aut_count, enumerate_kp_trees, tran, PlaneTree};
use gapforge::vector_systems::VectorSystem;

const ORDERS: [u64; 8] = [2, 3, 4, 5, 8, 16, 32, 256];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn field_axioms(idx in 0..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = FiniteField::new(ORDERS[idx]).unwrap();
        let n = f.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn bell_monotone(k in 0u32..4, p in 1usize..7) {
        prop_assert!(bell_kp(k, p) <= bell_kp(k + 1, p));
        prop_assert!(bell_kp(k, p) <= bell_kp(k, p + 1));
    }

    #[test]
    fn label_cover_roundtrip(seed in any::<u64>(), r in 2usize..4, labels in 1usize..4, colors in 1usize..5, edges in 1usize..6) {
        let inst = gen_random(r, 2, labels, colors, edges, seed).unwrap();
        let text = io::to_string(&Artifact::LabelCover(inst.clone()));
        let back = io::parse_label_cover(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(io::to_string(&Artifact::LabelCover(back)), text);
    }

    #[test]
    fn trees_canonical_invariants(k in 1usize..3, p in 1usize..6, pick in any::<prop::sample::Index>()) {
        let trees = enumerate_kp_trees(k, p, 1_000_000).unwrap();
        let t = pick.get(&trees);
        let c = t.canonical();
        prop_assert_eq!(tran(t), tran(&c));
        prop_assert_eq!(aut_count(t), aut_count(&c));
        let parsed: PlaneTree = t.code().parse().unwrap();
        prop_assert_eq!(&parsed, t);
        // |Γ_T| = p!/|Aut(T)| is an integer
        let fact: num_bigint::BigUint = (1..=p as u64).product();
        prop_assert!((fact % aut_count(t)).is_zero());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn order_one_minimum_matches_brute_force(seed in any::<u64>(), labels in 1usize..4, r in prop::sample::select(vec![2usize, 4])) {
        let lc = gen_random(r, 1, labels, 3, 3, seed).unwrap();
        let vs = VectorSystem::for_reduction(r as u64, 2, lc.num_colors(), false).unwrap();
        let inst = ReductionInstance::build_base(&lc, 2, &vs, false).unwrap();
        let sol = min_cost(&inst, 1, 1_000_000, 10_000_000).unwrap();
        let mut best: Option<Rational> = None;
        let n = lc.num_vertices();
        for code in 0..labels.pow(n as u32) {
            let sigma: Vec<usize> = (0..n).map(|i| code / labels.pow(i as u32) % labels).collect();
            let v = lp_norm_pow(&base_path_cost(&inst, &sigma).unwrap(), 2);
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        prop_assert_eq!(sol.best, best.unwrap());
    }

    #[test]
    fn pruning_never_changes_the_answer(seed in any::<u64>()) {
        let lc = gen_random(2, 1, 2, 3, 2, seed).unwrap();
        let vs = VectorSystem::for_reduction(2, 2, lc.num_colors(), false).unwrap();
        let inst = ReductionInstance::build_base(&lc, 2, &vs, false).unwrap();
        let a = min_cost_with(&inst, 2, 1_000_000, 10_000_000, true).unwrap();
        let b = min_cost_with(&inst, 2, 1_000_000, 10_000_000, false).unwrap();
        prop_assert_eq!(&a.best, &b.best);
        prop_assert_eq!(&a.witness, &b.witness);
        prop_assert_eq!(path_norm(&inst, &a.witness).unwrap(), a.best);
    }

    #[test]
    fn planted_paths_have_unit_norm(seed in any::<u64>(), k in 1u32..3) {
        let (lc, sigma) = gen_planted(2, 2, 2, 3, 3, seed).unwrap();
        let vs = VectorSystem::for_reduction(2, 2, lc.num_colors(), false).unwrap();
        let inst = ReductionInstance::build_base(&lc, 2, &vs, false).unwrap();
        prop_assert!(path_norm(&inst, &TensorPath::uniform(&sigma, k)).unwrap().is_one());
    }

    #[test]
    fn bernoulli_random_weights(ws in prop::collection::vec((0i64..20, 1i64..6), 1..=10), c10 in 0i64..=10) {
        let weights: Vec<Rational> = ws.iter().map(|&(n, d)| rat(n, d)).collect();
        let out = bernoulli_tail(&weights, &rat(c10, 10)).unwrap();
        prop_assert!(out.pass, "prob {} bound {}", out.prob, out.bound);
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn verified_mvs_survive_coordinate_permutations(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let s = search_mvs(2, 3, Some(12), seed, 200).unwrap().system;
        let mut perm: Vec<usize> = (0..s.d0()).collect();
        // Fisher-Yates driven by a small LCG so the permutation follows the input
        let mut x = perm_seed | 1;
        for i in (1..perm.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        prop_assert!(verify_mvs(&s.permuted(&perm)).pass());
    }
}
