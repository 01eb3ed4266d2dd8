mod oracle;

use g2braid::g2weights::Weight;
use g2braid::pathlattice::{self, paths_between, sigma_blocks};
use g2braid::qscalar::EvalAt;
use g2braid::repbuilder::{Instance, Tower, Young, G2};
use g2braid::verifier::{self, all_passed};
use num_rational::BigRational;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = EvalAt> {
    // Generic enough: not a root of unity and away from ±1.
    (2i64..40, 1i64..7)
        .prop_filter("q = 1", |(p, r)| p != r)
        .prop_map(|(p, r)| EvalAt::new(BigRational::new(p.into(), r.into())).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn any_seed_and_point_gives_braid_representation(seed in 0u64..1000, be in point()) {
        let mut t = Tower::new(G2, be.clone(), seed);
        t.build_to(4).unwrap();
        let rep = t.rep_set();
        prop_assert!(all_passed(&verifier::check_braid(&rep, 4)));
        prop_assert!(all_passed(&verifier::check_central(&rep, &be, 4, 4)));
        prop_assert!(all_passed(&verifier::check_spectrum(&rep, &be, 4)));
        prop_assert!(all_passed(&verifier::check_projectors(&rep, &be, 4)));
    }

    #[test]
    fn fingerprint_is_independent_of_seed(s1 in 0u64..1000, s2 in 0u64..1000, be in point()) {
        let build = |s| {
            let mut t = Tower::new(G2, be.clone(), s);
            t.build_to(4).unwrap();
            t.rep_set()
        };
        let r = verifier::compare_fingerprints(&[build(s1), build(s2)], 4);
        prop_assert!(r.passed(), "{:?}", r.witness);
    }

    #[test]
    fn young_towers_are_hecke_representations(seed in 0u64..1000, be in point()) {
        let mut t = Tower::new(Young, be.clone(), seed);
        t.build_to(5).unwrap();
        let rep = t.rep_set();
        prop_assert!(all_passed(&verifier::check_braid(&rep, 5)));
        prop_assert!(all_passed(&verifier::check_spectrum(&rep, &be, 5)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_counts_match_tensor_oracle(a in 0u32..6, b in 0u32..6, c in 0u32..6, d in 0u32..6, k in 0usize..4) {
        let n = paths_between(&G2, &Weight::new(a, b), &Weight::new(c, d), k).len() as i64;
        prop_assert_eq!(n, oracle::path_count((a, b), (c, d), k));
    }

    #[test]
    fn sigma_blocks_partition_paths(a in 0u32..5, b in 0u32..5, c in 0u32..6, d in 0u32..6, i in 1usize..3) {
        let paths = paths_between(&G2, &Weight::new(a, b), &Weight::new(c, d), 3);
        let blocks = sigma_blocks(&paths, i);
        let total: usize = blocks.values().map(Vec::len).sum();
        prop_assert_eq!(total, paths.len());
        for (key, ps) in &blocks {
            let (lo, hi) = key.ends();
            // Each block is the full set of two-step paths lo -> hi.
            prop_assert_eq!(ps.len() as i64, oracle::path_count((lo.a, lo.b), (hi.a, hi.b), 2));
        }
    }

    #[test]
    fn bratteli_multiplicities_match_tensor_powers(n in 0usize..6) {
        let b = pathlattice::build(&G2, n);
        let want = oracle::tensor_power(n);
        prop_assert_eq!(b.labels(n).len(), want.len());
        for (l, m) in want {
            prop_assert_eq!(b.multiplicity(&Weight::new(l.0, l.1), n) as i64, m);
        }
    }

    #[test]
    fn channel_exponents_follow_casimirs(a in 0u32..6, b in 0u32..6) {
        let l = Weight::new(a, b);
        for n in 0..6 {
            prop_assert_eq!(G2.central_exponent(&l, n), oracle::casimir((a, b)) - 12 * n as i64);
        }
    }
}
