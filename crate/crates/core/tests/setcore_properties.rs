use std::collections::BTreeSet;

use littlewood::setcore::{
    additive_energy, cross_energy, greedy_dissociated_subset, initial_segment, is_dissociated, parse_set,
    format_set_json, format_set_text, IntegerSet,
};
use proptest::prelude::*;

fn set_of(v: BTreeSet<i64>) -> IntegerSet {
    IntegerSet::new(v.into_iter().collect()).unwrap()
}

fn small_set(max_len: usize) -> impl Strategy<Value = IntegerSet> {
    prop::collection::btree_set(-500i64..500, 1..=max_len).prop_map(set_of)
}

/// Counts `(x1, x2, x3, x4) ∈ A × B × A × B` with `x1 + x2 = x3 + x4`.
fn brute_cross(a: &[i64], b: &[i64]) -> u128 {
    let mut count = 0u128;
    for &a1 in a {
        for &b1 in b {
            for &a2 in a {
                for &b2 in b {
                    if a1 + b1 == a2 + b2 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// All `3^k` signed sums with coefficients in {-1, 0, 1}; zero must appear once.
fn brute_dissociated(v: &[i64]) -> bool {
    let mut sums = vec![0i64];
    for &x in v {
        sums = sums.iter().flat_map(|&s| [s - x, s, s + x]).collect();
    }
    sums.iter().filter(|&&s| s == 0).count() == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energy_matches_enumeration(b in small_set(12)) {
        let report = additive_energy(&b).unwrap();
        let n = b.len() as u128;
        prop_assert_eq!(report.energy, brute_cross(b.elements(), b.elements()));
        prop_assert!(n * n <= report.energy && report.energy <= n * n * n);
        prop_assert!((report.omega - report.energy as f64 / (n * n * n) as f64).abs() < 1e-15);
    }

    #[test]
    fn cross_energy_symmetric(a in small_set(15), b in small_set(15)) {
        let ab = cross_energy(&a, &b).unwrap();
        prop_assert_eq!(ab, cross_energy(&b, &a).unwrap());
        prop_assert_eq!(ab, brute_cross(a.elements(), b.elements()));
    }

    #[test]
    fn energy_affine_invariant(b in small_set(30), t in -10_000i64..10_000, s in prop::sample::select(vec![-7i64, -2, -1, 1, 3, 11])) {
        let image = b.affine_image(t, s).unwrap();
        prop_assert_eq!(additive_energy(&b).unwrap().energy, additive_energy(&image).unwrap().energy);
    }

    #[test]
    fn initial_segments_nest(a in small_set(40), k1 in 1usize..=40, k2 in 1usize..=40) {
        let (k, kk) = (k1.min(k2).min(a.len()), k1.max(k2).min(a.len()));
        prop_assert!(initial_segment(&a, 0).is_err());
        let small = initial_segment(&a, k).unwrap();
        let big = initial_segment(&a, kk).unwrap();
        prop_assert!(small.is_subset_of(&big));
        prop_assert_eq!(small.len(), k);
        prop_assert!(small.iter().all(|x| a.iter().take(k).any(|y| y == x)));
    }

    #[test]
    fn greedy_output_is_dissociated(a in prop::collection::btree_set(-60i64..60, 1..=25).prop_map(set_of)) {
        let d = greedy_dissociated_subset(&a).unwrap();
        prop_assert!(d.is_subset_of(&a));
        prop_assert!(is_dissociated(&d).unwrap());
        prop_assert!(brute_dissociated(d.elements()));
    }

    #[test]
    fn dissociation_matches_enumeration(a in prop::collection::btree_set(-40i64..40, 1..=9).prop_map(set_of)) {
        prop_assert_eq!(is_dissociated(&a).unwrap(), brute_dissociated(a.elements()));
    }

    #[test]
    fn text_and_json_round_trip(a in small_set(50)) {
        prop_assert_eq!(&parse_set(&format_set_text(&a)).unwrap(), &a);
        prop_assert_eq!(&parse_set(&format_set_json(&a)).unwrap(), &a);
    }
}
