use std::collections::BTreeSet;

use littlewood::setcore::{additive_energy, IntegerSet};
use littlewood::spectral::{convolve, l1_norm, l4_energy_check, transform, SupportedFunction};
use littlewood::Complex64;
use proptest::prelude::*;

const REL_TOL: f64 = 1e-6;

fn set_of(v: BTreeSet<i64>) -> IntegerSet {
    IntegerSet::new(v.into_iter().collect()).unwrap()
}

fn function(max_len: usize) -> impl Strategy<Value = SupportedFunction> {
    (
        -1000i64..1000,
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_len),
    )
        .prop_map(|(offset, v)| {
            SupportedFunction::new(offset, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
        })
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn spread_set(max_len: usize, max_spread: i64) -> impl Strategy<Value = IntegerSet> {
    prop::collection::btree_set(0..=max_spread, 1..=max_len).prop_map(set_of)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(f in function(400)) {
        let m = (2 * (f.spread() as usize + 1)).next_power_of_two();
        let grid = transform(&f, m).unwrap();
        let mean: f64 = grid.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / m as f64;
        prop_assert!((mean - f.l2_squared()).abs() <= 1e-10 * f.l2_squared());
    }

    #[test]
    fn convolution_theorem(f in function(300), g in function(300)) {
        let h = convolve(&f, &g).unwrap();
        let m = (2 * (f.spread() + g.spread() + 1) as usize).next_power_of_two();
        let (fh, gh, hh) = (transform(&f, m).unwrap(), transform(&g, m).unwrap(), transform(&h, m).unwrap());
        let products: Vec<Complex64> = fh.values.iter().zip(&gh.values).map(|(a, b)| a * b).collect();
        let scale = products.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        for (p, q) in products.iter().zip(&hh.values) {
            prop_assert!((p - q).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn holder_chain_and_trivial_upper(a in spread_set(120, 4000)) {
        let n = a.len() as f64;
        let norm = l1_norm(&SupportedFunction::indicator(&a).unwrap(), REL_TOL).unwrap();
        let e = additive_energy(&a).unwrap().energy as f64;
        prop_assert!(n.powi(3) <= e * norm.l1 * norm.l1 * (1.0 + 5.0 * REL_TOL));
        prop_assert!(norm.l1 <= n.sqrt() * (1.0 + REL_TOL));
        prop_assert!((norm.l2 * norm.l2 - n).abs() <= 1e-9 * n);
        prop_assert!(norm.linf <= n * (1.0 + 1e-12));
    }

    #[test]
    fn spectral_energy_matches(a in spread_set(200, 1 << 16)) {
        let chk = l4_energy_check(&a).unwrap();
        prop_assert!((chk.spectral - chk.exact as f64).abs() <= 1e-6 * chk.exact as f64);
    }
}

#[test]
fn spectral_energy_near_largest_spread() {
    let mut elements: Vec<i64> = (0..300).map(|k| (k * k * 11) % ((1 << 20) - 1)).collect();
    elements.push((1 << 20) - 1);
    let a = IntegerSet::new(elements).unwrap();
    assert!(a.spread() < 1 << 20);
    let chk = l4_energy_check(&a).unwrap();
    assert!((chk.spectral - chk.exact as f64).abs() <= 1e-6 * chk.exact as f64);
}

#[test]
fn pointwise_evaluation_matches_grid() {
    let f = SupportedFunction::from_real(-3, &[1.0, -2.0, 0.5, 0.0, 3.0]);
    let grid = transform(&f, 16).unwrap();
    for k in 0..16 {
        assert!((grid.values[k] - f.evaluate(k as f64 / 16.0)).norm() < 1e-12);
    }
}
