mod common;

use common::{random_channel, rng};
use proptest::prelude::*;
use wiretap_core::*;

proptest! {
    #[test]
    fn bsc_composition_closed_form(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let lhs = compose(&bsc(a).unwrap(), &bsc(b).unwrap()).unwrap();
        let rhs = bsc(a + b - 2.0 * a * b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn composed_crossover_is_noisier(a in 1e-6f64..0.5, b in 1e-6f64..0.5) {
        let c = a + b - 2.0 * a * b;
        prop_assert!(c > a && c > b && c < 0.5);
    }

    #[test]
    fn compose_associative(seed in any::<u64>(), na in 1usize..5, nb in 1usize..5, nc in 1usize..5, nd in 1usize..5) {
        let mut r = rng(seed);
        let x = random_channel(&mut r, na, nb);
        let y = random_channel(&mut r, nb, nc);
        let z = random_channel(&mut r, nc, nd);
        let left = compose(&compose(&x, &y).unwrap(), &z).unwrap();
        let right = compose(&x, &compose(&y, &z).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn degradation_witness_round_trips(seed in any::<u64>(), na in 2usize..4, nb in 2usize..4, nc in 2usize..4) {
        let mut r = rng(seed);
        let w = random_channel(&mut r, na, nb);
        let v = compose(&w, &random_channel(&mut r, nb, nc)).unwrap();
        let witness = find_degradation(&w, &v).unwrap();
        prop_assert!(witness.is_some());
        let back = compose(&w, &witness.unwrap().kernel).unwrap();
        prop_assert!(back.max_abs_diff(&v).unwrap() <= 1e-9);
    }

    #[test]
    fn any_found_witness_is_valid(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = random_channel(&mut r, 3, 2);
        let v = random_channel(&mut r, 3, 2);
        if let Some(witness) = find_degradation(&w, &v).unwrap() {
            prop_assert!(compose(&w, &witness.kernel).unwrap().max_abs_diff(&v).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn crossover_grid_is_noisier() {
    for i in 1..500 {
        for j in 1..500 {
            let (a, b) = (i as f64 / 1000.0, j as f64 / 1000.0);
            let c = a + b - 2.0 * a * b;
            assert!(c > a && c > b && c < 0.5, "{a} {b}");
        }
    }
}

#[test]
fn product_extension_rows_are_distributions() {
    let mut r = rng(11);
    let w = random_channel(&mut r, 2, 2);
    for n in 1..=10 {
        let ext = product_extension(&w, n, DEFAULT_BUDGET).unwrap();
        for row in ext.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn non_degraded_pair_has_no_witness() {
    // the identity cannot be simulated from a noisier channel
    assert!(find_degradation(&bsc(0.2).unwrap(), &Channel::identity(2))
        .unwrap()
        .is_none());
}
