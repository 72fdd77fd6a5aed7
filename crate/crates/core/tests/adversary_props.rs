mod common;

use common::{blurred_channel, rng};
use proptest::prelude::*;
use wiretap_core::adversary::*;
use wiretap_core::codelab::*;
use wiretap_core::info::PINSKER_CONSTANT;
use wiretap_core::*;

fn code_for(c: &CompoundWiretap, n: usize, j: usize, l: usize, seed: u64) -> Codebook {
    let inputs = vec![Distribution::uniform(c.input_size())];
    let params = TypicalityParams::new(n, 1.0 / n as f64).unwrap();
    let over = Overrides {
        messages: Some(j),
        randomization: Some(l),
    };
    sample_codebook(c, CodingRegime::Csi, &inputs, params, 0.1, over, seed, DEFAULT_BUDGET)
        .unwrap()
        .codebook
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn attack_bounds_hold(seed in any::<u64>(), n in 2usize..8, j in 2usize..6, l in 1usize..5) {
        let v = blurred_channel(&mut rng(seed), 2, 2);
        let c = CompoundWiretap::single(bsc(0.05).unwrap(), v.clone()).unwrap();
        let code = code_for(&c, n, j, l, seed);
        let map = best_decoding_attack(&code, 0, &v, DEFAULT_BUDGET).unwrap();
        let leak = evaluate_leakage(&code, &c, DEFAULT_BUDGET).unwrap()[0].leakage_bits;
        prop_assert!((map.leakage_bits - leak).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&map.avg_error));
        let jf = j as f64;
        prop_assert!(map.avg_error >= 1.0 - 1.0 / jf - PINSKER_CONSTANT * leak.sqrt() - 1e-10);
        prop_assert!(map.holds);

        let id = identification_attack(&code, 0, &v, DEFAULT_BUDGET).unwrap();
        prop_assert!(id.g.iter().all(|g| (0.0..=2.0).contains(g)));
        prop_assert!(id.average >= 1.0 - PINSKER_CONSTANT * leak.sqrt() * (2.0 * jf - 1.0) / (jf - 1.0) - 1e-10);
        prop_assert!(id.holds);
        prop_assert!(id.reliable_fraction <= id.markov_limit + 1e-12);

        let random = random_partition_errors(&code, 0, &v, 100, seed, DEFAULT_BUDGET).unwrap();
        prop_assert!(random.iter().all(|e| map.avg_error <= e + 1e-12));
    }
}

/// Identification gets no easier as the eavesdropper's channel gets noisier.
#[test]
fn identification_degrades_along_noise_ladder() {
    let c = CompoundWiretap::single(bsc(0.02).unwrap(), bsc(0.02).unwrap()).unwrap();
    for seed in 0..10 {
        let code = code_for(&c, 6, 4, 2, seed);
        let mut v = Channel::identity(2);
        let mut previous: Option<Vec<f64>> = None;
        for _ in 0..6 {
            let g = identification_attack(&code, 0, &v, DEFAULT_BUDGET).unwrap().g;
            if let Some(p) = &previous {
                for (a, b) in p.iter().zip(&g) {
                    assert!(b + 1e-12 >= *a, "{p:?} -> {g:?}");
                }
            }
            previous = Some(g);
            v = compose(&v, &bsc(0.07).unwrap()).unwrap();
        }
    }
}

#[test]
fn useless_eavesdropper_is_reduced_to_guessing() {
    let c = CompoundWiretap::single(bsc(0.05).unwrap(), bsc(0.5).unwrap()).unwrap();
    let code = code_for(&c, 5, 3, 2, 0);
    let map = best_decoding_attack(&code, 0, &bsc(0.5).unwrap(), DEFAULT_BUDGET).unwrap();
    assert!((map.avg_error - 2.0 / 3.0).abs() < 1e-12);
    let id = identification_attack(&code, 0, &bsc(0.5).unwrap(), DEFAULT_BUDGET).unwrap();
    assert!(id.g.iter().all(|g| (g - 1.0).abs() < 1e-12));
}
