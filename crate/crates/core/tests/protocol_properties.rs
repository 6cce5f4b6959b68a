mod common;

use common::interior_indices;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strobocat::analysis::{detection_coefficients, qubit_reduced, von_neumann_entropy};
use strobocat::protocols::{
    amplified_amplitude, amplify_finite, amplify_ideal, closed_form_propagator, composed_flip_propagator,
    detect_spectroscopy, ideal_cat, plus_vacuum,
};
use strobocat::spin_boson::{SystemParams, DOWN, UP};

fn params(lambda0: f64) -> SystemParams {
    SystemParams {
        lambda0,
        ..SystemParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flip_sequence_matches_closed_form(n in 1u32..=8, lambda0 in 0.05f64..0.3) {
        let p = params(lambda0);
        let k = p.fock().interior_for(amplified_amplitude(n, &p));
        prop_assume!(k > 0);
        let dev = composed_flip_propagator(n, &p).unwrap()
            .phase_aligned_deviation(&closed_form_propagator(n, &p).unwrap(), &interior_indices(p.n_trunc, k));
        prop_assert!(dev < 1e-8, "n={n}: {dev}");
    }

    #[test]
    fn conditional_amplitude_is_linear_in_n(half in 1u32..=6, lambda0 in 0.05f64..0.2) {
        let p = params(lambda0);
        let n = 2 * half;
        let r = amplify_ideal(n, &p, &plus_vacuum(&p)).unwrap();
        let want = 2.0 * n as f64 * p.alpha0();
        prop_assert!((r.conditional_amplitudes[UP].unwrap().re + want).abs() < 1e-8);
        prop_assert!((r.conditional_amplitudes[DOWN].unwrap().re - want).abs() < 1e-8);
        prop_assert!(r.conditional_amplitudes[UP].unwrap().im.abs() < 1e-8);
    }

    #[test]
    fn qubit_entropy_matches_overlap_closed_form(half in 1u32..=6, lambda0 in 0.02f64..0.2) {
        let p = params(lambda0);
        let n = 2 * half;
        let amp = amplified_amplitude(n, &p);
        let d = (-2.0 * amp * amp).exp();
        let want = von_neumann_entropy(&[(1.0 + d) / 2.0, (1.0 - d) / 2.0]);
        let got = qubit_reduced(&ideal_cat(n, &p).unwrap()).unwrap().entropy;
        prop_assert!((got - want).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn detection_probabilities_sum_to_one(n in 1u32..=12, eps_z in 2.0f64..5.0, eps_d in 0.5f64..6.0) {
        let p = SystemParams { eps_z, eps_d, n_trunc: 48, ..SystemParams::default() };
        let r = detect_spectroscopy(&ideal_cat(n, &p).unwrap(), &p, n).unwrap();
        prop_assert!((r.p_plus + r.p_minus - 1.0).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&r.p_minus));
    }
}

#[test]
fn analytic_coefficients_are_normalized_at_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let eps_d = rng.random_range(1e-3..20.0);
        let shift = rng.random_range(-10.0..10.0);
        let k = detection_coefficients(eps_d, shift);
        assert!((k.c_up.norm_sqr() + k.c_down.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn fidelity_is_monotone_in_pulse_amplitude() {
    let p = SystemParams::default();
    for n in [2, 4] {
        let mut last = 0.0;
        for eps in [10.0, 20.0, 40.0, 80.0] {
            let f = amplify_finite(n, eps, &p, &plus_vacuum(&p)).unwrap().fidelity_vs_ideal;
            assert!(f >= last, "n={n} eps={eps}: {f} < {last}");
            last = f;
        }
    }
}
