mod common;

use common::{c, interior_indices};
use proptest::prelude::*;
use strobocat::fock::{displacement, OperatorMatrix};
use strobocat::linalg::HermitianEigen;
use strobocat::spin_boson::{build_h_rot, conditional_displacement, embed, parity, sigma_x, sigma_z, SystemParams};

fn params(lambda0: f64, eps_z: f64, n: usize) -> SystemParams {
    SystemParams {
        lambda0,
        eps_z,
        n_trunc: n,
        ..SystemParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flip_conjugates_conditional_displacement(lambda0 in 0.0f64..1.0) {
        let p = params(lambda0, 0.0, 48);
        let d = conditional_displacement(&p).unwrap();
        let sx = embed(&sigma_x(), &OperatorMatrix::identity(48), p.composite()).unwrap();
        let conj = sx.matmul(&d).unwrap().matmul(&sx).unwrap();
        let k = p.fock().interior_for(p.alpha0());
        prop_assert!(conj.block_deviation(&d.adjoint(), &interior_indices(48, k)) < 1e-10);
    }

    #[test]
    fn parity_conjugates_displacement(re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let space = params(0.2, 0.0, 48).fock();
        let alpha = num_complex::Complex64::new(re, im);
        let d = displacement(alpha, space).unwrap();
        let pm = parity(space);
        let conj = pm.matmul(&d).unwrap().matmul(&pm.adjoint()).unwrap();
        let k = space.interior_for(alpha.norm());
        let idx: Vec<usize> = (0..k).collect();
        prop_assert!(conj.block_deviation(&d.adjoint(), &idx) < 1e-10);
    }

    #[test]
    fn uncoupled_hamiltonian_commutes_with_sigma_z(eps_z in -5.0f64..5.0) {
        let p = params(0.0, eps_z, 16);
        let h = build_h_rot(&p, false);
        let z = embed(&sigma_z(), &OperatorMatrix::identity(16), p.composite()).unwrap();
        let comm = h.matmul(&z).unwrap().entries() - z.matmul(&h).unwrap().entries();
        prop_assert_eq!(comm.norm(), 0.0);
    }

    #[test]
    fn spectrum_is_shifted_ladder(lambda0 in 0.0f64..0.8) {
        let p = params(lambda0, 0.0, 48);
        let mut ev: Vec<f64> = HermitianEigen::new(build_h_rot(&p, false).entries()).values.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let shift = lambda0 * lambda0 / 4.0;
        for k in 0..20 {
            let want = k as f64 - shift;
            prop_assert!((ev[2 * k] - want).abs() < 1e-8, "{} vs {want}", ev[2 * k]);
            prop_assert!((ev[2 * k + 1] - want).abs() < 1e-8);
        }
    }
}

#[test]
fn identity_embedding() {
    let p = params(0.2, 0.0, 8);
    let id = embed(&OperatorMatrix::identity(2), &OperatorMatrix::identity(8), p.composite()).unwrap();
    assert_eq!(id.entries(), OperatorMatrix::identity(16).entries());
    assert_eq!(id.entries()[(3, 3)], c(1.0));
}
