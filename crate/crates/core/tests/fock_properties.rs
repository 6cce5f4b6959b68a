mod common;

use common::{c, complex_in_disc};
use proptest::prelude::*;
use strobocat::fock::{coherent_state, displacement, ladder_ops, FockSpace};

#[test]
fn ladder_commutator_is_identity_below_the_edge() {
    for n in [2, 5, 64, 128] {
        let ops = ladder_ops(FockSpace::new(n).unwrap());
        let a = ops.lower.entries();
        let ad = ops.raise.entries();
        let comm = a * ad - ad * a;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let want = if i == j { c(1.0) } else { c(0.0) };
                assert!((comm[(i, j)] - want).norm() < 1e-12, "n={n} ({i},{j})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherent_overlap_law(a in complex_in_disc(3.0), b in complex_in_disc(3.0)) {
        let space = FockSpace::new(64).unwrap();
        let sa = coherent_state(a, space).unwrap();
        let sb = coherent_state(b, space).unwrap();
        let got = sb.inner(&sa).unwrap().norm();
        let want = (-(a - b).norm_sqr() / 2.0).exp();
        prop_assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }

    #[test]
    fn displacement_composition(a in complex_in_disc(1.0), b in complex_in_disc(1.0)) {
        let space = FockSpace::new(64).unwrap();
        let k = space.interior_for(a.norm() + b.norm());
        prop_assume!(k > 0);
        let idx: Vec<usize> = (0..k).collect();
        let lhs = displacement(a, space).unwrap().matmul(&displacement(b, space).unwrap()).unwrap();
        let phase = num_complex::Complex64::from_polar(1.0, (a * b.conj()).im);
        let rhs = displacement(a + b, space).unwrap().scaled(phase);
        prop_assert!(lhs.block_deviation(&rhs, &idx) < 1e-8);
    }

    #[test]
    fn doubling_the_cutoff_changes_nothing(a in complex_in_disc(2.5), b in complex_in_disc(2.5)) {
        let overlap = |n: usize| {
            let space = FockSpace::new(n).unwrap();
            coherent_state(b, space).unwrap().inner(&coherent_state(a, space).unwrap()).unwrap()
        };
        prop_assert!((overlap(64) - overlap(128)).norm() < 1e-10);
        let d = |n: usize| displacement(a, FockSpace::new(n).unwrap()).unwrap().entries().view((0, 0), (4, 4)).into_owned();
        prop_assert!((d(64) - d(128)).norm() < 1e-10);
    }
}
