use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::analysis::bipartite_entropy;
use crate::error::{Error, Result};
use crate::evolve::StaticPropagator;
use crate::fock::{ladder_ops, FockSpace, OperatorMatrix};
use crate::spin_boson::{SystemParams, DOWN, UP};

const MAX_JOINT_DIM: usize = 8192;

/// Two oscillators sharing one qubit, stored as a coefficient matrix
/// `Ψ_q[j, k]` per qubit branch (mode 1 index `j`, mode 2 index `k`).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    pub branches: [DMatrix<C64>; 2],
}

impl TwoModeState {
    pub fn norm_squared(&self) -> f64 {
        self.branches.iter().map(|b| b.norm_squared()).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeResult {
    /// The joint state after the flips, before measurement.
    pub state: TwoModeState,
    /// `[branch][mode]` conditional ⟨â_i⟩.
    pub conditional_amplitudes: [[C64; 2]; 2],
    pub p_plus: f64,
    pub p_minus: f64,
    /// Normalized two-oscillator states left by the σ_x outcomes.
    pub collapsed_plus: Option<DMatrix<C64>>,
    pub collapsed_minus: Option<DMatrix<C64>>,
    /// Entropy of mode 1 after each outcome (nats).
    pub mode1_entropy_plus: f64,
    pub mode1_entropy_minus: f64,
}

fn single_mode_hamiltonian(omega0: f64, coupling: f64, sz: f64, n: usize) -> OperatorMatrix {
    let ops = ladder_ops(FockSpace::new(n).expect("n >= 2"));
    let x = ops.lower.entries() + ops.raise.entries();
    let h = ops.number.entries() * C64::new(omega0, 0.0) - x * C64::new(0.5 * coupling * sz, 0.0);
    OperatorMatrix::hermitian(h).expect("symmetric construction")
}

/// Ideal flip protocol with coupling −Σᵢ(λᵢ/2)(âᵢ+âᵢ†)σ_z from
/// (|↑⟩+|↓⟩)/√2 ⊗ |0,0⟩, followed by a σ_x measurement. Both modes use
/// `params.n_trunc`; each branch evolves as a product of single-mode
/// propagators, so the joint matrix is never formed.
pub fn two_mode_cat(n: u32, lambda01: f64, lambda02: f64, params: &SystemParams) -> Result<TwoModeResult> {
    params.validate()?;
    let nt = params.n_trunc;
    if 2 * nt * nt > MAX_JOINT_DIM {
        return Err(Error::dimension(format!(
            "two-mode dimension 2·{nt}·{nt} exceeds {MAX_JOINT_DIM}"
        )));
    }
    let fock = params.fock();
    for l in [lambda01, lambda02] {
        fock.check_amplitude(n as f64 * l.abs() / params.omega0)?;
    }
    let tau = params.tau0();
    let mut props = Vec::new();
    for sz in [1.0, -1.0] {
        let u1 = StaticPropagator::new(&single_mode_hamiltonian(params.omega0, lambda01, sz, nt))?.unitary(tau);
        let u2 = StaticPropagator::new(&single_mode_hamiltonian(params.omega0, lambda02, sz, nt))?.unitary(tau);
        props.push((u1.into_entries(), u2.into_entries().transpose()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut vac = DMatrix::zeros(nt, nt);
    vac[(0, 0)] = C64::new(s, 0.0);
    let mut branches = [vac.clone(), vac];
    let mi = C64::new(0.0, -1.0);
    for _ in 0..n {
        let up = &props[UP].0 * &branches[UP] * &props[UP].1;
        let down = &props[DOWN].0 * &branches[DOWN] * &props[DOWN].1;
        branches = [down * mi, up * mi];
    }
    let a = ladder_ops(fock).lower.into_entries();
    let at = a.transpose();
    let mut conditional = [[C64::new(0.0, 0.0); 2]; 2];
    for q in [UP, DOWN] {
        let psi = &branches[q];
        let norm2 = psi.norm_squared();
        conditional[q][0] = psi.dotc(&(&a * psi)) / norm2;
        conditional[q][1] = psi.dotc(&(psi * &at)) / norm2;
    }
    let total = branches[UP].norm_squared() + branches[DOWN].norm_squared();
    let plus = (&branches[UP] + &branches[DOWN]) * C64::new(s, 0.0);
    let minus = (&branches[UP] - &branches[DOWN]) * C64::new(s, 0.0);
    let p_plus = plus.norm_squared() / total;
    let p_minus = 1.0 - p_plus;
    let collapse = |m: DMatrix<C64>, p: f64| {
        if p < 1e-12 {
            None
        } else {
            let norm = m.norm();
            Some(m / C64::new(norm, 0.0))
        }
    };
    let mode1_entropy_plus = if p_plus < 1e-12 { 0.0 } else { bipartite_entropy(&plus) };
    let mode1_entropy_minus = if p_minus < 1e-12 { 0.0 } else { bipartite_entropy(&minus) };
    Ok(TwoModeResult {
        collapsed_plus: collapse(plus, p_plus),
        collapsed_minus: collapse(minus, p_minus),
        state: TwoModeState { branches },
        conditional_amplitudes: conditional,
        p_plus,
        p_minus,
        mode1_entropy_plus,
        mode1_entropy_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize) -> SystemParams {
        SystemParams {
            n_trunc: n,
            ..SystemParams::default()
        }
    }

    #[test]
    fn uncoupled_second_mode_stays_in_vacuum() {
        let p = params(48);
        let r = two_mode_cat(6, 0.2, 0.0, &p).unwrap();
        for q in [UP, DOWN] {
            assert!(r.conditional_amplitudes[q][1].norm() < 1e-12);
            let b = &r.state.branches[q];
            let off_vacuum: f64 = (0..48)
                .flat_map(|j| (1..48).map(move |k| (j, k)))
                .map(|(j, k)| b[(j, k)].norm_sqr())
                .sum();
            assert!(off_vacuum < 1e-20);
        }
        assert!((r.conditional_amplitudes[UP][0].re + 1.2).abs() < 1e-6);
        assert!((r.conditional_amplitudes[DOWN][0].re - 1.2).abs() < 1e-6);
    }

    #[test]
    fn symmetric_couplings_give_equal_amplitudes() {
        let p = params(48);
        let r = two_mode_cat(4, 0.2, 0.2, &p).unwrap();
        for q in [UP, DOWN] {
            assert!((r.conditional_amplitudes[q][0] - r.conditional_amplitudes[q][1]).norm() < 1e-12);
        }
    }

    #[test]
    fn twelve_flips_maximally_entangle_modes() {
        let p = params(64);
        let r = two_mode_cat(12, 0.2, 0.2, &p).unwrap();
        assert!((r.conditional_amplitudes[UP][0].re + 2.4).abs() < 1e-6);
        assert!((r.conditional_amplitudes[DOWN][1].re - 2.4).abs() < 1e-6);
        assert!((r.p_plus - 0.5).abs() < 1e-6);
        assert!((r.mode1_entropy_plus - std::f64::consts::LN_2).abs() < 1e-3);
        assert!((r.mode1_entropy_minus - std::f64::consts::LN_2).abs() < 1e-3);
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(two_mode_cat(1, 0.2, 0.2, &params(65)), Err(Error::Dimension(_))));
        assert!(matches!(two_mode_cat(12, 0.2, 0.2, &params(30)), Err(Error::Truncation { .. })));
    }
}
