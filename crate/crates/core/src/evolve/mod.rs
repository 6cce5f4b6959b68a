//! Time propagation: exact exponentials for piecewise-static Hamiltonians,
//! a step-halving integrator for the driven detection Hamiltonian, and a
//! Lindblad integrator for a damped oscillator.

mod driven;
mod lindblad;
mod schedule;

pub use driven::{propagate_driven, propagate_driven_with, DrivenOptions, DrivenReport, Stepper};
pub use lindblad::{
    bose_occupation, lindblad_evolve, lindblad_evolve_with, lindblad_trajectory, BathParams, DensityMatrix,
    LindbladOptions,
};
pub use schedule::{PulseEvent, PulseSchedule};

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, StateVector};
use crate::linalg::HermitianEigen;
use crate::spin_boson::{build_h_rot, hadamard, SystemParams};

/// A cached eigendecomposition of a static Hamiltonian, reusable for any
/// number of propagation windows.
#[derive(Clone, Debug)]
pub struct StaticPropagator {
    eig: HermitianEigen,
}

impl StaticPropagator {
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        if !h.is_hermitian() && h.hermiticity_error() >= 1e-12 {
            return Err(Error::InvalidState("static propagation needs a hermitian Hamiltonian".into()));
        }
        Ok(StaticPropagator {
            eig: HermitianEigen::new(h.entries()),
        })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    /// `exp(−iH·duration) ψ`
    pub fn apply(&self, duration: f64, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::dimension(format!(
                "Hamiltonian of dimension {} applied to state of dimension {}",
                self.dim(),
                psi.dim()
            )));
        }
        if duration < 0.0 {
            return Err(Error::validation("duration", "must be >= 0"));
        }
        if duration == 0.0 {
            return Ok(psi.clone());
        }
        Ok(StateVector::from_raw(
            self.eig.exp_apply(C64::new(0.0, -duration), psi.amplitudes()),
        ))
    }

    /// The dense propagator `exp(−iH·duration)`.
    pub fn unitary(&self, duration: f64) -> OperatorMatrix {
        OperatorMatrix::from_parts(self.eig.exp_matrix(C64::new(0.0, -duration)), false, true)
    }
}

/// `exp(−iH·duration) ψ` for a hermitian `H`.
pub fn propagate_static(h: &OperatorMatrix, duration: f64, psi: &StateVector) -> Result<StateVector> {
    StaticPropagator::new(h)?.apply(duration, psi)
}

/// Applies a 2×2 qubit gate to every oscillator index of a composite state.
pub fn apply_qubit_gate(gate: &OperatorMatrix, psi: &StateVector) -> Result<StateVector> {
    if gate.dim() != 2 || psi.dim() % 2 != 0 {
        return Err(Error::dimension("qubit gate needs a 2x2 operator and an even-dimensional state"));
    }
    let n = psi.dim() / 2;
    let g = gate.entries();
    let v = psi.as_slice();
    let out = DVector::from_fn(psi.dim(), |i, _| {
        let (q, k) = (i / n, i % n);
        g[(q, 0)] * v[k] + g[(q, 1)] * v[n + k]
    });
    Ok(StateVector::from_raw(out))
}

/// −iσ_x on the qubit factor.
pub fn apply_ideal_flip(psi: &StateVector) -> Result<StateVector> {
    if psi.dim() % 2 != 0 {
        return Err(Error::dimension("flip needs an even-dimensional composite state"));
    }
    let n = psi.dim() / 2;
    let v = psi.as_slice();
    let mi = C64::new(0.0, -1.0);
    let out = DVector::from_fn(psi.dim(), |i, _| if i < n { mi * v[n + i] } else { mi * v[i - n] });
    Ok(StateVector::from_raw(out))
}

/// Runs a schedule from t = 0 to `total_time`. Free evolution between
/// events uses the rotating-frame Hamiltonian without the pulse term;
/// rectangular pulses add (ε⊥/2)σ_x at the event's amplitude; drives run the
/// driven integrator with the event's amplitude and frequency.
pub fn apply_schedule(schedule: &PulseSchedule, params: &SystemParams, psi: &StateVector) -> Result<StateVector> {
    apply_schedule_with(schedule, params, psi, &DrivenOptions::default())
}

pub fn apply_schedule_with(
    schedule: &PulseSchedule,
    params: &SystemParams,
    psi: &StateVector,
    driven: &DrivenOptions,
) -> Result<StateVector> {
    params.composite().check_state(psi)?;
    let free = StaticPropagator::new(&build_h_rot(params, false))?;
    let mut pulses: Vec<(f64, StaticPropagator)> = Vec::new();
    let mut state = psi.clone();
    let mut t = 0.0;
    for ev in schedule.events() {
        if ev.start() > t {
            state = free.apply(ev.start() - t, &state)?;
            t = ev.start();
        }
        match *ev {
            PulseEvent::InstantFlip { .. } => state = apply_ideal_flip(&state)?,
            PulseEvent::InstantHalfFlip { .. } => state = apply_qubit_gate(&hadamard(), &state)?,
            PulseEvent::RectPulse { duration, amplitude, .. } => {
                let idx = match pulses.iter().position(|(a, _)| *a == amplitude) {
                    Some(i) => i,
                    None => {
                        let p = SystemParams {
                            eps_perp_amp: amplitude,
                            ..params.clone()
                        };
                        pulses.push((amplitude, StaticPropagator::new(&build_h_rot(&p, true))?));
                        pulses.len() - 1
                    }
                };
                state = pulses[idx].1.apply(duration, &state)?;
            }
            PulseEvent::Drive {
                duration,
                amplitude,
                frequency,
                ..
            } => {
                let p = SystemParams {
                    eps_d: amplitude,
                    omega_d: frequency,
                    ..params.clone()
                };
                state = propagate_driven_with(&p, 0.0, duration, &state, driven)?.state;
            }
        }
        t = t.max(ev.end());
    }
    if schedule.total_time() > t {
        state = free.apply(schedule.total_time() - t, &state)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::fidelity;
    use crate::fock::{coherent_state, ladder_ops};
    use crate::spin_boson::{conditional_displacement, embed, identity2, parity, DOWN, UP};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn plus_vacuum(p: &SystemParams) -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        p.composite()
            .product(c(s, 0.0), c(s, 0.0), &StateVector::basis(p.n_trunc, 0))
            .unwrap()
    }

    #[test]
    fn zero_duration_is_identity() {
        let p = SystemParams::default();
        let psi = plus_vacuum(&p);
        assert_eq!(propagate_static(&build_h_rot(&p, false), 0.0, &psi).unwrap(), psi);
    }

    #[test]
    fn half_period_is_parity_for_free_oscillator() {
        let space = crate::fock::FockSpace::new(64).unwrap();
        let h = ladder_ops(space).number;
        let psi = coherent_state(c(1.5, 0.5), space).unwrap();
        let out = propagate_static(&h, std::f64::consts::PI, &psi).unwrap();
        let target = coherent_state(c(-1.5, -0.5), space).unwrap();
        assert!(fidelity(&out, &target).unwrap() > 1.0 - 1e-9);
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn free_step_is_displaced_parity() {
        let p = SystemParams::default();
        let u1 = StaticPropagator::new(&build_h_rot(&p, false)).unwrap().unitary(p.tau0());
        let d = conditional_displacement(&p).unwrap();
        let par = embed(&identity2(), &parity(p.fock()), p.composite()).unwrap();
        let ddp = d.matmul(&par).unwrap().matmul(&d.adjoint()).unwrap();
        let k = p.fock().interior_for(2.0 * p.alpha0());
        let idx: Vec<usize> = (0..k).chain(64..64 + k).collect();
        assert!(u1.phase_aligned_deviation(&ddp, &idx) < 1e-8);
    }

    #[test]
    fn composition_of_static_windows() {
        let p = SystemParams::default();
        let prop = StaticPropagator::new(&build_h_rot(&p, true)).unwrap();
        let psi = plus_vacuum(&p);
        let a = prop.apply(0.7, &prop.apply(0.4, &psi).unwrap()).unwrap();
        let b = prop.apply(1.1, &psi).unwrap();
        assert!(crate::linalg::diff_norm(a.as_slice(), b.as_slice()) < 1e-10);
    }

    #[test]
    fn empty_schedule_is_free_evolution() {
        let p = SystemParams::default();
        let psi = plus_vacuum(&p);
        let s = PulseSchedule::empty(p.tau0()).unwrap();
        let a = apply_schedule(&s, &p, &psi).unwrap();
        let b = propagate_static(&build_h_rot(&p, false), p.tau0(), &psi).unwrap();
        assert!(crate::linalg::diff_norm(a.as_slice(), b.as_slice()) < 1e-14);
    }

    #[test]
    fn single_flip_on_up() {
        let p = SystemParams::default();
        let space = p.composite();
        let psi = StateVector::basis(space.dim(), space.index(UP, 0));
        let s = PulseSchedule::new(vec![PulseEvent::InstantFlip { time: 0.0 }], 0.0).unwrap();
        let out = apply_schedule(&s, &p, &psi).unwrap();
        assert_eq!(out.as_slice()[space.index(DOWN, 0)], c(0.0, -1.0));
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_flips_make_small_cat() {
        let p = SystemParams::default();
        let tau = p.tau0();
        let s = PulseSchedule::new(
            vec![PulseEvent::InstantFlip { time: tau }, PulseEvent::InstantFlip { time: 2.0 * tau }],
            2.0 * tau,
        )
        .unwrap();
        let out = apply_schedule(&s, &p, &plus_vacuum(&p)).unwrap();
        let sq = std::f64::consts::FRAC_1_SQRT_2;
        let up = coherent_state(c(-0.4, 0.0), p.fock()).unwrap().scaled(c(sq, 0.0));
        let down = coherent_state(c(0.4, 0.0), p.fock()).unwrap().scaled(c(sq, 0.0));
        let cat = StateVector::new(DVector::from_iterator(
            128,
            up.as_slice().iter().chain(down.as_slice()).copied(),
        ))
        .unwrap();
        assert!(fidelity(&out, &cat).unwrap() > 1.0 - 1e-8);
    }

    #[test]
    fn schedule_is_deterministic() {
        let p = SystemParams::default();
        let s = PulseSchedule::new(
            vec![PulseEvent::RectPulse {
                start: 1.0,
                duration: 0.1,
                amplitude: 10.0 * std::f64::consts::PI,
            }],
            3.0,
        )
        .unwrap();
        let a = apply_schedule(&s, &p, &plus_vacuum(&p)).unwrap();
        let b = apply_schedule(&s, &p, &plus_vacuum(&p)).unwrap();
        assert_eq!(a, b);
    }
}
