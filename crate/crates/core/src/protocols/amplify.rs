use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::analysis::fidelity;
use crate::error::{Error, Result};
use crate::evolve::{apply_ideal_flip, apply_schedule, PulseEvent, PulseSchedule, StaticPropagator};
use crate::fock::{coherent_state, displacement, ladder_ops, OperatorMatrix, StateVector};
use crate::spin_boson::{
    block_diag, build_h_rot, conditional_displacement, embed, ideal_flip, parity, sigma_x, SystemParams,
};

#[derive(Clone, Debug, PartialEq)]
pub struct AmplifyResult {
    pub final_state: StateVector,
    pub n_pulses: u32,
    /// ⟨â⟩ within the |↑⟩ and |↓⟩ branches; `None` for an unpopulated branch.
    pub conditional_amplitudes: [Option<C64>; 2],
    pub fidelity_vs_ideal: f64,
}

/// Where a finite rectangular pulse sits relative to its nominal flip time
/// kτ₀.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseAlignment {
    /// The pulse starts at kτ₀.
    #[default]
    LeadingEdge,
    /// The pulse is centred on kτ₀.
    Centered,
}

/// Largest conditional amplitude reached after `n` flips, 2nα₀.
pub fn amplified_amplitude(n: u32, params: &SystemParams) -> f64 {
    2.0 * n as f64 * params.alpha0().abs()
}

/// ⟨â⟩ within each qubit branch of a composite state.
pub fn conditional_amplitudes(state: &StateVector, params: &SystemParams) -> Result<[Option<C64>; 2]> {
    let space = params.composite();
    let a = ladder_ops(space.fock()).lower;
    let mut out = [None, None];
    for (q, slot) in out.iter_mut().enumerate() {
        let branch = space.branch(state, q)?;
        if branch.norm() > 1e-6 {
            *slot = Some(branch.expectation(&a)?);
        }
    }
    Ok(out)
}

/// (|↑⟩|−2nα₀⟩ + |↓⟩|2nα₀⟩)/√2 built from coherent states.
pub fn ideal_cat(n: u32, params: &SystemParams) -> Result<StateVector> {
    let beta = amplified_amplitude(n, params) * params.alpha0().signum();
    let fock = params.fock();
    let up = coherent_state(C64::new(-beta, 0.0), fock)?;
    let down = coherent_state(C64::new(beta, 0.0), fock)?;
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let joined: Vec<C64> = up.as_slice().iter().chain(down.as_slice()).map(|c| c * s).collect();
    StateVector::new(nalgebra::DVector::from_vec(joined))
}

/// (|↑⟩ + |↓⟩)/√2 ⊗ |0⟩
pub fn plus_vacuum(params: &SystemParams) -> StateVector {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    params
        .composite()
        .product(s, s, &StateVector::basis(params.n_trunc, 0))
        .expect("matching dims")
}

/// The closed-form n-flip propagator: (D†)^{2n} for even n and
/// σ_x e^{−iπâ†â}(D†)^{2n} for odd n, with (D†)^{2n} assembled directly as
/// conditional displacements by ∓2nα₀.
pub fn closed_form_propagator(n: u32, params: &SystemParams) -> Result<OperatorMatrix> {
    let beta = 2.0 * n as f64 * params.alpha0();
    let fock = params.fock();
    let d2n = block_diag(
        &displacement(C64::new(-beta, 0.0), fock)?,
        &displacement(C64::new(beta, 0.0), fock)?,
    )?;
    if n % 2 == 0 {
        return Ok(d2n);
    }
    let sp = embed(&sigma_x(), &parity(fock), params.composite())?;
    sp.matmul(&d2n)
}

/// ((−iσ_x)U₁)ⁿ as a dense matrix, U₁ = e^{−iH_rot τ₀}.
pub fn composed_flip_propagator(n: u32, params: &SystemParams) -> Result<OperatorMatrix> {
    let u1 = StaticPropagator::new(&build_h_rot(params, false))?.unitary(params.tau0());
    let step = ideal_flip(params.composite()).matmul(&u1)?;
    Ok(step.pow(n))
}

/// (D†)^{2n} obtained by multiplying the single-step conditional
/// displacement, for comparison with [`closed_form_propagator`].
pub fn displacement_power(n: u32, params: &SystemParams) -> Result<OperatorMatrix> {
    Ok(conditional_displacement(params)?.adjoint().pow(2 * n))
}

/// Applies n rounds of free evolution for τ₀ followed by an ideal −iσ_x.
/// The fidelity is measured against the closed-form propagator applied to
/// `initial`.
pub fn amplify_ideal(n: u32, params: &SystemParams, initial: &StateVector) -> Result<AmplifyResult> {
    params.validate()?;
    params.composite().check_state(initial)?;
    params.fock().check_amplitude(amplified_amplitude(n, params))?;
    let prop = StaticPropagator::new(&build_h_rot(params, false))?;
    let mut state = initial.clone();
    for _ in 0..n {
        state = apply_ideal_flip(&prop.apply(params.tau0(), &state)?)?;
    }
    let reference = closed_form_propagator(n, params)?.apply(initial)?;
    let fid = fidelity(&reference, &state)? / (reference.norm().powi(2) * state.norm().powi(2));
    Ok(AmplifyResult {
        conditional_amplitudes: conditional_amplitudes(&state, params)?,
        final_state: state,
        n_pulses: n,
        fidelity_vs_ideal: fid.clamp(0.0, 1.0),
    })
}

/// The finite-pulse schedule: n rectangular pulses of amplitude ε⊥ and
/// area π, aligned to kτ₀ for k = 1..n, ending when the last pulse ends.
pub fn finite_schedule(n: u32, eps_perp: f64, params: &SystemParams, alignment: PulseAlignment) -> Result<PulseSchedule> {
    if !(eps_perp > 0.0) || !eps_perp.is_finite() {
        return Err(Error::validation("eps_perp", "must be finite and > 0"));
    }
    let width = std::f64::consts::PI / eps_perp;
    let tau = params.tau0();
    if width >= tau {
        return Err(Error::ScheduleOverlap {
            time: tau,
            detail: format!("pulse duration π/ε⊥ = {width:.4} is not shorter than τ₀ = {tau:.4}"),
        });
    }
    let offset = match alignment {
        PulseAlignment::LeadingEdge => 0.0,
        PulseAlignment::Centered => -width / 2.0,
    };
    let events: Vec<PulseEvent> = (1..=n)
        .map(|k| PulseEvent::RectPulse {
            start: k as f64 * tau + offset,
            duration: width,
            amplitude: eps_perp,
        })
        .collect();
    let end = if n == 0 { 0.0 } else { n as f64 * tau + offset + width };
    PulseSchedule::new(events, end)
}

/// Finite-amplitude amplification with leading-edge pulses.
pub fn amplify_finite(n: u32, eps_perp: f64, params: &SystemParams, initial: &StateVector) -> Result<AmplifyResult> {
    amplify_finite_with(n, eps_perp, params, initial, PulseAlignment::default())
}

/// Runs the finite-pulse schedule and compares with ideal flips at kτ₀
/// evolved freely to the same end time: f = |⟨ψ_id|ψ⟩|².
pub fn amplify_finite_with(
    n: u32,
    eps_perp: f64,
    params: &SystemParams,
    initial: &StateVector,
    alignment: PulseAlignment,
) -> Result<AmplifyResult> {
    params.validate()?;
    params.composite().check_state(initial)?;
    params.fock().check_amplitude(amplified_amplitude(n, params))?;
    let schedule = finite_schedule(n, eps_perp, params, alignment)?;
    let state = apply_schedule(&schedule, params, initial)?;
    let flips: Vec<PulseEvent> = (1..=n)
        .map(|k| PulseEvent::InstantFlip {
            time: k as f64 * params.tau0(),
        })
        .collect();
    let ideal_schedule = PulseSchedule::new(flips, schedule.total_time().max(n as f64 * params.tau0()))?;
    let ideal = apply_schedule(&ideal_schedule, params, initial)?;
    Ok(AmplifyResult {
        conditional_amplitudes: conditional_amplitudes(&state, params)?,
        fidelity_vs_ideal: fidelity(&ideal, &state)?,
        final_state: state,
        n_pulses: n,
    })
}
