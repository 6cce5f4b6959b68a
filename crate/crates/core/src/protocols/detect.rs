use serde::{Deserialize, Serialize};

use crate::analysis::detection_coefficients;
use crate::error::{Error, Result};
use crate::evolve::{apply_ideal_flip, apply_qubit_gate, propagate_driven_with, DrivenOptions, StaticPropagator};
use crate::fock::StateVector;
use crate::spin_boson::{build_h_rot, hadamard, SystemParams, DOWN, UP};

use super::amplify::amplified_amplitude;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectResult {
    pub p_plus: f64,
    pub p_minus: f64,
    pub analytic_p_plus: f64,
    pub analytic_p_minus: f64,
}

/// How long the detection drive stays on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DurationConvention {
    /// π/ε_d: a full flip on resonance.
    #[default]
    CalibratedPiOverEpsd,
    /// π/ω_d.
    PiOverOmegad,
}

impl DurationConvention {
    pub fn duration(&self, params: &SystemParams) -> Result<f64> {
        let (value, field) = match self {
            DurationConvention::CalibratedPiOverEpsd => (params.eps_d, "eps_d"),
            DurationConvention::PiOverOmegad => (params.omega_d, "omega_d"),
        };
        if !(value.abs() > 0.0) {
            return Err(Error::validation(field, "must be nonzero to set the drive duration"));
        }
        Ok(std::f64::consts::PI / value.abs())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectOptions {
    pub duration: DurationConvention,
    /// Drive frequency; `None` selects the resonance ε_z − 4nα₀λ₀ of the
    /// |↑⟩|−2nα₀⟩ branch.
    pub omega_d: Option<f64>,
    pub driven: DrivenOptions,
}

/// ε_z − 4nα₀λ₀: the qubit splitting of the |↑⟩ branch at −2nα₀.
pub fn resonant_drive_frequency(params: &SystemParams, n: u32) -> f64 {
    params.eps_z - 4.0 * n as f64 * params.alpha0() * params.lambda0
}

/// Outcome of an ideal σ_x measurement. The collapsed states are the
/// normalized oscillator factors of |±⟩ ⊗ φ±; they are absent when the
/// outcome probability is below 1e-12.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaXMeasurement {
    pub p_plus: f64,
    pub p_minus: f64,
    pub collapsed_plus: Option<StateVector>,
    pub collapsed_minus: Option<StateVector>,
}

pub fn measure_sigma_x(state: &StateVector) -> Result<SigmaXMeasurement> {
    if state.dim() % 2 != 0 || state.dim() < 4 {
        return Err(Error::dimension("σ_x measurement needs a composite state"));
    }
    let n = state.dim() / 2;
    let v = state.as_slice();
    let total: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let branch = |sign: f64| -> Vec<_> { (0..n).map(|k| (v[k] + v[n + k] * sign) * s).collect() };
    let plus = branch(1.0);
    let minus = branch(-1.0);
    let prob = |b: &[num_complex::Complex64]| b.iter().map(|c| c.norm_sqr()).sum::<f64>() / total;
    let p_plus = prob(&plus);
    let p_minus = 1.0 - p_plus;
    let collapse = |b: Vec<num_complex::Complex64>, p: f64| {
        if p < 1e-12 {
            None
        } else {
            StateVector::new(nalgebra::DVector::from_vec(b)).ok()
        }
    };
    Ok(SigmaXMeasurement {
        p_plus,
        p_minus,
        collapsed_plus: collapse(plus, p_plus),
        collapsed_minus: collapse(minus, p_minus),
    })
}

/// Spectroscopic readout with the default options: drive at the |↑⟩-branch
/// resonance for π/ε_d, apply the π/2 pulse, measure σ_x.
pub fn detect_spectroscopy(state: &StateVector, params: &SystemParams, n: u32) -> Result<DetectResult> {
    detect_spectroscopy_with(state, params, n, &DetectOptions::default())
}

pub fn detect_spectroscopy_with(
    state: &StateVector,
    params: &SystemParams,
    n: u32,
    opts: &DetectOptions,
) -> Result<DetectResult> {
    params.validate()?;
    params.composite().check_state(state)?;
    params.fock().check_amplitude(amplified_amplitude(n, params))?;
    if !(params.eps_d > 0.0) {
        return Err(Error::validation("eps_d", "must be > 0"));
    }
    let p = SystemParams {
        omega_d: opts.omega_d.unwrap_or_else(|| resonant_drive_frequency(params, n)),
        ..params.clone()
    };
    let duration = opts.duration.duration(&p)?;
    let driven = propagate_driven_with(&p, 0.0, duration, state, &opts.driven)?.state;
    let rotated = apply_qubit_gate(&hadamard(), &driven)?;
    let m = measure_sigma_x(&rotated)?;
    let shift = 8.0 * n as f64 * params.alpha0() * params.lambda0;
    let (analytic_p_plus, analytic_p_minus) = detection_coefficients(params.eps_d, shift).cat_probabilities();
    Ok(DetectResult {
        p_plus: m.p_plus,
        p_minus: m.p_minus,
        analytic_p_plus,
        analytic_p_minus,
    })
}

/// Coherence probe: π/2 pulse, n further ideal flips, σ_x measurement.
///
/// With `coherent_input` the state is used as given. Otherwise the two
/// qubit branches are run separately and their outcome probabilities are
/// averaged with the branch weights, which is the incoherent mixture of the
/// same populations. The analytic pair is the non-overlapping limit:
/// (3/4, 1/4) for the coherent cat and (1/2, 1/2) for the mixture.
pub fn coherence_probe(state: &StateVector, params: &SystemParams, n: u32, coherent_input: bool) -> Result<DetectResult> {
    params.validate()?;
    let space = params.composite();
    space.check_state(state)?;
    params.fock().check_amplitude(2.0 * amplified_amplitude(n, params))?;
    let prop = StaticPropagator::new(&build_h_rot(params, false))?;
    let run = |psi: &StateVector| -> Result<f64> {
        let mut s = apply_qubit_gate(&hadamard(), psi)?;
        for _ in 0..n {
            s = apply_ideal_flip(&prop.apply(params.tau0(), &s)?)?;
        }
        Ok(measure_sigma_x(&s)?.p_plus)
    };
    let (p_plus, analytic_p_plus) = if coherent_input {
        (run(state)?, 0.75)
    } else {
        let total = state.amplitudes().norm_squared();
        let mut acc = 0.0;
        for q in [UP, DOWN] {
            let mut part = vec![num_complex::Complex64::new(0.0, 0.0); space.dim()];
            let range = q * space.n_trunc()..(q + 1) * space.n_trunc();
            part[range.clone()].copy_from_slice(&state.as_slice()[range]);
            let part = StateVector::from_raw(nalgebra::DVector::from_vec(part));
            let weight = part.amplitudes().norm_squared() / total;
            if weight > 0.0 {
                acc += weight * run(&part.normalized()?)?;
            }
        }
        (acc, 0.5)
    };
    Ok(DetectResult {
        p_plus,
        p_minus: 1.0 - p_plus,
        analytic_p_plus,
        analytic_p_minus: 1.0 - analytic_p_plus,
    })
}
