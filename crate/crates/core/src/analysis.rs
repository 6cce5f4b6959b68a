//! Observables and closed-form references: fidelity, reduced qubit state,
//! detection coefficients, position densities and the decoherence estimate.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{truncation_requirement, StateVector};
use crate::linalg::HermitianEigen;
use crate::spin_boson::SystemParams;

const BOLTZMANN: f64 = 1.380_649e-23;
const PLANCK: f64 = 6.626_070_15e-34;

/// |⟨a|b⟩|², clamped to [0, 1].
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QubitReducedState {
    pub rho: Matrix2<C64>,
    /// Ascending.
    pub eigenvalues: [f64; 2],
    /// Von Neumann entropy in nats.
    pub entropy: f64,
}

/// Partial trace over the oscillator of a composite state.
pub fn qubit_reduced(state: &StateVector) -> Result<QubitReducedState> {
    if state.dim() < 4 || state.dim() % 2 != 0 {
        return Err(Error::dimension(format!("composite state needs an even dimension >= 4, got {}", state.dim())));
    }
    let n = state.dim() / 2;
    let v = state.as_slice();
    let norm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    let (up, down) = v.split_at(n);
    let dot = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<C64>() / norm2;
    let rho = Matrix2::new(dot(up, up), dot(up, down), dot(down, up), dot(down, down));
    let a = rho[(0, 0)].re;
    let d = rho[(1, 1)].re;
    let half_gap = (((a - d) / 2.0).powi(2) + rho[(0, 1)].norm_sqr()).sqrt();
    let mid = (a + d) / 2.0;
    let eigenvalues = [mid - half_gap, mid + half_gap];
    Ok(QubitReducedState {
        rho,
        eigenvalues,
        entropy: von_neumann_entropy(&eigenvalues),
    })
}

/// −Σ λ ln λ with 0 ln 0 = 0; tiny negative rounding is treated as zero.
pub fn von_neumann_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0)
}

/// Entropy of the first factor of a bipartite pure state given as an
/// `n1 × n2` coefficient matrix.
pub fn bipartite_entropy(coeffs: &DMatrix<C64>) -> f64 {
    let norm2 = coeffs.norm_squared();
    let rho = coeffs * coeffs.adjoint() / C64::new(norm2, 0.0);
    let ev: Vec<f64> = HermitianEigen::new(&rho).values.iter().copied().collect();
    von_neumann_entropy(&ev)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionCoefficients {
    pub c_up: C64,
    pub c_down: C64,
    pub eps_bar: f64,
}

impl DetectionCoefficients {
    /// Probabilities of |+⟩ and |−⟩ after the π/2 pulse for an ideal cat
    /// whose |↑⟩ branch is driven on resonance: (|c↑|²/2, (1+|c↓|²)/2).
    pub fn cat_probabilities(&self) -> (f64, f64) {
        (self.c_up.norm_sqr() / 2.0, (1.0 + self.c_down.norm_sqr()) / 2.0)
    }
}

/// Final qubit amplitudes of a branch detuned by `shift` from a drive of
/// amplitude `eps_d` applied for π/ε_d, starting from |↓⟩:
/// c↑ = −i sin(πε̄/2ε_d) ε_d/ε̄, c↓ = cos(πε̄/2ε_d) − i sin(πε̄/2ε_d) shift/ε̄.
pub fn detection_coefficients(eps_d: f64, shift: f64) -> DetectionCoefficients {
    let eps_bar = eps_d.hypot(shift);
    let theta = std::f64::consts::PI * eps_bar / (2.0 * eps_d);
    let (s, c) = theta.sin_cos();
    let c_up = C64::new(0.0, -s * eps_d / eps_bar);
    let c_down = C64::new(c, -s * shift / eps_bar);
    let norm = (c_up.norm_sqr() + c_down.norm_sqr()).sqrt();
    DetectionCoefficients {
        c_up: c_up / norm,
        c_down: c_down / norm,
        eps_bar,
    }
}

/// Position densities of the two qubit branches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionDensity {
    pub grid: Vec<f64>,
    pub up: Vec<f64>,
    pub down: Vec<f64>,
}

/// Densities of x̂ = â + â† (units of δx₀) for each qubit branch of a
/// composite state. Each branch density integrates to that branch's
/// probability; ⟨x̂⟩ = 2 Re α for a coherent state and the vacuum variance
/// is 1.
pub fn position_density(state: &StateVector, grid: &[f64]) -> Result<PositionDensity> {
    if state.dim() % 2 != 0 {
        return Err(Error::dimension("composite state needs an even dimension"));
    }
    let norm2 = state.amplitudes().norm_squared();
    let n = state.dim() / 2;
    let (up, down) = state.as_slice().split_at(n);
    let scale = |v: &[C64]| -> Vec<C64> { v.iter().map(|c| c / norm2.sqrt()).collect() };
    Ok(PositionDensity {
        grid: grid.to_vec(),
        up: oscillator_position_density(&scale(up), grid)?,
        down: oscillator_position_density(&scale(down), grid)?,
    })
}

/// |Σ cₙ ψₙ(x)|² for oscillator amplitudes `coeffs` in the x̂ = â + â†
/// convention. The amplitudes are not renormalized.
pub fn oscillator_position_density(coeffs: &[C64], grid: &[f64]) -> Result<Vec<f64>> {
    let n = coeffs.len();
    if let Some(x) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::validation("grid", format!("non-finite position {x}")));
    }
    let mean_n: f64 = coeffs.iter().enumerate().map(|(k, c)| k as f64 * c.norm_sqr()).sum::<f64>()
        / coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
    let alpha = mean_n.sqrt();
    let required = truncation_requirement(alpha);
    if required > n {
        return Err(Error::Truncation {
            alpha,
            required,
            n_trunc: n,
        });
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    Ok(grid
        .iter()
        .map(|&x| {
            let q = x * inv_sqrt2;
            let amp = hermite_functions(q, n)
                .iter()
                .zip(coeffs)
                .map(|(h, c)| c * *h)
                .sum::<C64>();
            amp.norm_sqr() * inv_sqrt2
        })
        .collect())
}

/// Normalized Hermite functions ψ₀..ψ_{n−1} at quadrature `q`, by the
/// upward three-term recurrence.
pub fn hermite_functions(q: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-q * q / 2.0).exp();
    out.push(psi0);
    if n > 1 {
        out.push(std::f64::consts::SQRT_2 * q * psi0);
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// (2nα₀)² k_BT / Q in units of ω₀.
pub fn decoherence_estimate(n: u32, params: &SystemParams) -> f64 {
    let amp = 2.0 * n as f64 * params.alpha0();
    amp * amp * params.temperature / params.q_factor
}

/// k_BT/(hQ) in Hz for a temperature in kelvin.
pub fn thermal_dissipation_rate_hz(temperature_kelvin: f64, q_factor: f64) -> f64 {
    BOLTZMANN * temperature_kelvin / (PLANCK * q_factor)
}

/// k_BT/(h f₀): the temperature in units of the oscillator quantum.
pub fn temperature_in_oscillator_units(temperature_kelvin: f64, frequency_hz: f64) -> f64 {
    BOLTZMANN * temperature_kelvin / (PLANCK * frequency_hz)
}
