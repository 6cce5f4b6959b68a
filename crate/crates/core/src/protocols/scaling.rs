use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin_boson::SystemParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MrfmResult {
    /// 2nmα₀
    pub amplitude: f64,
    /// Change of amplitude per unit of spin multiplicity, 2nα₀.
    pub resolution: f64,
    /// π/(4α₀)
    pub q_threshold: f64,
    /// 2nα₀ > 1 and the saturation count 2Q/π is at least n.
    pub single_spin_resolvable: bool,
}

/// Amplitudes for a spin of multiplicity `m` driving the oscillator through
/// `n` flips.
pub fn mrfm_amplitude(n: u32, m: u32, params: &SystemParams) -> Result<MrfmResult> {
    if n == 0 || m == 0 {
        return Err(Error::validation(if n == 0 { "n_pulses" } else { "m" }, "must be >= 1"));
    }
    let a0 = params.alpha0();
    let resolution = 2.0 * n as f64 * a0;
    Ok(MrfmResult {
        amplitude: resolution * m as f64,
        resolution,
        q_threshold: std::f64::consts::PI / (4.0 * a0),
        single_spin_resolvable: resolution > 1.0 && saturation_count(params.q_factor) >= n as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationModel {
    pub q_factor: f64,
    pub alpha0: f64,
    /// 2Q/π
    pub n_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationResult {
    pub model: SaturationModel,
    /// Saturated amplitude of the classical simulation in units of 2α₀;
    /// `None` when the amplitude is still growing at the horizon.
    pub simulated_n_s: Option<f64>,
    /// Flips simulated before the amplitude stopped changing.
    pub flips: u64,
}

/// 2Q/π
pub fn saturation_count(q_factor: f64) -> f64 {
    2.0 * q_factor / std::f64::consts::PI
}

/// Energy pumped in by flip n, 8nω₀α₀² (in units of ω₀).
pub fn energy_gain_per_flip(n: f64, params: &SystemParams) -> f64 {
    8.0 * n * params.omega0 * params.alpha0().powi(2)
}

/// Energy lost to damping over the half period of flip n, 4πn²ω₀α₀²/Q.
pub fn energy_loss_per_flip(n: f64, params: &SystemParams) -> f64 {
    4.0 * std::f64::consts::PI * n * n * params.omega0 * params.alpha0().powi(2) / params.q_factor
}

const MAX_FLIPS: u64 = 10_000_000;

/// Analytic saturation count plus a classical simulation: each half period
/// the oscillator swings about the branch centre sα₀ (s alternating with
/// every flip) while its distance from that centre decays by e^{−π/2Q}.
/// The simulation stops when the amplitude changes by less than 1e-12
/// relative over a full period.
pub fn saturation(params: &SystemParams) -> Result<SaturationResult> {
    if !(params.q_factor > 0.0) {
        return Err(Error::validation("q_factor", "must be > 0"));
    }
    let a0 = params.alpha0();
    let model = SaturationModel {
        q_factor: params.q_factor,
        alpha0: a0,
        n_s: saturation_count(params.q_factor),
    };
    if a0 == 0.0 {
        return Ok(SaturationResult {
            model,
            simulated_n_s: Some(0.0),
            flips: 0,
        });
    }
    let decay = (-std::f64::consts::PI / (2.0 * params.q_factor)).exp();
    let horizon = if params.q_factor.is_finite() {
        ((40.0 * params.q_factor).ceil() as u64).clamp(1000, MAX_FLIPS)
    } else {
        MAX_FLIPS
    };
    let mut z: f64 = 0.0;
    let mut sign = -1.0;
    let mut last_period = 0.0;
    for k in 1..=horizon {
        let centre = sign * a0;
        z = centre - (z - centre) * decay;
        sign = -sign;
        if k % 2 == 0 {
            if (z.abs() - last_period).abs() <= 1e-12 * z.abs() {
                return Ok(SaturationResult {
                    model,
                    simulated_n_s: Some(z.abs() / (2.0 * a0.abs())),
                    flips: k,
                });
            }
            last_period = z.abs();
        }
    }
    Ok(SaturationResult {
        model,
        simulated_n_s: None,
        flips: horizon,
    })
}
