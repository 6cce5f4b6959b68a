use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{lindblad_trajectory, BathParams, DensityMatrix, LindbladOptions};
use crate::fock::{coherent_state, ladder_ops, FockSpace};
use crate::spin_boson::SystemParams;

/// Damped decay of an oscillator cat (|α⟩+|−α⟩)/norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatDecay {
    pub amplitude: f64,
    pub bath: BathParams,
    pub times: Vec<f64>,
    /// |⟨α_t|ρ|−α_t⟩| / √(⟨α_t|ρ|α_t⟩⟨−α_t|ρ|−α_t⟩) with α_t = αe^{−γt/2}.
    pub visibility: Vec<f64>,
    /// Least-squares slope of −ln V against t.
    pub fitted_rate: f64,
    /// 4γ(n̄+½)α², the short-time rate for a thermal bath.
    pub short_time_rate: f64,
    /// α² k_BT/Q.
    pub estimate: f64,
}

/// Evolves the cat under H = ω₀n̂ with the bath of `params` (γ = ω₀/Q,
/// thermal n̄ at k_BT = `temperature`) and samples its interference
/// visibility after each of `samples` intervals of `periods_per_sample`
/// oscillator periods. Sampling at whole periods keeps the two components
/// on the real axis.
pub fn cat_coherence_decay(
    amplitude: f64,
    params: &SystemParams,
    periods_per_sample: u32,
    samples: usize,
) -> Result<CatDecay> {
    params.validate()?;
    if !(amplitude > 0.0) {
        return Err(Error::validation("amplitude", "must be > 0"));
    }
    if periods_per_sample == 0 || samples < 2 {
        return Err(Error::validation("samples", "need at least two samples of one period or more"));
    }
    let fock = params.fock();
    fock.check_amplitude(amplitude)?;
    let bath = BathParams::from_system(params)?;
    let ops = ladder_ops(fock);
    let h = ops.number.scaled(C64::new(params.omega0, 0.0));
    let plus = coherent_state(C64::new(amplitude, 0.0), fock)?;
    let minus = coherent_state(C64::new(-amplitude, 0.0), fock)?;
    let rho0 = DensityMatrix::from_pure(&plus.add(&minus)?.normalized()?)?;
    let period = 2.0 * std::f64::consts::PI / params.omega0;
    let times: Vec<f64> = (0..=samples)
        .map(|k| (k as u64 * periods_per_sample as u64) as f64 * period)
        .collect();
    let states = lindblad_trajectory(&h, bath, &ops.lower, &rho0, &times[1..], &LindbladOptions::default())?;
    let mut visibility = vec![visibility_at(&rho0, amplitude, fock)?];
    for (rho, &t) in states.iter().zip(&times[1..]) {
        visibility.push(visibility_at(rho, amplitude * (-0.5 * bath.gamma * t).exp(), fock)?);
    }
    let logs: Vec<f64> = visibility.iter().map(|v| v.ln()).collect();
    let fitted_rate = -slope(&times, &logs);
    Ok(CatDecay {
        amplitude,
        bath,
        short_time_rate: 4.0 * bath.gamma * (bath.nbar + 0.5) * amplitude * amplitude,
        estimate: amplitude * amplitude * params.temperature / params.q_factor,
        times,
        visibility,
        fitted_rate,
    })
}

fn visibility_at(rho: &DensityMatrix, alpha: f64, fock: FockSpace) -> Result<f64> {
    let a = coherent_state(C64::new(alpha, 0.0), fock)?;
    let b = coherent_state(C64::new(-alpha, 0.0), fock)?;
    let ab = rho.matrix_element(&a, &b)?.norm();
    let aa = rho.matrix_element(&a, &a)?.re;
    let bb = rho.matrix_element(&b, &b)?.re;
    Ok(ab / (aa * bb).sqrt())
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
