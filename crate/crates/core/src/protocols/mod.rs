//! The experiments built on the propagators: ideal and finite-pulse
//! amplification, spectroscopic detection, the coherence probe, damped cat
//! decay, the two-oscillator variant, and the saturation and MRFM scaling
//! models.

mod amplify;
mod decay;
mod detect;
mod scaling;
mod two_mode;

pub use amplify::{
    amplified_amplitude, amplify_finite, amplify_finite_with, amplify_ideal, closed_form_propagator,
    composed_flip_propagator, conditional_amplitudes, displacement_power, finite_schedule, ideal_cat, plus_vacuum,
    AmplifyResult, PulseAlignment,
};
pub use detect::{
    coherence_probe, detect_spectroscopy, detect_spectroscopy_with, measure_sigma_x, resonant_drive_frequency,
    DetectOptions, DetectResult, DurationConvention, SigmaXMeasurement,
};
pub use scaling::{
    energy_gain_per_flip, energy_loss_per_flip, mrfm_amplitude, saturation, saturation_count, MrfmResult,
    SaturationModel, SaturationResult,
};
pub use decay::{cat_coherence_decay, CatDecay};
pub use two_mode::{two_mode_cat, TwoModeResult, TwoModeState};
