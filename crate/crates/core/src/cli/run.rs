use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{RunConfig, Scenario};
use crate::error::{Error, Result};
use crate::fock::truncation_requirement;
use crate::protocols::{
    amplify_finite_with, amplify_ideal, cat_coherence_decay, coherence_probe, detect_spectroscopy_with,
    energy_gain_per_flip, energy_loss_per_flip, finite_schedule, ideal_cat, mrfm_amplitude, plus_vacuum,
    resonant_drive_frequency, saturation, two_mode_cat, DetectOptions,
};
use crate::spin_boson::{SystemParams, DOWN, UP};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub value: f64,
    pub values: Vec<f64>,
}

/// Rows in ascending grid order; `columns` names the entries of each
/// row's `values`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub variable: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub metadata: Metadata,
}

fn base_columns(scenario: Scenario) -> &'static [&'static str] {
    match scenario {
        Scenario::AmplifyIdeal | Scenario::AmplifyFinite => {
            &["alpha_up_re", "alpha_up_im", "alpha_down_re", "alpha_down_im", "fidelity"]
        }
        Scenario::SweepFidelity => &["fidelity"],
        Scenario::Detect => &["p_plus", "p_minus", "analytic_p_plus", "analytic_p_minus"],
        Scenario::SweepDetect => &["p_minus", "analytic_p_minus"],
        Scenario::Cohere => &["p_plus_cat", "p_minus_cat", "p_plus_mixture", "p_minus_mixture"],
        Scenario::Lindblad => &["amplitude", "fitted_rate", "short_time_rate", "estimate"],
        Scenario::TwoMode => &[
            "alpha1_up_re",
            "alpha2_up_re",
            "alpha1_down_re",
            "alpha2_down_re",
            "p_plus",
            "p_minus",
            "entropy_plus",
            "entropy_minus",
        ],
        Scenario::Mrfm => &["amplitude", "resolution", "q_threshold", "single_spin_resolvable"],
        Scenario::Saturation => &["n_s", "simulated_n_s", "flips", "energy_gain_at_n_s", "energy_loss_at_n_s"],
    }
}

fn number_label(v: f64) -> String {
    format!("{v}").replace('.', "_").replace('-', "m")
}

/// Column names: each base observable, suffixed by its series when a run
/// carries several pulse counts or qubit splittings side by side.
pub fn columns(config: &RunConfig) -> Vec<String> {
    let series_n = config.series_n();
    let series_z = config.series_eps_z();
    let mut out = Vec::new();
    for n in &series_n {
        for ez in &series_z {
            let mut suffix = String::new();
            if let (Some(n), true) = (n, series_n.len() > 1) {
                suffix.push_str(&format!("_n{n}"));
            }
            if let (Some(ez), true) = (ez, series_z.len() > 1) {
                suffix.push_str(&format!("_eps_z_{}", number_label(*ez)));
            }
            out.extend(base_columns(config.scenario.name).iter().map(|b| format!("{b}{suffix}")));
        }
    }
    out
}

fn point_error(config: &RunConfig, index: usize, value: f64, source: Error) -> Error {
    Error::AtGridPoint {
        index,
        variable: config.grid().0.to_string(),
        value,
        source: Box::new(source),
    }
}

fn as_validation(field: &str, e: Error) -> Error {
    if e.is_config_error() {
        e
    } else {
        Error::validation(field, e.to_string())
    }
}

fn check_point(config: &RunConfig, p: &SystemParams, n: u32) -> Result<()> {
    p.validate()?;
    let sc = &config.scenario;
    match sc.name {
        Scenario::AmplifyFinite | Scenario::SweepFidelity => {
            finite_schedule(n, p.eps_perp_amp, p, sc.pulse_alignment).map_err(|e| as_validation("params.eps_perp", e))?;
        }
        Scenario::Detect | Scenario::SweepDetect => {
            if !(p.eps_d > 0.0) {
                return Err(Error::validation("params.eps_d", "must be > 0"));
            }
            let probe = SystemParams {
                omega_d: sc.omega_d.unwrap_or_else(|| resonant_drive_frequency(p, n)),
                ..p.clone()
            };
            sc.duration_convention.duration(&probe)?;
        }
        Scenario::TwoMode => {
            if 2 * p.n_trunc * p.n_trunc > 8192 {
                return Err(Error::validation("params.n_trunc", "two-mode runs need 2·n_trunc² <= 8192"));
            }
        }
        Scenario::Saturation if !p.q_factor.is_finite() => {
            return Err(Error::validation("params.q_factor", "must be finite for saturation"));
        }
        _ => {}
    }
    let required = truncation_requirement(sc.name.alpha_max(n, sc, p));
    if p.n_trunc < required {
        return Err(Error::validation(
            "params.n_trunc",
            format!("needs n_trunc >= {required}, got {}", p.n_trunc),
        ));
    }
    Ok(())
}

/// Validates every grid point without running any protocol.
pub fn preflight(config: &RunConfig) -> Result<()> {
    let (_, values) = config.grid();
    for (i, &v) in values.iter().enumerate() {
        for n in config.series_n() {
            for ez in config.series_eps_z() {
                let (p, pulses) = config.point(v, n, ez);
                check_point(config, &p, pulses).map_err(|e| point_error(config, i, v, e))?;
            }
        }
    }
    Ok(())
}

fn amplitude_parts(a: Option<C64>) -> [f64; 2] {
    a.map_or([f64::NAN; 2], |c| [c.re, c.im])
}

fn evaluate(config: &RunConfig, p: &SystemParams, n: u32) -> Result<Vec<f64>> {
    let sc = &config.scenario;
    Ok(match sc.name {
        Scenario::AmplifyIdeal | Scenario::AmplifyFinite => {
            let r = if sc.name == Scenario::AmplifyIdeal {
                amplify_ideal(n, p, &plus_vacuum(p))?
            } else {
                amplify_finite_with(n, p.eps_perp_amp, p, &plus_vacuum(p), sc.pulse_alignment)?
            };
            let [ur, ui] = amplitude_parts(r.conditional_amplitudes[UP]);
            let [dr, di] = amplitude_parts(r.conditional_amplitudes[DOWN]);
            vec![ur, ui, dr, di, r.fidelity_vs_ideal]
        }
        Scenario::SweepFidelity => {
            vec![amplify_finite_with(n, p.eps_perp_amp, p, &plus_vacuum(p), sc.pulse_alignment)?.fidelity_vs_ideal]
        }
        Scenario::Detect | Scenario::SweepDetect => {
            let opts = DetectOptions {
                duration: sc.duration_convention,
                omega_d: sc.omega_d,
                ..DetectOptions::default()
            };
            let r = detect_spectroscopy_with(&ideal_cat(n, p)?, p, n, &opts)?;
            if sc.name == Scenario::Detect {
                vec![r.p_plus, r.p_minus, r.analytic_p_plus, r.analytic_p_minus]
            } else {
                vec![r.p_minus, r.analytic_p_minus]
            }
        }
        Scenario::Cohere => {
            let cat = ideal_cat(n, p)?;
            let coherent = coherence_probe(&cat, p, n, true)?;
            let mixture = coherence_probe(&cat, p, n, false)?;
            vec![coherent.p_plus, coherent.p_minus, mixture.p_plus, mixture.p_minus]
        }
        Scenario::Lindblad => {
            let amp = 2.0 * n as f64 * p.alpha0().abs();
            let r = cat_coherence_decay(amp, p, sc.periods_per_sample, sc.samples)?;
            vec![amp, r.fitted_rate, r.short_time_rate, r.estimate]
        }
        Scenario::TwoMode => {
            let r = two_mode_cat(n, sc.lambda01, sc.lambda02, p)?;
            let a = r.conditional_amplitudes;
            vec![
                a[UP][0].re,
                a[UP][1].re,
                a[DOWN][0].re,
                a[DOWN][1].re,
                r.p_plus,
                r.p_minus,
                r.mode1_entropy_plus,
                r.mode1_entropy_minus,
            ]
        }
        Scenario::Mrfm => {
            let r = mrfm_amplitude(n, sc.m, p)?;
            let resolvable = if r.single_spin_resolvable { 1.0 } else { 0.0 };
            vec![r.amplitude, r.resolution, r.q_threshold, resolvable]
        }
        Scenario::Saturation => {
            let r = saturation(p)?;
            let ns = r.model.n_s;
            vec![
                ns,
                r.simulated_n_s.unwrap_or(f64::NAN),
                r.flips as f64,
                energy_gain_per_flip(ns, p),
                energy_loss_per_flip(ns, p),
            ]
        }
    })
}

fn run_point(config: &RunConfig, value: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for n in config.series_n() {
        for ez in config.series_eps_z() {
            let (p, pulses) = config.point(value, n, ez);
            out.extend(evaluate(config, &p, pulses)?);
        }
    }
    Ok(out)
}

/// Evaluates every grid point on a pool of `threads` workers (`None` for
/// one per core). Rows come back in grid order whatever the completion
/// order; the first failing point in grid order is reported.
pub fn run(config: &RunConfig, threads: Option<usize>) -> Result<SweepResult> {
    preflight(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::validation("threads", e.to_string()))?;
    let (variable, values) = config.grid();
    let outcomes: Vec<Result<Vec<f64>>> =
        pool.install(|| values.par_iter().map(|&v| run_point(config, v)).collect());
    let mut rows = Vec::with_capacity(values.len());
    for (i, (outcome, &value)) in outcomes.into_iter().zip(&values).enumerate() {
        let values = outcome.map_err(|e| point_error(config, i, value, e))?;
        rows.push(Row { value, values });
    }
    Ok(SweepResult {
        variable: variable.to_string(),
        columns: columns(config),
        rows,
        metadata: Metadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: config.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::super::config::parse_config;
    use super::*;

    #[test]
    fn ideal_amplification_rows() {
        let c = parse_config("[scenario]\nname = \"amplify-ideal\"\nn = [2, 4]\n").unwrap();
        let r = run(&c, Some(2)).unwrap();
        assert_eq!(r.variable, "n_pulses");
        assert_eq!(r.columns[0], "alpha_up_re");
        assert_eq!(r.rows.len(), 2);
        assert!((r.rows[0].values[0] + 0.4).abs() < 1e-6);
        assert!((r.rows[1].values[2] - 0.8).abs() < 1e-6);
    }

    #[test]
    fn series_columns_are_suffixed() {
        let text = "[scenario]\nname = \"sweep-detect\"\nn = 12\neps_z_values = [3.2, 4.0]\n[sweep]\nvariable = \"eps_d\"\nstart = 1.0\nstop = 1.0\nstep = 1.0\n";
        let c = parse_config(text).unwrap();
        assert_eq!(
            columns(&c),
            ["p_minus_eps_z_3_2", "analytic_p_minus_eps_z_3_2", "p_minus_eps_z_4", "analytic_p_minus_eps_z_4"]
        );
    }

    #[test]
    fn overlapping_pulses_fail_validation_before_running() {
        let text = "[scenario]\nname = \"sweep-fidelity\"\nn = 2\n[sweep]\nvariable = \"eps_perp\"\nstart = 0.5\nstop = 10.0\nstep = 0.5\n";
        let e = parse_config(text).unwrap_err();
        assert!(e.is_config_error(), "{e}");
        assert!(matches!(e, Error::AtGridPoint { index: 0, .. }));
    }

    #[test]
    fn scaling_scenarios() {
        let m = parse_config("[scenario]\nname = \"mrfm\"\nn = 12\nm = 2\n").unwrap();
        let r = run(&m, Some(1)).unwrap();
        let expect = [4.8, 2.4, std::f64::consts::PI / 0.4, 1.0];
        for (got, want) in r.rows[0].values.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let s = parse_config("[scenario]\nname = \"saturation\"\n[params]\nq_factor = 100.0\n").unwrap();
        let r = run(&s, Some(1)).unwrap();
        assert_eq!(r.variable, "q_factor");
        assert!((r.rows[0].values[1] - r.rows[0].values[0]).abs() < 0.1 * r.rows[0].values[0]);
    }
}
