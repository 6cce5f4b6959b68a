use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::temperature_in_oscillator_units;
use crate::error::{Error, Result};
use crate::fock::truncation_requirement;
use crate::protocols::{DurationConvention, PulseAlignment};
use crate::spin_boson::SystemParams;

/// Smallest Fock cutoff chosen automatically.
pub const MIN_AUTO_TRUNC: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    AmplifyIdeal,
    AmplifyFinite,
    SweepFidelity,
    Detect,
    SweepDetect,
    Cohere,
    Lindblad,
    TwoMode,
    Mrfm,
    Saturation,
}

impl Scenario {
    /// Largest coherent amplitude the scenario reaches for `n` flips.
    pub(crate) fn alpha_max(&self, n: u32, cfg: &ScenarioConfig, params: &SystemParams) -> f64 {
        let amp = 2.0 * n as f64 * params.alpha0().abs();
        match self {
            Scenario::Cohere => 2.0 * amp,
            Scenario::TwoMode => n as f64 * cfg.lambda01.abs().max(cfg.lambda02.abs()) / params.omega0,
            Scenario::Mrfm | Scenario::Saturation => 0.0,
            _ => amp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    EpsPerp,
    EpsD,
    EpsZ,
    NPulses,
    Lambda0,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::EpsPerp => "eps_perp",
            SweepVariable::EpsD => "eps_d",
            SweepVariable::EpsZ => "eps_z",
            SweepVariable::NPulses => "n_pulses",
            SweepVariable::Lambda0 => "lambda0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        for (field, v) in [("sweep.start", self.start), ("sweep.stop", self.stop), ("sweep.step", self.step)] {
            if !v.is_finite() {
                return Err(Error::validation(field, "must be finite"));
            }
        }
        if !(self.step > 0.0) {
            return Err(Error::validation("sweep.step", format!("must be > 0, got {}", self.step)));
        }
        if self.start > self.stop {
            return Err(Error::validation("sweep.start", "must not exceed sweep.stop"));
        }
        if self.variable == SweepVariable::NPulses {
            for (field, v) in [("sweep.start", self.start), ("sweep.step", self.step)] {
                if v.fract() != 0.0 || v < 1.0 {
                    return Err(Error::validation(field, "n_pulses sweeps need integers >= 1"));
                }
            }
        }
        if self.point_count() > 100_000 {
            return Err(Error::validation("sweep.step", "grid exceeds 100000 points"));
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    /// Grid values `start + i·step`, ascending and ending at or below `stop`.
    pub fn values(&self) -> Vec<f64> {
        (0..self.point_count()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Scenario-specific settings after defaults are applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: Scenario,
    pub n_pulses: Vec<u32>,
    pub pulse_alignment: PulseAlignment,
    pub duration_convention: DurationConvention,
    /// Detection drive frequency; absent means the |↑⟩-branch resonance.
    pub omega_d: Option<f64>,
    /// Qubit splittings run side by side (detection scenarios).
    pub eps_z_values: Vec<f64>,
    pub m: u32,
    pub lambda01: f64,
    pub lambda02: f64,
    pub periods_per_sample: u32,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub params: SystemParams,
    pub n_trunc_auto: bool,
    pub sweep: Option<SweepSpec>,
    pub output: OutputSpec,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: RawScenario,
    #[serde(default)]
    params: RawParams,
    sweep: Option<SweepSpec>,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Scenario,
    #[serde(alias = "n")]
    n_pulses: Option<OneOrMany<u32>>,
    pulse_alignment: Option<PulseAlignment>,
    duration_convention: Option<DurationConvention>,
    omega_d: Option<f64>,
    eps_z_values: Option<Vec<f64>>,
    m: Option<u32>,
    lambda01: Option<f64>,
    lambda02: Option<f64>,
    periods_per_sample: Option<u32>,
    samples: Option<usize>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    omega0: Option<f64>,
    lambda0: Option<f64>,
    eps_z: Option<f64>,
    eps_perp: Option<f64>,
    eps_d: Option<f64>,
    q_factor: Option<f64>,
    /// k_BT/ħω₀
    temperature: Option<f64>,
    temperature_kelvin: Option<f64>,
    frequency_hz: Option<f64>,
    n_trunc: Option<usize>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<OutputFormat>,
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and resolves a TOML run configuration, then validates every grid
/// point so that a run never starts on a bad config.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let config = resolve(raw)?;
    super::run::preflight(&config)?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn resolve(raw: RawConfig) -> Result<RunConfig> {
    let s = raw.scenario;
    let p = raw.params;
    let defaults = SystemParams::default();

    let temperature = match (p.temperature, p.temperature_kelvin, p.frequency_hz) {
        (Some(_), Some(_), _) => {
            return Err(Error::validation(
                "params.temperature_kelvin",
                "give either temperature or temperature_kelvin, not both",
            ))
        }
        (_, Some(_), None) => {
            return Err(Error::validation("params.frequency_hz", "required with temperature_kelvin"))
        }
        (_, Some(t), Some(f)) => {
            if !(t >= 0.0) || !(f > 0.0) {
                return Err(Error::validation("params.temperature_kelvin", "needs T >= 0 and frequency_hz > 0"));
            }
            temperature_in_oscillator_units(t, f)
        }
        (t, None, _) => t.unwrap_or(defaults.temperature),
    };
    let mut params = SystemParams {
        omega0: p.omega0.unwrap_or(defaults.omega0),
        lambda0: p.lambda0.unwrap_or(defaults.lambda0),
        eps_z: p.eps_z.unwrap_or(defaults.eps_z),
        eps_perp_amp: p.eps_perp.unwrap_or(defaults.eps_perp_amp),
        eps_d: p.eps_d.unwrap_or(defaults.eps_d),
        omega_d: 0.0,
        q_factor: p.q_factor.unwrap_or(defaults.q_factor),
        temperature,
        n_trunc: p.n_trunc.unwrap_or(defaults.n_trunc),
    };
    params.validate().map_err(prefix_field("params"))?;

    let default_n = match s.name {
        Scenario::SweepFidelity => vec![4, 8, 12],
        _ => vec![12],
    };
    let n_pulses = s.n_pulses.map(OneOrMany::into_vec).unwrap_or(default_n);
    if n_pulses.is_empty() {
        return Err(Error::validation("scenario.n_pulses", "must list at least one pulse count"));
    }
    if n_pulses.contains(&0) && s.name != Scenario::Saturation {
        return Err(Error::validation("scenario.n_pulses", "pulse counts must be >= 1"));
    }
    let eps_z_values = s.eps_z_values.unwrap_or_else(|| vec![params.eps_z]);
    if eps_z_values.is_empty() || eps_z_values.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("scenario.eps_z_values", "must be a non-empty list of finite values"));
    }
    if let Some(w) = s.omega_d {
        if !w.is_finite() {
            return Err(Error::validation("scenario.omega_d", "must be finite"));
        }
    }
    let scenario = ScenarioConfig {
        name: s.name,
        n_pulses,
        pulse_alignment: s.pulse_alignment.unwrap_or_default(),
        duration_convention: s.duration_convention.unwrap_or_default(),
        omega_d: s.omega_d,
        eps_z_values,
        m: s.m.unwrap_or(1),
        lambda01: s.lambda01.unwrap_or(params.lambda0),
        lambda02: s.lambda02.unwrap_or(params.lambda0),
        periods_per_sample: s.periods_per_sample.unwrap_or(1),
        samples: s.samples.unwrap_or(20),
    };
    if scenario.m == 0 {
        return Err(Error::validation("scenario.m", "must be >= 1"));
    }
    if scenario.periods_per_sample == 0 {
        return Err(Error::validation("scenario.periods_per_sample", "must be >= 1"));
    }
    if scenario.samples < 2 {
        return Err(Error::validation("scenario.samples", "must be >= 2"));
    }
    for (field, v) in [("scenario.lambda01", scenario.lambda01), ("scenario.lambda02", scenario.lambda02)] {
        if !v.is_finite() {
            return Err(Error::validation(field, "must be finite"));
        }
    }

    let sweep = raw.sweep.or_else(|| default_sweep(scenario.name));
    if let Some(sw) = &sweep {
        sw.validate()?;
        if sw.variable == SweepVariable::NPulses && scenario.n_pulses.len() > 1 {
            return Err(Error::validation(
                "scenario.n_pulses",
                "a list of pulse counts cannot be combined with an n_pulses sweep",
            ));
        }
        if sw.variable == SweepVariable::EpsZ && scenario.eps_z_values.len() > 1 {
            return Err(Error::validation(
                "scenario.eps_z_values",
                "a list of eps_z values cannot be combined with an eps_z sweep",
            ));
        }
    }

    let n_trunc_auto = p.n_trunc.is_none();
    let mut config = RunConfig {
        scenario,
        params: params.clone(),
        n_trunc_auto,
        sweep,
        output: OutputSpec {
            path: raw.output.path,
            format: raw.output.format.unwrap_or_default(),
        },
    };
    let alpha = config.alpha_max();
    let required = truncation_requirement(alpha);
    if n_trunc_auto {
        params.n_trunc = required.max(MIN_AUTO_TRUNC);
    } else if params.n_trunc < required {
        return Err(Error::validation(
            "params.n_trunc",
            format!("|alpha| up to {alpha:.4} needs n_trunc >= {required}, got {}", params.n_trunc),
        ));
    }
    config.params = params;
    Ok(config)
}

fn default_sweep(name: Scenario) -> Option<SweepSpec> {
    match name {
        Scenario::SweepFidelity => Some(SweepSpec {
            variable: SweepVariable::EpsPerp,
            start: 10.0,
            stop: 120.0,
            step: 10.0,
        }),
        Scenario::SweepDetect => Some(SweepSpec {
            variable: SweepVariable::EpsD,
            start: 0.5,
            stop: 10.5,
            step: 0.25,
        }),
        _ => None,
    }
}

fn prefix_field(section: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Validation { field, message } => Error::Validation {
            field: format!("{section}.{field}"),
            message,
        },
        other => other,
    }
}

impl RunConfig {
    /// Names and values of the grid the run iterates over.
    pub fn grid(&self) -> (&'static str, Vec<f64>) {
        match (&self.sweep, self.scenario.name) {
            (Some(sw), _) => (sw.variable.name(), sw.values()),
            (None, Scenario::Saturation) => ("q_factor", vec![self.params.q_factor]),
            (None, _) => ("n_pulses", self.scenario.n_pulses.iter().map(|&n| n as f64).collect()),
        }
    }

    /// Pulse counts run as separate columns at each grid point.
    pub(crate) fn series_n(&self) -> Vec<Option<u32>> {
        let swept = self.sweep.map(|s| s.variable);
        if swept == Some(SweepVariable::NPulses) || swept.is_none() {
            vec![None]
        } else {
            self.scenario.n_pulses.iter().map(|&n| Some(n)).collect()
        }
    }

    pub(crate) fn series_eps_z(&self) -> Vec<Option<f64>> {
        let detect = matches!(self.scenario.name, Scenario::Detect | Scenario::SweepDetect);
        let swept = self.sweep.map(|s| s.variable);
        if !detect || swept == Some(SweepVariable::EpsZ) {
            vec![None]
        } else {
            self.scenario.eps_z_values.iter().map(|&v| Some(v)).collect()
        }
    }

    /// Parameters and pulse count at grid value `value` for one series.
    pub(crate) fn point(&self, value: f64, n: Option<u32>, eps_z: Option<f64>) -> (SystemParams, u32) {
        let mut p = self.params.clone();
        let mut pulses = n.unwrap_or(self.scenario.n_pulses[0]);
        if let Some(ez) = eps_z {
            p.eps_z = ez;
        }
        match self.grid().0 {
            "eps_perp" => p.eps_perp_amp = value,
            "eps_d" => p.eps_d = value,
            "eps_z" => p.eps_z = value,
            "lambda0" => p.lambda0 = value,
            "n_pulses" => pulses = value.round() as u32,
            _ => {}
        }
        (p, pulses)
    }

    /// Largest amplitude over the whole grid, which sets the auto cutoff.
    pub fn alpha_max(&self) -> f64 {
        let (_, values) = self.grid();
        let mut alpha: f64 = 0.0;
        for &v in &values {
            for n in self.series_n() {
                for ez in self.series_eps_z() {
                    let (p, pulses) = self.point(v, n, ez);
                    alpha = alpha.max(self.scenario.name.alpha_max(pulses, &self.scenario, &p));
                }
            }
        }
        alpha
    }
}
