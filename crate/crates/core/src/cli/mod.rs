//! Configuration-driven front end: TOML run files, parameter grids
//! evaluated in parallel, and CSV/JSON output.
//!
//! ```toml
//! [scenario]
//! name = "sweep-fidelity"
//! n_pulses = [4, 8, 12]
//!
//! [sweep]
//! variable = "eps_perp"
//! start = 10.0
//! stop = 120.0
//! step = 10.0
//!
//! [output]
//! format = "csv"
//! ```

mod config;
mod emit;
mod run;

pub use config::{
    load_config, parse_config, OutputFormat, OutputSpec, RunConfig, Scenario, ScenarioConfig, SweepSpec,
    SweepVariable, MIN_AUTO_TRUNC,
};
pub use emit::{emit, render, render_csv, render_json};
pub use run::{columns, preflight, run, Metadata, Row, SweepResult};
