use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use strobocat::cli::{emit, load_config, run, OutputFormat, RunConfig};
use strobocat::Error;

#[derive(Parser)]
#[command(name = "strobocat", version, about = "Stroboscopic cat-state simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write its CSV or JSON table.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output file; defaults to the config's [output] path, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Worker threads for the grid (default: one per core).
        #[arg(long, env = "STROBOCAT_THREADS")]
        threads: Option<usize>,
    },
    /// Parse and check a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        2
    } else if e.is_convergence_error() {
        3
    } else {
        1
    }
}

/// Loads a config, reporting an unreadable file as a config error.
fn read_config(path: &Path) -> Result<RunConfig, Error> {
    load_config(path).map_err(|e| match e {
        Error::Io { path, source } => Error::Validation {
            field: "config".into(),
            message: format!("{}: {source}", path.display()),
        },
        other => other,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { config } => read_config(&config).map(|c| {
            let (variable, values) = c.grid();
            eprintln!(
                "ok: {:?} over {} point(s) of {variable}, n_trunc {}",
                c.scenario.name,
                values.len(),
                c.params.n_trunc
            );
        }),
        Command::Run {
            config,
            out,
            format,
            threads,
        } => (|| {
            let c = read_config(&config)?;
            let result = run(&c, threads)?;
            let format = match format {
                Some(Format::Csv) => OutputFormat::Csv,
                Some(Format::Json) => OutputFormat::Json,
                None => c.output.format,
            };
            let path = out.or_else(|| c.output.path.clone());
            emit(&result, format, path.as_deref())
        })(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
