//! Command-line front end: argument parsing, run configuration, dispatch
//! and report output. The `cabledeg` binary is a thin wrapper over [`main`].

mod commands;
mod inputs;
mod text;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::geom3d::GeomError;
use crate::homotopy::{HomotopyError, BOUND_SLACK};
use crate::planar::PlanarError;
use crate::word::{WordError, WordFileError};

pub use inputs::{curve_from_spec, mesh_from_spec, parse_point2, parse_point3};
pub use text::render_text;

/// Environment variable holding the log filter, e.g. `CABLEDEG_LOG=debug`.
pub const LOG_ENV: &str = "CABLEDEG_LOG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "cabledeg", version, about = "Cable indices, total degree and swept-volume bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Grid cells per axis for voxel and pixel decompositions.
    #[arg(long, global = true, default_value_t = 64)]
    pub resolution: usize,
    /// Seed for every random choice (cable jitter, ray retries, wobble).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Extra attempts after a degenerate cable or ray.
    #[arg(long, global = true, default_value_t = 16)]
    pub retries: u32,
    /// Relative slack of the lower-bound check.
    #[arg(long, global = true, default_value_t = BOUND_SLACK)]
    pub slack: f64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Reduce every cable word in a word file.
    Reduce {
        #[arg(long)]
        words: PathBuf,
        /// JSON object mapping region labels to volumes; adds V_deg.
        #[arg(long)]
        volumes: Option<PathBuf>,
        /// Add per-line wall-clock times (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Voxel decomposition of the mesh complement with per-region indices.
    Regions {
        /// Mesh file (.off/.obj) or built-in such as `@icosphere:4`.
        #[arg(long)]
        mesh: String,
        /// Dump raw voxel labels (little-endian u32, x-major) to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Total degree D and degree-weighted volume V_deg.
    Vdeg {
        #[arg(long)]
        mesh: String,
    },
    /// Cable index of one point, cross-checked with the solid angle.
    Index {
        #[arg(long)]
        mesh: String,
        #[arg(long, value_parser = parse_point3, allow_hyphen_values = true)]
        point: [f64; 3],
    },
    /// Swept volume of a null homotopy against |D| and V_deg.
    Sweep {
        /// `radial`, `translate-return`, `wobble`, or a directory of frame meshes.
        #[arg(long)]
        homotopy: String,
        /// Initial surface for the built-in homotopies.
        #[arg(long, default_value = "@icosphere:4")]
        mesh: String,
        /// Time steps (per phase for `translate-return`).
        #[arg(long, default_value_t = 64)]
        steps: usize,
        #[arg(long, value_parser = parse_point3, default_value = "4,0,0", allow_hyphen_values = true)]
        offset: [f64; 3],
        /// Noise amplitude for `wobble`.
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
        /// Also trace the index of this point through the homotopy.
        #[arg(long, value_parser = parse_point3, allow_hyphen_values = true)]
        point: Option<[f64; 3]>,
    },
    /// Planar winding regions and the winding-number-area bound.
    Planar {
        /// Curve JSON file or built-in such as `@circle:3`.
        #[arg(long)]
        curve: String,
        #[arg(long, value_parser = parse_point2, allow_hyphen_values = true)]
        point: Option<[f64; 2]>,
    },
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub resolution: usize,
    pub retry_budget: u32,
    pub seed: u64,
    pub slack: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            resolution: 64,
            retry_budget: 16,
            seed: 0,
            slack: BOUND_SLACK,
            out: None,
            format: Format::Structured,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.resolution < 8 {
            return Err(CliError::Config(format!("resolution {} is below the minimum of 8", self.resolution)));
        }
        if self.retry_budget < 1 {
            return Err(CliError::Config("retries must be at least 1".into()));
        }
        if !(self.slack >= 0.0) {
            return Err(CliError::Config("slack must be non-negative".into()));
        }
        Ok(())
    }
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        RunConfig {
            command: c.command,
            resolution: c.resolution,
            retry_budget: c.retries,
            seed: c.seed,
            slack: c.slack,
            out: c.out,
            format: c.format,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    WordFile { path: String, source: WordFileError },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error("{0}")]
    Io(String),
}

/// One self-describing report per run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub result: serde_json::Value,
    pub warnings: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let (result, warnings) = commands::dispatch(config)?;
    Ok(Report {
        tool: "cabledeg",
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        result,
        warnings,
    })
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(&serde_json::to_value(report).expect("reports serialize")),
    }
}

/// Parses `args`, runs the command and writes the report. Errors go to
/// standard error with exit status 1; usage errors exit with 2.
pub fn main<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let config = RunConfig::from(cli);
    match run(&config).and_then(|r| write_report(&r, &config)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn write_report(report: &Report, config: &RunConfig) -> Result<(), CliError> {
    let text = render(report, config.format);
    for w in &report.warnings {
        log::warn!("{w}");
    }
    match &config.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "cabledeg", "index", "--mesh", "@icosphere:2", "--point", "-0.1,0,0.2", "--seed", "5", "--format",
            "structured",
        ])
        .unwrap();
        let config = RunConfig::from(cli);
        assert_eq!(config.seed, 5);
        assert_eq!(config.format, Format::Structured);
        assert_eq!(
            config.command,
            Command::Index {
                mesh: "@icosphere:2".into(),
                point: [-0.1, 0.0, 0.2]
            }
        );
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::new(Command::Vdeg { mesh: "@icosphere:1".into() });
        c.resolution = 4;
        assert!(matches!(run(&c), Err(CliError::Config(_))));
        c.resolution = 16;
        c.retry_budget = 0;
        assert!(matches!(run(&c), Err(CliError::Config(_))));
    }
}
