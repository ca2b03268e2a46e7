use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discforge::LevelSchedule;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "discforge", version, about = "Certified sawtooth perturbations of disc-algebra functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input file, `-` for stdin, or inline JSON.
    pub input: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build h with a certified distance from an analytic polynomial.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: u32,
    },
    /// Build h whose real and imaginary parts both carry witnesses.
    ConstructBoth {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: u32,
    },
    /// Iterate the construction over a schedule "n1:eps1,n2:eps2,...".
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        schedule: String,
    },
    /// Difference-quotient witnesses for a piecewise-linear function or a report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Level; defaults to the level stored in a report.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Harmonic conjugate of a real-valued series.
    Conjugate {
        #[command(flatten)]
        common: Common,
    },
    /// CSV rows theta,re,im on a uniform grid without the endpoint.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// SVG of the real and imaginary boundary curves.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Certificate whose witnesses are drawn on the real part.
        #[arg(long)]
        certificate: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Construct,
    ConstructBoth,
    Chain,
    Verify,
    Conjugate,
    Sample,
    Plot,
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: String,
    pub eps: Option<f64>,
    pub n: Option<u32>,
    pub schedule: Option<LevelSchedule>,
    pub grid: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub certificate: Option<String>,
}

fn positive_eps(eps: f64) -> CliResult<f64> {
    if eps > 0.0 && eps.is_finite() {
        Ok(eps)
    } else {
        Err(CliError::Input(format!("eps must be positive, got {eps}")))
    }
}

fn positive_n(n: u32) -> CliResult<u32> {
    if n >= 1 {
        Ok(n)
    } else {
        Err(CliError::Input("n must be at least 1".into()))
    }
}

impl RunConfig {
    pub fn from_command(cmd: Command) -> CliResult<Self> {
        let base = |command, common: Common, default: Format, allowed: &[Format]| -> CliResult<RunConfig> {
            let format = common.format.unwrap_or(default);
            if !allowed.contains(&format) {
                return Err(CliError::Input(format!(
                    "format {format:?} is not available for this command"
                ).to_lowercase()));
            }
            Ok(RunConfig {
                command,
                input: common.input,
                eps: None,
                n: None,
                schedule: None,
                grid: None,
                output_path: common.out,
                format,
                certificate: None,
            })
        };
        const JSON: &[Format] = &[Format::Json];
        Ok(match cmd {
            Command::Construct { common, eps, n } => RunConfig {
                eps: Some(positive_eps(eps)?),
                n: Some(positive_n(n)?),
                ..base(CommandKind::Construct, common, Format::Json, JSON)?
            },
            Command::ConstructBoth { common, eps, n } => RunConfig {
                eps: Some(positive_eps(eps)?),
                n: Some(positive_n(n)?),
                ..base(CommandKind::ConstructBoth, common, Format::Json, JSON)?
            },
            Command::Chain { common, schedule } => RunConfig {
                schedule: Some(LevelSchedule::parse(&schedule).map_err(|e| CliError::Input(e.to_string()))?),
                ..base(CommandKind::Chain, common, Format::Json, JSON)?
            },
            Command::Verify { common, n } => RunConfig {
                n: n.map(positive_n).transpose()?,
                ..base(CommandKind::Verify, common, Format::Json, JSON)?
            },
            Command::Conjugate { common } => base(CommandKind::Conjugate, common, Format::Json, JSON)?,
            Command::Sample { common, grid } => RunConfig {
                grid: Some(positive_grid(grid)?),
                ..base(CommandKind::Sample, common, Format::Csv, &[Format::Csv, Format::Json])?
            },
            Command::Plot { common, grid, certificate } => RunConfig {
                grid: Some(positive_grid(grid)?),
                certificate,
                ..base(CommandKind::Plot, common, Format::Svg, &[Format::Svg])?
            },
        })
    }
}

fn positive_grid(grid: usize) -> CliResult<usize> {
    if grid >= 1 {
        Ok(grid)
    } else {
        Err(CliError::Input("grid must be at least 1".into()))
    }
}
