//! `hessform`: exact Hessian-metric computations from the command line.
//!
//! Every subcommand prints a table of named results, or a JSON report with
//! `--json PATH` (`-` for stdout). The exit code is 0 when every result
//! passes, 1 when a check fails and 2 on bad input.

mod commands;
mod input;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hessform_core::cones::ConeError;
use hessform_core::covariants::CovariantError;
use hessform_core::curvature::CurvatureError;
use hessform_core::report::RunReport;
use hessform_core::tangent::TangentError;
use hessform_core::verify::{VerifyError, DEFAULT_SEED};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Covariant(#[from] CovariantError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Tangent(#[from] TangentError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "hessform",
    version,
    about = "Exact Hessian metrics, covariants and curvature of homogeneous forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every sampler.
    #[arg(long, global = true, env = "HESSFORM_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the JSON report to PATH (`-` for stdout instead of the table).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hessian determinant, Aronhold invariant or Clebsch covariant.
    Covariant {
        action: CovariantAction,
        /// Form as text or `@file`.
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Curvature of the scaled Hessian metric.
    Curvature {
        action: CurvatureAction,
        #[command(flatten)]
        args: CurvatureArgs,
    },
    /// Positive and index cones.
    Cone {
        action: ConeAction,
        #[command(flatten)]
        args: ConeArgs,
    },
    /// The deformation operator along alpha(x, y) + z^d.
    Tangent {
        #[command(subcommand)]
        action: TangentAction,
    },
    /// Run the acceptance suite or one section of it.
    Verify {
        #[arg(long, default_value = "all")]
        section: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CovariantAction {
    Hessian,
    Aronhold,
    Clebsch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurvatureAction {
    Tensor,
    Sectional,
    OnM,
    FlatCheck,
    FdOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConeAction {
    Classify,
    Sample,
    Scan,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Positive,
    Index,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Curvature of the level surface (ternary forms).
    #[value(name = "km")]
    KM,
    /// Extremes over coordinate planes of the level set, any arity.
    Full,
}

pub trait ActionName {
    fn name(&self) -> String;
}

impl<T: ValueEnum> ActionName for T {
    fn name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    /// Form as text or `@file`.
    #[arg(allow_hyphen_values = true)]
    pub form: String,
    #[arg(long)]
    pub arity: Option<usize>,
    /// Comma-separated coordinates, e.g. `1,2,1/3`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Two vectors joined by `:`, e.g. `1,0,0:0,1,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub plane: Option<String>,
    /// Sample points for flat-check.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Finite-difference step for fd-oracle.
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    /// Form as text or `@file`.
    #[arg(allow_hyphen_values = true)]
    pub form: String,
    #[arg(long)]
    pub arity: Option<usize>,
    /// Point to classify.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Integer sampling box `a,b` for every coordinate.
    #[arg(long = "box", value_name = "A,B", allow_hyphen_values = true)]
    pub r#box: Option<String>,
    /// Cone to sample for `sample` and `scan`.
    #[arg(long, value_enum, default_value_t = Kind::Index)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Mode::KM)]
    pub mode: Mode,
    /// Write scan CSV to PATH instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum TangentAction {
    /// T(alpha, h) for binary forms.
    TOp {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// First variation of the Clebsch covariant at alpha + z^d along a ternary g.
    Variation {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Kernel of T(alpha, .) on binary forms of one degree.
    Kernel {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        degree: u32,
    },
    /// Eigenvalues of T at the witness alpha = C(d,2) x^(d-2) y^2.
    Spectrum {
        #[arg(long)]
        degree: u32,
    },
    /// Compares the explicit tangent forms with the kernel of the variation.
    Zariski {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
    },
    /// Expands the closure family -x^d/c + alpha + (x + c b z/d)^d / c.
    Closure {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b: String,
    },
}

impl TangentAction {
    fn name(&self) -> &'static str {
        match self {
            TangentAction::TOp { .. } => "t-op",
            TangentAction::Variation { .. } => "variation",
            TangentAction::Kernel { .. } => "kernel",
            TangentAction::Spectrum { .. } => "spectrum",
            TangentAction::Zariski { .. } => "zariski",
            TangentAction::Closure { .. } => "closure",
        }
    }
}

fn run(cli: &Cli) -> Result<(RunReport, bool), CliError> {
    let start = Instant::now();
    let mut table_to_stderr = false;
    let mut report = match &cli.command {
        Command::Covariant { action, form, arity } => commands::covariant(*action, form, *arity)?,
        Command::Curvature { action, args } => commands::curvature(*action, args, cli.seed)?,
        Command::Cone { action, args } => match (&args.csv, action) {
            (Some(path), _) => commands::cone(*action, args, cli.seed, &mut File::create(path)?)?,
            (None, ConeAction::Scan) => {
                table_to_stderr = true;
                commands::cone(*action, args, cli.seed, &mut io::stdout().lock())?
            }
            (None, _) => commands::cone(*action, args, cli.seed, &mut io::sink())?,
        },
        Command::Tangent { action } => commands::tangent(action)?,
        Command::Verify { section } => commands::verify(section, cli.seed)?,
    };
    if report.elapsed_ms == 0 {
        report.elapsed_ms = start.elapsed().as_millis();
    }
    Ok((report, table_to_stderr))
}

fn emit(cli: &Cli, report: &RunReport, table_to_stderr: bool) -> Result<(), CliError> {
    let json_to_stdout = cli.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(report)?;
        if json_to_stdout {
            println!("{text}");
        } else {
            let mut file = File::create(path)?;
            writeln!(file, "{text}")?;
        }
    }
    if !json_to_stdout {
        if table_to_stderr {
            eprint!("{}", report.to_table());
        } else {
            print!("{}", report.to_table());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli).and_then(|(report, stderr)| emit(&cli, &report, stderr).map(|()| report)) {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
