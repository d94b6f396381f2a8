//! `cvbell` command-line front end: every analysis as a subcommand, emitting
//! self-describing CSV or JSON tables.

pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use cvbell::{BellParam, BellPoint, MixtureKind, ParamBounds, StateConfig};

use crate::commands::CoeffsScan;
use crate::report::{Format, ReportRecord};

pub const THREADS_ENV: &str = "CVBELL_THREADS";

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  1  the report could not be written (e.g. --out is not writable)
  2  usage error: unknown flag, malformed value, or a parameter outside its allowed range
  3  domain error: valid input the model cannot evaluate, or a failed internal consistency check

Environment:
  CVBELL_THREADS  maximum worker threads for scans (default: all cores)

Numbers are printed with 17 significant digits. CSV output starts with
`# key=value` metadata lines, followed by a header row and the data.";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cvbell::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cvbell::Error as E;
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(E::InvalidParameter(_) | E::UnknownState(_) | E::EmptyFeasibleRegion(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cvbell",
    version,
    about = "Wigner dynamics, separability and Bell tests for two-mode squeezed light",
    after_help = AFTER_HELP
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "csv")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Squeezing {
    /// Squeezing parameter r = κt.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r: f64,
    /// Diffusion parameter d = γt.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub d: f64,
    /// Mean thermal occupation of the bath.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nbar: f64,
}

#[derive(Debug, Args)]
pub struct JScan {
    /// Displacement intensities, comma separated. Ignored when --points is given.
    #[arg(long = "j", value_delimiter = ',', default_value = "0.01", allow_negative_numbers = true)]
    pub j: Vec<f64>,
    /// Scan this many J values from --j-min to --j-max instead.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    pub j_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub j_max: f64,
    /// Evenly spaced scan (default is geometric).
    #[arg(long)]
    pub linear: bool,
}

impl JScan {
    fn values(&self) -> Result<Vec<f64>, CliError> {
        match self.points {
            Some(n) => Ok(commands::j_grid(self.j_min, self.j_max, n, self.linear)?),
            None if self.j.is_empty() => Err(CliError::Usage("--j needs at least one value".into())),
            None => Ok(self.j.clone()),
        }
    }
}

#[derive(Debug, Args)]
pub struct MixtureArgs {
    /// Squeezing of the pure component.
    #[arg(long, default_value_t = 1.5)]
    pub r: f64,
    /// Mixing probabilities of the pure component, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Number of J points per curve (geometric from --j-min to --j-max).
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub j_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub j_max: f64,
    #[arg(long)]
    pub linear: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gaussian Wigner coefficients, occupations, purity and separability.
    Coeffs {
        #[command(flatten)]
        state: Squeezing,
        /// Coefficient route: closed-form, green or ode.
        #[arg(long, default_value = "closed-form")]
        solver: String,
        /// Scan t from 0 to this value with r = κt, d = γt (needs --kappa, --gamma).
        #[arg(long, requires_all = ["kappa", "gamma"], conflicts_with_all = ["r", "d"])]
        t_max: Option<f64>,
        #[arg(long, requires = "t_max")]
        kappa: Option<f64>,
        #[arg(long, requires = "t_max")]
        gamma: Option<f64>,
        /// Intervals in the time scan.
        #[arg(long, default_value_t = 100, requires = "t_max")]
        steps: usize,
    },
    /// Data behind one of the five reference figures.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        index: u8,
    },
    /// Maximize the Bell combination over the chosen parameters.
    Maximize {
        /// Parameters to optimize, comma separated: J, r, d, nbar.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_param)]
        free: Vec<BellParam>,
        /// Value of J when it is not free.
        #[arg(long = "j", default_value_t = 0.01)]
        j: f64,
        #[arg(long, default_value_t = 1.5)]
        r: f64,
        #[arg(long, default_value_t = 0.0)]
        d: f64,
        #[arg(long, default_value_t = 0.0)]
        nbar: f64,
        #[arg(long, default_value_t = 1e-4)]
        j_min: f64,
        #[arg(long, default_value_t = 1.0)]
        j_max: f64,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 0.0)]
        d_min: f64,
        #[arg(long, default_value_t = 5.0)]
        d_max: f64,
        #[arg(long, default_value_t = 0.0)]
        nbar_min: f64,
        #[arg(long, default_value_t = 2.0)]
        nbar_max: f64,
    },
    /// Bell combination of a registered state (see `states`).
    Bell {
        #[arg(long, default_value = "diffused")]
        state: String,
        #[command(flatten)]
        squeezing: Squeezing,
        /// Mixing probability (werner, phase-diffused).
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Squeezing rate (steady).
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        /// Diffusion rate (steady).
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[command(flatten)]
        scan: JScan,
    },
    /// Separability eigenvalues of V − I/2.
    Separability {
        #[command(flatten)]
        state: Squeezing,
    },
    /// Long-time behaviour for the given rates.
    Steady {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        nbar: f64,
    },
    /// Pure state mixed with the product of its marginals.
    Werner(MixtureArgs),
    /// Pure state mixed with its phase average.
    PhaseDiffused(MixtureArgs),
    /// Registered states and coefficient solvers.
    States,
}

fn parse_param(s: &str) -> Result<BellParam, String> {
    s.parse::<BellParam>().map_err(|e| e.to_string())
}

fn mixture(command: &str, kind: MixtureKind, a: &MixtureArgs, default_p: &[f64]) -> Result<ReportRecord, CliError> {
    let ps = a.p.clone().unwrap_or_else(|| default_p.to_vec());
    if ps.is_empty() {
        return Err(CliError::Usage("--p needs at least one value".into()));
    }
    let js = commands::j_grid(a.j_min, a.j_max, a.points, a.linear)?;
    let threshold_grid: Vec<f64> = js.iter().copied().filter(|&j| j > 0.0).collect();
    if threshold_grid.is_empty() {
        return Err(CliError::Usage("the J grid has no positive values".into()));
    }
    Ok(commands::mixture_curves(command, kind, a.r, &ps, &js, &threshold_grid)?)
}

/// Builds the report for an already parsed command line.
pub fn run(command: &Command) -> Result<ReportRecord, CliError> {
    Ok(match command {
        Command::Coeffs {
            state,
            solver,
            t_max,
            kappa,
            gamma,
            steps,
        } => {
            let scan = t_max.map(|t_max| CoeffsScan {
                kappa: kappa.unwrap_or(0.0),
                gamma: gamma.unwrap_or(0.0),
                t_max,
                steps: *steps,
            });
            commands::coeffs(state.r, state.d, state.nbar, solver, scan)?
        }
        Command::Figure { index } => commands::figure(*index)?,
        Command::Maximize {
            free,
            j,
            r,
            d,
            nbar,
            j_min,
            j_max,
            r_min,
            r_max,
            d_min,
            d_max,
            nbar_min,
            nbar_max,
        } => commands::maximize(
            free,
            BellPoint {
                j: *j,
                r: *r,
                d: *d,
                nbar: *nbar,
            },
            ParamBounds {
                j: (*j_min, *j_max),
                r: (*r_min, *r_max),
                d: (*d_min, *d_max),
                nbar: (*nbar_min, *nbar_max),
            },
        )?,
        Command::Bell {
            state,
            squeezing,
            p,
            kappa,
            gamma,
            scan,
        } => {
            let cfg = StateConfig {
                r: squeezing.r,
                d: squeezing.d,
                nbar: squeezing.nbar,
                p: *p,
                kappa: *kappa,
                gamma: *gamma,
            };
            commands::bell(state, &cfg, &scan.values()?)?
        }
        Command::Separability { state } => commands::separability(state.r, state.d, state.nbar)?,
        Command::Steady { gamma, kappa, nbar } => commands::steady(*gamma, *kappa, *nbar)?,
        Command::Werner(a) => mixture("werner", MixtureKind::WernerThermal, a, &[1.0, 0.95, 0.9, 0.5, 0.0])?,
        Command::PhaseDiffused(a) => {
            mixture("phase-diffused", MixtureKind::PhaseDiffused, a, &[1.0, 0.5, 0.2, 0.0])?
        }
        Command::States => commands::states(),
    })
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(raw) = std::env::var_os(THREADS_ENV) {
        let n = raw
            .to_str()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))
            })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))
}

fn emit(cli: &Cli, report: &ReportRecord) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            report.write(cli.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and writes the report; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = thread_pool().and_then(|pool| pool.install(|| run(&cli.command)));
    match result.and_then(|report| emit(&cli, &report)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("cvbell: {e}");
            e.exit_code()
        }
    }
}
