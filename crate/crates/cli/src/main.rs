//! `vhk`: total variation, total monotonicity, Helly selection and the
//! verification suite from the command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | a verification or recheck failed |
//! | 2 | malformed input, bad flag, or a cap exceeded |
//! | 3 | operation not supported for the value space |
//! | 4 | boundedness check failed during selection |
//! | 5 | file could not be read or written |

mod error;
mod helly;
mod mono;
mod report;
mod tv;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;

pub const TOLERANCE_ENV: &str = "VHK_TOLERANCE";

#[derive(Parser)]
#[command(name = "vhk", version, about = "Variation of maps on product grids")]
struct Cli {
    /// Comparison tolerance; falls back to $VHK_TOLERANCE, then 1e-9.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JsonOut {
    /// Also write the JSON report to this file.
    #[arg(long = "json", value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Total variation of a grid-function document.
    Tv {
        input: PathBuf,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Total monotonicity of a real grid-function document.
    Mono {
        input: PathBuf,
        /// Write the Jordan pieces to DIR/nu.json and DIR/pi.json.
        #[arg(long, value_name = "DIR")]
        decompose: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Pointwise or weak selection from a sequence specification.
    Helly {
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Number of terms probed; overrides the specification.
        #[arg(long)]
        probe: Option<usize>,
        /// Functionals for weak selection, as a JSON array of rows.
        #[arg(long, value_name = "DUALS")]
        weak: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Identity suite and engine-versus-oracle sweep.
    Verify {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 12)]
        m_max: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of partitions one brute-force supremum may visit.
        #[arg(long, default_value_t = 1 << 12)]
        grid_cap: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        out: JsonOut,
    },
}

fn resolve_tolerance(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOLERANCE_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::input("tolerance", format!("{TOLERANCE_ENV}={s:?} is not a number")))?,
            Err(_) => vhk_core::DEFAULT_TOLERANCE,
        },
    };
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(CliError::input("tolerance", format!("tolerance must be finite and non-negative, got {tol}")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tolerance = resolve_tolerance(cli.tolerance)?;
    match cli.command {
        Command::Tv { input, out } => tv::run(&input, out.json.as_deref(), tolerance),
        Command::Mono { input, decompose, out } => {
            mono::run(&input, decompose.as_deref(), out.json.as_deref(), tolerance)
        }
        Command::Helly {
            spec,
            epsilon,
            probe,
            weak,
            out,
        } => helly::run(helly::HellyArgs {
            spec: &spec,
            epsilon,
            probe,
            weak: weak.as_deref(),
            json_out: out.json.as_deref(),
            tolerance,
        }),
        Command::Verify {
            n_max,
            m_max,
            trials,
            seed,
            grid_cap,
            inject_fault,
            out,
        } => {
            let args = verify::VerifyArgs {
                n_max,
                m_max,
                trials,
                seed,
                grid_cap,
                tolerance,
                inject_fault,
            };
            if verify::run(args, out.json.as_deref())? {
                Ok(())
            } else {
                Err(CliError::Verification("see the matrix above".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
