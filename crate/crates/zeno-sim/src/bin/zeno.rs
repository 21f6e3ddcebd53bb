//! Command-line front end: argument parsing and report emission only; all
//! computation lives in the library.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 on numerical-contract
//! violations.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zeno_sim::report::{
    cluster_csv, cluster_report, matrix_report, phys_report, robustness_cell_report,
    robustness_csv, robustness_table_report, Report, ThetaArg,
};
use zeno_sim::robustness::{robustness_table, DEFAULT_EPS, DEFAULT_KS};
use zeno_sim::trajectory::RngSeed;
use zeno_sim::Error;

const USAGE_EXIT: u8 = 2;
const CONTRACT_EXIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "zeno",
    about = "Entanglement generation via repeated two-qubit threshold measurements",
    long_about = "Simulates a qubit pair driven by small identical rotations and \
frequent threshold measurements (click = both qubits in |1>). Subcommands expose \
the exact subspace dynamics, stochastic trajectories, operational-error sweeps, \
cluster-chain growth and the flux-qubit parameter mapping. Reports are JSON by \
default (see report.schema.json); tables can also be rendered as CSV. The \
ZENO_THREADS environment variable overrides the Monte Carlo worker count \
(0 = auto); results do not depend on it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format (CSV is available for table-shaped results)
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Include wall-clock timing in the report (off by default so fixed-seed
    /// reports are byte-identical)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the k-step evolution operator on the no-click subspace
    Matrix {
        /// Number of protocol steps
        #[arg(long, default_value_t = 100)]
        k: usize,
        /// Per-step rotation angle in radians, or 'auto' for pi/(2 sqrt(2) k)
        #[arg(long, default_value = "auto")]
        theta: ThetaArg,
        /// Insert the phase flip after step k and append k/2 more steps
        #[arg(long)]
        intelligent: bool,
    },
    /// Estimate the survival probability of the measured protocol by Monte Carlo
    Trajectory {
        /// Number of measured protocol steps
        #[arg(long, default_value_t = 100)]
        k: usize,
        /// Per-step rotation angle in radians, or 'auto' for pi/(2 sqrt(2) k)
        #[arg(long, default_value = "auto")]
        theta: ThetaArg,
        /// Number of independent trajectories
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// Master seed; trial i uses stream i
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial state: 00, 01, 10, psi+ or psi-
        #[arg(long, default_value = "00")]
        initial: String,
    },
    /// Sweep rotation-angle errors and report the perfect-result probability
    Robustness {
        /// Compute the default 3x5 grid instead of a single cell
        #[arg(long, conflicts_with_all = ["k", "eps"])]
        table: bool,
        /// Step count of the steered program (even; theta = pi/(2 sqrt(2) k))
        #[arg(long, required_unless_present = "table")]
        k: Option<usize>,
        /// Largest angle error as a fraction of theta (e.g. 0.5 for 50%)
        #[arg(long, required_unless_present = "table", allow_hyphen_values = true)]
        eps: Option<f64>,
        /// Monte Carlo trials per cell
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// Master seed; trial i uses stream i
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Grow a linear cluster chain one qubit at a time
    Cluster {
        /// Final chain length (2..=12)
        #[arg(long)]
        n: usize,
        /// Step count per expansion (even; theta = pi/(2 sqrt(2) k))
        #[arg(long, default_value_t = 1000)]
        k: usize,
        /// Echoed in the report; the expansion itself is deterministic
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the continuously-monitored tunneling evolution of a flux-qubit pair
    Phys {
        /// Tunneling amplitude (angular frequency, hbar = 1)
        #[arg(long)]
        delta: f64,
        /// Interval between threshold measurements
        #[arg(long)]
        tau: f64,
        /// Total evolution time
        #[arg(long, value_name = "TIME")]
        time: f64,
        /// Master seed for the sampled measurement record
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn configure_threads() {
    if let Ok(value) = std::env::var("ZENO_THREADS") {
        match value.trim().parse::<usize>() {
            Ok(0) => {} // auto
            Ok(n) => {
                // ignore failure: a pool may already exist in tests
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            Err(_) => {
                eprintln!("warning: ignoring unparseable ZENO_THREADS='{value}'");
            }
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) => USAGE_EXIT,
        _ => CONTRACT_EXIT,
    }
}

enum Rendered {
    Report(Box<Report>),
    Csv(String),
}

fn run(cli: &Cli) -> Result<Rendered, Error> {
    let csv = cli.output.format == Format::Csv;
    match &cli.command {
        Command::Matrix {
            k,
            theta,
            intelligent,
        } => {
            if csv {
                return Err(Error::InvalidArgument(
                    "CSV output is available for robustness and cluster tables only".into(),
                ));
            }
            Ok(Rendered::Report(Box::new(matrix_report(
                *k,
                *theta,
                *intelligent,
            )?)))
        }
        Command::Trajectory {
            k,
            theta,
            trials,
            seed,
            initial,
        } => {
            if csv {
                return Err(Error::InvalidArgument(
                    "CSV output is available for robustness and cluster tables only".into(),
                ));
            }
            Ok(Rendered::Report(Box::new(
                zeno_sim::report::trajectory_report(*k, *theta, *trials, *seed, initial)?,
            )))
        }
        Command::Robustness {
            table,
            k,
            eps,
            trials,
            seed,
        } => {
            if *table {
                if csv {
                    let t = robustness_table(
                        &DEFAULT_KS,
                        &DEFAULT_EPS,
                        *trials,
                        RngSeed::from_master(*seed),
                    )?;
                    return Ok(Rendered::Csv(robustness_csv(&t)));
                }
                return Ok(Rendered::Report(Box::new(robustness_table_report(
                    *trials, *seed,
                )?)));
            }
            let (k, eps) = (k.expect("required by clap"), eps.expect("required by clap"));
            if csv {
                let t = robustness_table(&[k], &[eps], *trials, RngSeed::from_master(*seed))?;
                return Ok(Rendered::Csv(robustness_csv(&t)));
            }
            Ok(Rendered::Report(Box::new(robustness_cell_report(
                k, eps, *trials, *seed,
            )?)))
        }
        Command::Cluster { n, k, seed } => {
            if csv {
                return Ok(Rendered::Csv(cluster_csv(*n, *k)?));
            }
            Ok(Rendered::Report(Box::new(cluster_report(*n, *k, *seed)?)))
        }
        Command::Phys {
            delta,
            tau,
            time,
            seed,
        } => {
            if csv {
                return Err(Error::InvalidArgument(
                    "CSV output is available for robustness and cluster tables only".into(),
                ));
            }
            Ok(Rendered::Report(Box::new(phys_report(
                *delta, *tau, *time, *seed,
            )?)))
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    match run(&cli) {
        Ok(Rendered::Report(report)) => {
            let report = if cli.output.timing {
                report.with_timing(start.elapsed().as_secs_f64())
            } else {
                *report
            };
            if let Err(e) = emit(&report.to_json(), &cli.output.out) {
                eprintln!("error: {e}");
                return ExitCode::from(CONTRACT_EXIT);
            }
            ExitCode::SUCCESS
        }
        Ok(Rendered::Csv(text)) => {
            if let Err(e) = emit(&text, &cli.output.out) {
                eprintln!("error: {e}");
                return ExitCode::from(CONTRACT_EXIT);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
