//! Command-line pipeline for spectral topology identification:
//! generate → simulate → estimate → decompose → reconstruct → evaluate,
//! plus a bounds calculator for the finite-sample error budget.

mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::*;
use config::PipelineConfig;
pub use error::CliError;

#[derive(Parser)]
#[command(
    name = "ldg",
    about = "Network topology identification from multivariate time series",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Pipeline configuration file (JSON); flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random admissible network model.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Total node count.
        #[arg(short, long)]
        n: Option<usize>,
        /// Hidden node count.
        #[arg(long)]
        hidden: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for model.json and assumptions.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a time series from a model.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Number of retained samples.
        #[arg(short = 'N', long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV (rows: time steps, columns: nodes).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate spectra and inverse spectra from a series.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Series CSV produced by `simulate`.
        #[arg(long)]
        series: PathBuf,
        /// Correlogram truncation order.
        #[arg(short, long)]
        p: Option<usize>,
        /// Unit-circle angle in radians; repeatable.
        #[arg(long)]
        freq: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the sparse/low-rank trade-off and decompose.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Skew matrix CSV to decompose directly.
        #[arg(long, conflicts_with = "model")]
        input: Option<PathBuf>,
        /// Model file to derive the imaginary inverse spectrum from.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Unit-circle angle in radians.
        #[arg(long)]
        freq: Option<f64>,
        /// Sweep grid spacing.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Record per-point error against the model's exact split.
        #[arg(long)]
        ground_truth: bool,
        /// Output directory for sweep and decomposition artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct the topology from a decomposed pair.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s_hat: PathBuf,
        #[arg(long)]
        l_hat: PathBuf,
        /// Support threshold (applied after max-entry normalization).
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a reconstructed topology against the generating model.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        topology: PathBuf,
        /// Model file the data came from.
        #[arg(long)]
        ground_truth: PathBuf,
        /// Score observed edges against the moral closure instead of the
        /// direct topology.
        #[arg(long)]
        kin: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute truncation order and sample-count requirements.
    Bounds {
        /// Mixing decay rate in (0, 1).
        #[arg(long)]
        rho: f64,
        /// Mixing amplitude.
        #[arg(long)]
        c1: f64,
        /// Target element-wise spectrum error.
        #[arg(long)]
        epsilon: f64,
        /// Split of epsilon given to the estimation term (default: half).
        #[arg(long)]
        eps1: Option<f64>,
        /// Failure probability.
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Process dimension.
        #[arg(short, long)]
        n: usize,
        /// Eigenvalue lower bound of the shaping filter class.
        #[arg(long, default_value_t = 1.0)]
        class_l: f64,
        /// Eigenvalue upper bound of the shaping filter class.
        #[arg(long, default_value_t = 1.0)]
        class_big_l: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma_max: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma_min: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses and executes one invocation, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successful outcomes; anything else is a
            // usage error
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { common, n, hidden, seed, out } => cmd_generate(GenerateArgs {
            config: PipelineConfig::load_opt(common.config.as_deref())?,
            n,
            n_h: hidden,
            seed,
            out,
        }),
        Command::Simulate { common, model, samples, seed, out } => cmd_simulate(SimulateArgs {
            config: PipelineConfig::load_opt(common.config.as_deref())?,
            model,
            n_samples: samples,
            seed,
            out,
        }),
        Command::Estimate { common, series, p, freq, out } => cmd_estimate(EstimateArgs {
            config: PipelineConfig::load_opt(common.config.as_deref())?,
            series,
            p,
            freq,
            out,
        }),
        Command::Decompose { common, input, model, freq, epsilon, ground_truth, out } => {
            cmd_decompose(DecomposeArgs {
                config: PipelineConfig::load_opt(common.config.as_deref())?,
                input,
                model,
                freq,
                epsilon,
                ground_truth,
                out,
            })
        }
        Command::Reconstruct { common, s_hat, l_hat, tau, out } => {
            cmd_reconstruct(ReconstructArgs {
                config: PipelineConfig::load_opt(common.config.as_deref())?,
                s_hat,
                l_hat,
                tau,
                out,
            })
        }
        Command::Evaluate { common, topology, ground_truth, kin, out } => {
            cmd_evaluate(EvaluateArgs {
                config: PipelineConfig::load_opt(common.config.as_deref())?,
                topology,
                ground_truth,
                kin,
                out,
            })
        }
        Command::Bounds {
            rho,
            c1,
            epsilon,
            eps1,
            delta,
            n,
            class_l,
            class_big_l,
            sigma_max,
            sigma_min,
            out,
        } => cmd_bounds(BoundsArgs {
            rho,
            c1,
            epsilon,
            eps1,
            delta,
            dim: n,
            class_l,
            class_big_l,
            sigma_max,
            sigma_min,
            out,
        }),
    }
}
