//! `mlds` — stability, spectra, trajectories, and reachability of
//! discrete-time multilinear dynamical systems x_{t+1} = A x_t^{k−1}.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mlds_cli::commands::{self, CommonOptions};
use mlds_core::dynamics::SimulationOptions;
use mlds_core::reachability::GrowthOptions;
use mlds_core::spectral::PowerOptions;

#[derive(Debug, Parser)]
#[command(
    name = "mlds",
    version,
    about = "analyze discrete-time multilinear dynamical systems driven by supersymmetric tensors"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Tensor file (mlds-tensor/1 JSON).
    #[arg(long, global = true)]
    tensor: Option<PathBuf>,

    /// Initial condition as comma-separated reals; repeatable.
    #[arg(long, global = true, allow_hyphen_values = true)]
    ic: Vec<String>,

    /// Seed for randomized internals (power-method restarts).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Supersymmetry certification tolerance; defaults to 1e-9 times the
    /// largest entry magnitude.
    #[arg(long = "tol-sym", global = true)]
    tol_sym: Option<f64>,

    /// Power-iteration direction tolerance.
    #[arg(long = "tol-power", global = true, default_value_t = 1e-12)]
    tol_power: f64,

    /// Power-iteration restarts per deflation stage; defaults to 5n.
    #[arg(long, global = true)]
    restarts: Option<usize>,

    /// Power-iteration cap per restart.
    #[arg(long, global = true, default_value_t = 1000)]
    max_iter: usize,

    /// Relative reconstruction-residual threshold for accepting a
    /// decomposition as odeco.
    #[arg(long = "tol-odeco", global = true, default_value_t = 1e-6)]
    tol_odeco: f64,

    /// Half-width of the boundary band in the exact trichotomy. Use ~1e-3
    /// for four-decimal reference data.
    #[arg(long = "tol-boundary", global = true, default_value_t = 1e-9)]
    tol_boundary: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full stability analysis per initial condition (exact trichotomy
    /// when the tensor is odeco, plus every applicable sufficient test).
    Analyze,

    /// Iterate the system and write trajectory CSVs.
    Simulate {
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        /// Declare convergence when the state norm drops below this.
        #[arg(long, default_value_t = 1e-9)]
        conv_eps: f64,
        /// Declare divergence when the state norm exceeds this.
        #[arg(long, default_value_t = 1e12)]
        div_cap: f64,
        /// Store every n-th state.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },

    /// Power-iteration orthogonal decomposition with deflation.
    Decompose,

    /// Z-spectral-radius upper bounds and conservative region radii.
    Bounds,

    /// Reachability subspace growth for a controlled system file.
    Reach {
        /// Controlled system file (mlds-system/1 JSON).
        #[arg(long)]
        system: PathBuf,
        /// Rank tolerance for accepting new directions.
        #[arg(long = "tol-rank", default_value_t = 1e-8)]
        tol_rank: f64,
        /// Warn when a growth stage exceeds this many tuple evaluations.
        #[arg(long, default_value_t = 200_000)]
        tuple_budget: u128,
    },
}

fn require_tensor(common: &CommonArgs) -> Result<&PathBuf, mlds_cli::error::CliError> {
    common
        .tensor
        .as_ref()
        .ok_or_else(|| mlds_cli::error::CliError::Usage("--tensor <path> is required".into()))
}

fn validate_tolerances(common: &CommonArgs) -> Result<(), mlds_cli::error::CliError> {
    let usage = |msg: &str| Err(mlds_cli::error::CliError::Usage(msg.into()));
    let bad = |t: f64| t.is_nan() || t <= 0.0;
    if common.tol_sym.is_some_and(|t| t.is_nan() || t < 0.0) {
        return usage("--tol-sym must be nonnegative");
    }
    if bad(common.tol_power) {
        return usage("--tol-power must be positive");
    }
    if bad(common.tol_odeco) {
        return usage("--tol-odeco must be positive");
    }
    if bad(common.tol_boundary) {
        return usage("--tol-boundary must be positive");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), mlds_cli::error::CliError> {
    let common = &cli.common;
    validate_tolerances(common)?;
    let opts = CommonOptions {
        seed: common.seed,
        out_dir: common.out.clone(),
        sym_tol: common.tol_sym,
        power: PowerOptions {
            restarts: common.restarts,
            tol: common.tol_power,
            max_iter: common.max_iter,
        },
        odeco_tol: common.tol_odeco,
        boundary_tol: common.tol_boundary,
    };
    match &cli.command {
        Command::Analyze => commands::cmd_analyze(require_tensor(common)?, &common.ic, &opts),
        Command::Simulate {
            horizon,
            conv_eps,
            div_cap,
            stride,
        } => commands::cmd_simulate(
            require_tensor(common)?,
            &common.ic,
            SimulationOptions {
                horizon: *horizon,
                conv_eps: *conv_eps,
                div_cap: *div_cap,
                stride: *stride,
            },
            &opts,
        ),
        Command::Decompose => commands::cmd_decompose(require_tensor(common)?, &opts),
        Command::Bounds => commands::cmd_bounds(require_tensor(common)?, &opts),
        Command::Reach {
            system,
            tol_rank,
            tuple_budget,
        } => {
            if tol_rank.is_nan() || *tol_rank <= 0.0 {
                return Err(mlds_cli::error::CliError::Usage(
                    "--tol-rank must be positive".into(),
                ));
            }
            commands::cmd_reach(
                system,
                GrowthOptions {
                    rank_tol: *tol_rank,
                    tuple_budget: *tuple_budget,
                },
                &opts,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mlds: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
