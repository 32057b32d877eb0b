use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use skilltask_cli::commands::{cmd_check, cmd_gen, cmd_simulate, cmd_train, Proposition, TrainTarget};
use skilltask_cli::config::{ModeConfig, Overrides, ValueModeConfig};

/// Simulator for firms that learn a skill-task production technique by
/// recalibrating a matching matrix and task value vector period over period.
#[derive(Parser)]
#[command(name = "skilltask", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct OverrideArgs {
    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Convergence tolerance on the profit-gap max-norm
    #[arg(long)]
    tol: Option<f64>,
    /// Matrix learning rate, in (0, 1)
    #[arg(long = "lr-a")]
    lr_a: Option<f64>,
    /// Value learning rate, in (0, 1)
    #[arg(long = "lr-lambda")]
    lr_lambda: Option<f64>,
    /// Period budget (simulate) or epoch cap (train)
    #[arg(long)]
    periods: Option<usize>,
    /// Matrix update sign
    #[arg(long, value_enum)]
    mode: Option<ModeConfig>,
    /// Value update rule
    #[arg(long = "value-mode", value_enum)]
    value_mode: Option<ValueModeConfig>,
}

impl From<&OverrideArgs> for Overrides {
    fn from(a: &OverrideArgs) -> Self {
        Overrides {
            seed: a.seed,
            tol: a.tol,
            lr_matrix: a.lr_a,
            lr_value: a.lr_lambda,
            periods: a.periods,
            mode: a.mode,
            value_mode: a.value_mode,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Materialize a scenario spec into a scenario file
    Gen {
        /// Scenario spec JSON
        #[arg(long)]
        config: PathBuf,
        /// Output scenario JSON
        #[arg(long)]
        out: PathBuf,
        /// Override the spec's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the per-period recalibration loop; writes <prefix>_trace.csv and
    /// <prefix>_summary.json
    Simulate {
        /// Run config JSON (scenario + learning + cost + initial sections)
        #[arg(long)]
        config: PathBuf,
        /// Output path prefix; falls back to the config's out_prefix
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Fit the matching matrix or the value vector from a CSV dataset
    Train {
        /// Which parameter set to fit
        #[arg(value_enum)]
        target: TrainTarget,
        /// Dataset CSV (`x_1..x_i,y_1..y_j` or `y_1..y_j,I`)
        #[arg(long)]
        data: PathBuf,
        /// Optional run config JSON (learning + initial + seed)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output JSON for the fitted parameters and report
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Check matching or cycle dominance on instances or random trials
    Check {
        /// Which dominance claim to exercise
        #[arg(value_enum)]
        proposition: Proposition,
        /// Explicit instance file; omit to run random trials
        #[arg(long)]
        instances: Option<PathBuf>,
        /// Number of random trials when no instance file is given
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Seed for random trials
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen { config, out, seed } => cmd_gen(config, out, *seed),
        Command::Simulate { config, out, overrides } => {
            cmd_simulate(config, out.as_deref(), &overrides.into())
        }
        Command::Train { target, data, config, out, overrides } => {
            cmd_train(data, *target, config.as_deref(), out, &overrides.into())
        }
        Command::Check { proposition, instances, trials, seed } => {
            cmd_check(*proposition, instances.as_deref(), *trials, *seed)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
