//! Command-line runner for the `ladder-qca` simulator: argument parsing, run
//! kinds, presets and CSV/manifest output. The binary is a thin wrapper around
//! [`run`].

pub mod args;
pub mod error;
pub mod output;
pub mod presets;
pub mod runs;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
pub use runs::RunOutput;

/// Environment variable holding the worker count for sweeps.
pub const WORKERS_ENV: &str = "LADDER_QCA_WORKERS";

/// Worker count from [`WORKERS_ENV`], or `None` to use rayon's default.
pub fn workers_from_env() -> CliResult<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(error::config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

/// Dispatches a parsed command inside a worker pool sized from the
/// environment.
pub fn run(cli: Cli) -> CliResult<Vec<RunOutput>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers_from_env()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| error::config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Evolve(a) => Ok(vec![runs::run_evolve(a, None)?]),
        Command::Spectra(a) => {
            let a = args::EvolveArgs {
                spectra: true,
                ..a.clone()
            };
            Ok(vec![runs::run_evolve(&a, None)?])
        }
        Command::Meanfield(a) => Ok(vec![runs::run_meanfield(a, None)?]),
        Command::Channel(a) => Ok(vec![runs::run_channel(a, None)?]),
        Command::StringOrder(a) => Ok(vec![runs::run_string_order(a, None)?]),
        Command::Mstar(a) => Ok(vec![runs::run_mstar(a, None)?]),
        Command::Preset(a) => presets::run_preset(a),
    })
}
