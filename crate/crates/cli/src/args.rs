//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "ladder-qca", version, about = "Spin-ladder cellular automaton: exact dynamics, channels and mean field")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact trajectory: entropies, negativity and magnetization.
    Evolve(EvolveArgs),
    /// Exact trajectory with entanglement and negativity spectra.
    Spectra(EvolveArgs),
    /// Self-consistent mean field and band structure.
    Meanfield(MeanfieldArgs),
    /// Register dynamics with the free spins traced out.
    Channel(ChannelArgs),
    /// String order parameter and its stationary value.
    StringOrder(StringOrderArgs),
    /// Effective environment size from random mixtures.
    Mstar(MstarArgs),
    /// Run a named scenario.
    Preset(PresetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryArg {
    Periodic,
    Open,
}

impl From<BoundaryArg> for ladder_qca::Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => ladder_qca::Boundary::Periodic,
            BoundaryArg::Open => ladder_qca::Boundary::Open,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    ClusterPlus,
    PlusPlus,
}

impl InitArg {
    pub fn state(self) -> ladder_qca::InitialState {
        match self {
            InitArg::ClusterPlus => ladder_qca::InitialState::ClusterPlus,
            InitArg::PlusPlus => ladder_qca::InitialState::PlusPlus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelMode {
    Full,
    Coherent,
    Lindblad,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvolveArgs {
    /// Number of cells L (2L qubits).
    #[arg(long, default_value_t = 8)]
    pub cells: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
    /// Cluster coupling.
    #[arg(long = "J", default_value_t = 0.2)]
    pub j: f64,
    /// Exchange coupling.
    #[arg(long)]
    pub g: Option<f64>,
    /// Coupling ratio g/J.
    #[arg(long)]
    pub gbar: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub steps: u64,
    /// Record every this many steps.
    #[arg(long, default_value_t = 1)]
    pub cadence: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = InitArg::ClusterPlus)]
    pub init: InitArg,
    /// Cells in the transposed block of the A chain (default L/2).
    #[arg(long)]
    pub split_size: Option<usize>,
    /// Also write stationary-window spectra.
    #[arg(long)]
    pub spectra: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Lift the size guard.
    #[arg(long)]
    pub unsafe_size: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeanfieldArgs {
    #[arg(long, default_value_t = 0.0)]
    pub gbar_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gbar_max: f64,
    /// Number of ḡ points, end points included.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 128)]
    pub k_points: usize,
    /// Locate the end of the nonzero branch and print it.
    #[arg(long)]
    pub critical: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChannelArgs {
    #[arg(long, value_enum, default_value_t = ChannelMode::Full)]
    pub mode: ChannelMode,
    #[arg(long, default_value_t = 4)]
    pub cells: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
    #[arg(long = "J", default_value_t = 0.3)]
    pub j: f64,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub gbar: Option<f64>,
    /// Discrete steps (full, coherent).
    #[arg(long, default_value_t = 200)]
    pub steps: u64,
    /// Lindblad time step.
    #[arg(long, default_value_t = 0.005)]
    pub dt: f64,
    /// Lindblad total time; overrides the step count.
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub cadence: u64,
    #[arg(long, value_enum, default_value_t = InitArg::ClusterPlus)]
    pub init: InitArg,
    #[arg(long)]
    pub split_size: Option<usize>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub unsafe_size: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StringOrderArgs {
    /// Chain sizes L, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "8")]
    pub cells: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    #[arg(long = "J", default_value_t = 0.2)]
    pub j: f64,
    /// Coupling ratios, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub gbar: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub cadence: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub unsafe_size: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MstarArgs {
    #[arg(long, default_value_t = 10)]
    pub cells: usize,
    #[arg(long = "J", default_value_t = 0.3)]
    pub j: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2,2.5,3")]
    pub gbar: Vec<f64>,
    #[arg(long, default_value_t = 600)]
    pub steps: u64,
    #[arg(long, default_value_t = 12)]
    pub cadence: u64,
    /// Random mixtures per size.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Largest mixture size is 2^cap_log2.
    #[arg(long, default_value_t = 12)]
    pub cap_log2: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub unsafe_size: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PresetArgs {
    #[arg(value_enum)]
    pub name: crate::presets::Preset,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Override the preset's step count.
    #[arg(long)]
    pub steps: Option<u64>,
    /// Override the preset's record cadence.
    #[arg(long)]
    pub cadence: Option<u64>,
}
