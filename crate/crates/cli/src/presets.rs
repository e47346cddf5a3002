//! Named scenarios. Every preset echoes its parameters in the manifest.

use clap::ValueEnum;
use serde::Serialize;

use crate::args::{BoundaryArg, EvolveArgs, InitArg, MstarArgs, PresetArgs, StringOrderArgs};
use crate::error::CliResult;
use crate::runs::{self, RunOutput, ScanConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// λ against g for J ∈ {0.2, 0.3, 0.4}, 2L = 20.
    Fig3Left,
    /// Effective environment size m(ḡ), J = 0.3, 2L = 20.
    Fig3Right,
    /// 2L = 16, J = 0.2, ḡ = 0.5, with spectra.
    Fig4Row1,
    /// ḡ = 1.
    Fig4Row2,
    /// ḡ = 2.5.
    Fig4Row3,
    /// ḡ = 5.
    Fig4Row4,
    /// W∞(ḡ) for 2L ∈ {12, 16, 20}, open chain, J = 0.2.
    Fig5,
    /// Product-state start, J = 0.3, g = 0.1, 2L = 16.
    Fig6,
    /// Negativity against ḡ for 2L ∈ {12, 16, 20}, J = 0.3.
    NegScan,
    /// J = g = 1 from both initial states, 2L = 16.
    Thermal,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3Left => "fig3-left",
            Preset::Fig3Right => "fig3-right",
            Preset::Fig4Row1 => "fig4-row1",
            Preset::Fig4Row2 => "fig4-row2",
            Preset::Fig4Row3 => "fig4-row3",
            Preset::Fig4Row4 => "fig4-row4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::NegScan => "neg-scan",
            Preset::Thermal => "thermal",
        }
    }
}

pub const FIG3_G: [f64; 11] = [0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 1.2, 1.5];
pub const FIG5_GBAR: [f64; 9] = [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0];
pub const NEG_SCAN_GBAR: [f64; 8] = [0.1, 0.3, 0.4, 0.7, 1.0, 2.0, 3.0, 5.0];

fn evolve(out: std::path::PathBuf, cells: usize, j: f64, g: Option<f64>, gbar: Option<f64>, init: InitArg) -> EvolveArgs {
    EvolveArgs {
        cells,
        boundary: BoundaryArg::Periodic,
        j,
        g,
        gbar,
        steps: 2000,
        cadence: 1,
        seed: 0,
        init,
        split_size: None,
        spectra: true,
        out,
        unsafe_size: false,
    }
}

pub fn run_preset(args: &PresetArgs) -> CliResult<Vec<RunOutput>> {
    let name = Some(args.name.name());
    let out = args.out.clone();
    let steps = |default: u64| args.steps.unwrap_or(default);
    let cadence = |default: u64| args.cadence.unwrap_or(default);
    let fig4 = |gbar: f64| -> CliResult<Vec<RunOutput>> {
        let mut a = evolve(out.clone(), 8, 0.2, None, Some(gbar), InitArg::ClusterPlus);
        a.steps = steps(a.steps);
        a.cadence = cadence(a.cadence);
        Ok(vec![runs::run_evolve(&a, name)?])
    };
    match args.name {
        Preset::Fig3Left => {
            let cfg = ScanConfig {
                cells: vec![10],
                j: vec![0.2, 0.3, 0.4],
                g: FIG3_G.to_vec(),
                ratios: false,
                steps: steps(2000),
                cadence: cadence(10),
                init: InitArg::ClusterPlus,
            };
            Ok(vec![runs::run_scan(&cfg, &out, name)?])
        }
        Preset::Fig3Right => {
            let a = MstarArgs {
                cells: 10,
                j: 0.3,
                gbar: vec![0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0],
                steps: steps(2000),
                cadence: cadence(10),
                trials: 8,
                cap_log2: 12,
                seed: 0,
                out,
                unsafe_size: false,
            };
            Ok(vec![runs::run_mstar(&a, name)?])
        }
        Preset::Fig4Row1 => fig4(0.5),
        Preset::Fig4Row2 => fig4(1.0),
        Preset::Fig4Row3 => fig4(2.5),
        Preset::Fig4Row4 => fig4(5.0),
        Preset::Fig5 => {
            let a = StringOrderArgs {
                cells: vec![6, 8, 10],
                boundary: BoundaryArg::Open,
                j: 0.2,
                gbar: FIG5_GBAR.to_vec(),
                steps: steps(2000),
                cadence: cadence(4),
                out,
                unsafe_size: false,
            };
            Ok(vec![runs::run_string_order(&a, name)?])
        }
        Preset::Fig6 => {
            let mut a = evolve(out, 8, 0.3, Some(0.1), None, InitArg::PlusPlus);
            a.steps = steps(a.steps);
            a.cadence = cadence(a.cadence);
            Ok(vec![runs::run_evolve(&a, name)?])
        }
        Preset::NegScan => {
            let cfg = ScanConfig {
                cells: vec![6, 8, 10],
                j: vec![0.3],
                g: NEG_SCAN_GBAR.to_vec(),
                ratios: true,
                steps: steps(2000),
                cadence: cadence(10),
                init: InitArg::ClusterPlus,
            };
            Ok(vec![runs::run_scan(&cfg, &out, name)?])
        }
        Preset::Thermal => [InitArg::ClusterPlus, InitArg::PlusPlus]
            .into_iter()
            .map(|init| {
                let sub = out.join(match init {
                    InitArg::ClusterPlus => "cluster-plus",
                    InitArg::PlusPlus => "plus-plus",
                });
                let mut a = evolve(sub, 8, 1.0, Some(1.0), None, init);
                a.steps = steps(a.steps);
                a.cadence = cadence(a.cadence);
                runs::run_evolve(&a, name)
            })
            .collect(),
    }
}
