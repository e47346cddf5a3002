//! The individual run kinds. Each writes its CSVs and a manifest into the
//! output directory and returns what it wrote.

use std::path::{Path, PathBuf};

use ladder_qca::automaton::{self, AutomatonParams, ObservableSet, Trajectory, DEFAULT_MAX_QUBITS};
use ladder_qca::channel::{self, ChannelState};
use ladder_qca::entanglement::{self, DensityMatrix};
use ladder_qca::meanfield::{self, SolverConfig};
use ladder_qca::order;
use ladder_qca::random_ref::{self, MixtureCurve};
use ladder_qca::{LatticeLayout, ObservableSeries};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{BoundaryArg, ChannelArgs, ChannelMode, EvolveArgs, InitArg, MeanfieldArgs, MstarArgs, StringOrderArgs};
use crate::error::{config, CliError, CliResult};
use crate::output::{num, opt, RunDir};

/// Ceiling for `--unsafe-size` runs of the exact simulator.
pub const UNSAFE_MAX_QUBITS: usize = ladder_qca::lattice::MAX_STATE_QUBITS;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

fn finite(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(config(format!("--{name} must be finite, got {x}")))
    }
}

/// Exchange coupling from exactly one of `g` and `ḡ = g/J`.
pub fn resolve_g(j: f64, g: Option<f64>, gbar: Option<f64>) -> CliResult<f64> {
    finite("J", j)?;
    match (g, gbar) {
        (Some(g), None) => finite("g", g),
        (None, Some(gbar)) => Ok(finite("gbar", gbar)? * j),
        (Some(_), Some(_)) => Err(config("give exactly one of --g and --gbar")),
        (None, None) => Err(config("one of --g or --gbar is required")),
    }
}

pub fn layout(cells: usize, boundary: BoundaryArg) -> CliResult<LatticeLayout> {
    Ok(LatticeLayout::new(cells, boundary.into())?)
}

fn max_qubits(unsafe_size: bool) -> usize {
    if unsafe_size {
        UNSAFE_MAX_QUBITS
    } else {
        DEFAULT_MAX_QUBITS
    }
}

/// Mean of a field over the stationary window, and that window's first and
/// last recorded times.
fn stationary(series: &ObservableSeries, field: impl Fn(&ladder_qca::ObservableRecord) -> Option<f64>) -> Option<f64> {
    series.stationary_mean(field)
}

fn window_times(series: &ObservableSeries) -> (u64, u64) {
    let w = series.stationary_window();
    (series.records[w.start].t, series.records[w.end - 1].t)
}

fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

pub fn run_evolve(args: &EvolveArgs, preset: Option<&str>) -> CliResult<RunOutput> {
    let layout = layout(args.cells, args.boundary)?;
    let g = resolve_g(args.j, args.g, args.gbar)?;
    let params = AutomatonParams::new(layout, args.j, g)?;
    let observables = ObservableSet {
        entropies: args.cells % 2 == 0,
        spectra: args.spectra,
        ..ObservableSet::default()
    };
    let split = args.split_size.unwrap_or(args.cells / 2);
    let traj = Trajectory::new(params, args.init.state(), args.steps)
        .with_cadence(args.cadence)
        .with_seed(args.seed)
        .with_observables(observables)
        .with_split_block(split)
        .with_max_qubits(max_qubits(args.unsafe_size));
    let series = automaton::evolve(&traj)?;

    let mut dir = RunDir::create(&args.out)?;
    dir.csv(
        "series.csv",
        &["t", "S_half", "S_B", "logneg", "lambda_min"],
        series.records.iter().map(|r| {
            vec![r.t.to_string(), opt(r.s_half), opt(r.s_b), opt(r.log_negativity), opt(r.lambda_min)]
        }),
    )?;
    dir.csv(
        "magnetization.csv",
        &["t", "site", "exp_x"],
        series
            .records
            .iter()
            .flat_map(|r| r.magnetization.iter().enumerate().map(move |(q, m)| vec![r.t.to_string(), q.to_string(), num(*m)])),
    )?;
    let window = series.stationary_window();
    let (t0, t1) = window_times(&series);
    if args.spectra {
        let rows = series
            .spectra
            .iter()
            .filter(|s| s.t >= t0 && s.t <= t1)
            .flat_map(|s| {
                let ent = s.entanglement.iter().map(move |v| vec![s.t.to_string(), "ent".into(), num(*v)]);
                let neg = s.negativity.iter().map(move |v| vec![s.t.to_string(), "neg".into(), num(*v)]);
                ent.chain(neg)
            });
        dir.csv("spectra.csv", &["t", "tag", "eigenvalue"], rows)?;
    }
    let summary = json!({
        "g": g,
        "gbar": params.gbar(),
        "split_size": split,
        "records": series.len(),
        "window": { "t_start": t0, "t_end": t1, "records": window.len() },
        "S_half": stationary(&series, |r| r.s_half),
        "S_B": stationary(&series, |r| r.s_b),
        "logneg": stationary(&series, |r| r.log_negativity),
        "lambda_min": stationary(&series, |r| r.lambda_min),
    });
    let command = if args.spectra { "spectra" } else { "evolve" };
    let dir_path = dir.root().to_path_buf();
    let files = dir.finish(command, preset, args, summary.clone())?;
    Ok(RunOutput {
        dir: dir_path,
        files,
        summary,
    })
}

pub fn run_meanfield(args: &MeanfieldArgs, preset: Option<&str>) -> CliResult<RunOutput> {
    finite("gbar-min", args.gbar_min)?;
    finite("gbar-max", args.gbar_max)?;
    if args.points == 0 || args.gbar_min > args.gbar_max || args.gbar_min < 0.0 {
        return Err(config(format!(
            "empty or invalid ḡ range [{}, {}] with {} points",
            args.gbar_min, args.gbar_max, args.points
        )));
    }
    if args.k_points == 0 {
        return Err(config("--k-points must be positive"));
    }
    let grid: Vec<f64> = if args.points == 1 {
        vec![args.gbar_min]
    } else {
        (0..args.points)
            .map(|i| args.gbar_min + (args.gbar_max - args.gbar_min) * i as f64 / (args.points - 1) as f64)
            .collect()
    };
    let cfg = SolverConfig {
        k_points: args.k_points,
        ..SolverConfig::default()
    };
    let solutions = grid
        .par_iter()
        .map(|&g| meanfield::solve_sb_with(g, &cfg))
        .collect::<Result<Vec<_>, _>>()?;

    let mut dir = RunDir::create(&args.out)?;
    dir.csv(
        "sb.csv",
        &["gbar", "branch", "s_B"],
        solutions
            .iter()
            .flat_map(|s| s.roots.iter().map(move |r| vec![num(s.gbar), r.branch.to_string(), num(r.s_b)])),
    )?;
    dir.csv(
        "bands.csv",
        &["gbar", "k", "epsilon"],
        solutions
            .iter()
            .flat_map(|s| s.k.iter().zip(&s.eps_k).map(move |(k, e)| vec![num(s.gbar), num(*k), num(*e)])),
    )?;
    let critical = if args.critical {
        let c = meanfield::critical_point(meanfield::CRITICAL_TOL)?;
        println!(
            "gbar_c = {:.4} (bracket [{:.6}, {:.6}]), s_B at the endpoint = {:.4}",
            c.gbar_c, c.lower, c.upper, c.s_b_endpoint
        );
        Some(c)
    } else {
        None
    };
    let summary = json!({ "points": grid.len(), "critical": critical });
    let dir_path = dir.root().to_path_buf();
    let files = dir.finish("meanfield", preset, args, summary.clone())?;
    Ok(RunOutput {
        dir: dir_path,
        files,
        summary,
    })
}

fn register(layout: LatticeLayout, init: InitArg) -> CliResult<DensityMatrix> {
    let ladder = init.state().prepare(layout, 0)?;
    Ok(entanglement::reduce_to_a(&ladder)?)
}

pub fn run_channel(args: &ChannelArgs, preset: Option<&str>) -> CliResult<RunOutput> {
    let limit = if args.unsafe_size {
        channel::MAX_CELLS
    } else {
        channel::DEFAULT_MAX_CELLS
    };
    if args.cells > limit {
        return Err(CliError::Resource(format!(
            "channel runs are limited to {limit} cells, got {}{}",
            args.cells,
            if args.unsafe_size { "" } else { " (see --unsafe-size)" }
        )));
    }
    if args.cadence == 0 {
        return Err(config("--cadence must be at least 1"));
    }
    let layout = layout(args.cells, args.boundary)?;
    let split = args.split_size.unwrap_or((args.cells / 2).max(1));
    let rho0 = register(layout, args.init)?;
    let mut samples = Vec::new();
    let mut extra = json!({});
    match args.mode {
        ChannelMode::Full | ChannelMode::Coherent => {
            let g = resolve_g(args.j, args.g, args.gbar)?;
            let params = AutomatonParams::new(layout, args.j, g)?;
            let kraus = match args.mode {
                ChannelMode::Full => Some(channel::build_kraus(&params)?),
                _ => None,
            };
            let mut state = ChannelState::new(rho0);
            samples.push(channel::sample(&state, 0.0, split)?);
            for t in 1..=args.steps {
                state = match &kraus {
                    Some(k) => channel::markov_step(&state, k)?,
                    None => {
                        let c = channel::coherent_step(&state, &params)?;
                        extra = json!({ "weight_per_step": c.weight });
                        c.state
                    }
                };
                if t % args.cadence == 0 {
                    samples.push(channel::sample(&state, t as f64, split)?);
                }
            }
            extra["g"] = json!(g);
        }
        ChannelMode::Lindblad => {
            let gbar = match (args.g, args.gbar) {
                (None, Some(gbar)) => finite("gbar", gbar)?,
                _ => resolve_g(args.j, args.g, args.gbar)? / args.j,
            };
            finite("dt", args.dt)?;
            let steps = match args.time {
                Some(t) if t.is_finite() && t >= 0.0 => (t / args.dt).round() as u64,
                Some(t) => return Err(config(format!("--time must be finite and non-negative, got {t}"))),
                None => args.steps,
            };
            let states = channel::lindblad_evolve(&rho0, &layout, gbar, args.dt, steps, args.cadence)?;
            for s in &states {
                samples.push(channel::sample(s, s.step as f64 * args.dt, split)?);
            }
            extra = json!({ "gbar": gbar, "steps": steps });
        }
    }
    let mut dir = RunDir::create(&args.out)?;
    dir.csv(
        "channel.csv",
        &["t", "trace", "purity", "entropy", "logneg", "lambda_min"],
        samples.iter().map(|s| {
            vec![num(s.time), num(s.trace), num(s.purity), num(s.entropy), num(s.log_negativity), num(s.lambda_min)]
        }),
    )?;
    let last = samples.last().expect("initial sample");
    let drift = samples.iter().map(|s| (s.trace - 1.0).abs()).fold(0.0, f64::max);
    let summary = json!({
        "split_size": split,
        "samples": samples.len(),
        "max_trace_drift": drift,
        "final": last,
        "mode_details": extra,
    });
    let dir_path = dir.root().to_path_buf();
    let files = dir.finish("channel", preset, args, summary.clone())?;
    Ok(RunOutput {
        dir: dir_path,
        files,
        summary,
    })
}

pub fn run_string_order(args: &StringOrderArgs, preset: Option<&str>) -> CliResult<RunOutput> {
    if args.cells.is_empty() || args.gbar.is_empty() {
        return Err(config("--cells and --gbar need at least one value"));
    }
    finite("J", args.j)?;
    let points: Vec<(usize, f64)> = args
        .cells
        .iter()
        .flat_map(|&c| args.gbar.iter().map(move |&g| (c, g)))
        .collect();
    let results = points
        .par_iter()
        .map(|&(cells, gbar)| -> CliResult<order::StringOrderSeries> {
            let params = AutomatonParams::from_gbar(layout(cells, args.boundary)?, args.j, finite("gbar", gbar)?)?;
            let traj = Trajectory::new(params, ladder_qca::InitialState::ClusterPlus, args.steps)
                .with_cadence(args.cadence)
                .with_observables(ObservableSet::string_order_only())
                .with_max_qubits(max_qubits(args.unsafe_size));
            Ok(order::string_order_trajectory(&traj)?)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut dir = RunDir::create(&args.out)?;
    dir.csv(
        "w.csv",
        &["2L", "gbar", "t", "W"],
        points.iter().zip(&results).flat_map(|(&(cells, gbar), s)| {
            s.times
                .iter()
                .zip(&s.values)
                .map(move |(t, w)| vec![(2 * cells).to_string(), num(gbar), t.to_string(), num(*w)])
        }),
    )?;
    dir.csv(
        "w_inf.csv",
        &["gbar", "2L", "W_inf"],
        points
            .iter()
            .zip(&results)
            .map(|(&(cells, gbar), s)| vec![num(gbar), (2 * cells).to_string(), num(s.w_infinity)]),
    )?;
    let summary = json!(points
        .iter()
        .zip(&results)
        .map(|(&(cells, gbar), s)| json!({ "2L": 2 * cells, "gbar": gbar, "W_inf": s.w_infinity }))
        .collect::<Vec<_>>());
    let dir_path = dir.root().to_path_buf();
    let files = dir.finish("string-order", preset, args, summary.clone())?;
    Ok(RunOutput {
        dir: dir_path,
        files,
        summary,
    })
}

/// Stationary-window statistics of one exact trajectory.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRow {
    pub cells: usize,
    pub j: f64,
    pub g: f64,
    pub s_half: Option<f64>,
    pub s_b: Option<f64>,
    pub logneg: f64,
    pub lambda_min: f64,
    pub lambda_std: f64,
    pub window: (u64, u64),
}

#[allow(clippy::too_many_arguments)]
pub fn scan_point(
    cells: usize,
    boundary: BoundaryArg,
    j: f64,
    g: f64,
    init: InitArg,
    steps: u64,
    cadence: u64,
    max_qubits: usize,
) -> CliResult<ScanRow> {
    let params = AutomatonParams::new(layout(cells, boundary)?, j, g)?;
    let set = ObservableSet {
        entropies: cells % 2 == 0,
        magnetization: false,
        ..ObservableSet::default()
    };
    let traj = Trajectory::new(params, init.state(), steps)
        .with_cadence(cadence)
        .with_observables(set)
        .with_max_qubits(max_qubits);
    let series = automaton::evolve(&traj)?;
    let w = series.stationary_window();
    let lambdas: Vec<f64> = series.records[w].iter().filter_map(|r| r.lambda_min).collect();
    Ok(ScanRow {
        cells,
        j,
        g,
        s_half: stationary(&series, |r| r.s_half),
        s_b: stationary(&series, |r| r.s_b),
        logneg: stationary(&series, |r| r.log_negativity).unwrap_or(f64::NAN),
        lambda_min: stationary(&series, |r| r.lambda_min).unwrap_or(f64::NAN),
        lambda_std: std_dev(&lambdas),
        window: window_times(&series),
    })
}

pub fn run_mstar(args: &MstarArgs, preset: Option<&str>) -> CliResult<RunOutput> {
    if args.gbar.is_empty() {
        return Err(config("--gbar needs at least one value"));
    }
    if args.cells > random_ref::MAX_QUBITS {
        return Err(CliError::Resource(format!(
            "random references are limited to {} register qubits, got {}",
            random_ref::MAX_QUBITS,
            args.cells
        )));
    }
    if args.trials < random_ref::MIN_TRIALS {
        return Err(config(format!("--trials must be at least {}", random_ref::MIN_TRIALS)));
    }
    let rows = args
        .gbar
        .par_iter()
        .map(|&gbar| {
            let g = finite("gbar", gbar)? * finite("J", args.j)?;
            scan_point(
                args.cells,
                BoundaryArg::Periodic,
                args.j,
                g,
                InitArg::ClusterPlus,
                args.steps,
                args.cadence,
                max_qubits(args.unsafe_size),
            )
        })
        .collect::<CliResult<Vec<_>>>()?;
    let curve = MixtureCurve::build_to(args.cells, args.cells / 2, args.trials, args.seed, args.cap_log2)?;
    let estimates: Vec<_> = rows.iter().map(|r| curve.estimate_clamped(r.lambda_min)).collect();

    let mut dir = RunDir::create(&args.out)?;
    dir.csv(
        "mstar.csv",
        &["gbar", "lambda", "m", "m_low", "m_high"],
        args.gbar
            .iter()
            .zip(rows.iter().zip(&estimates))
            .map(|(g, (r, e))| vec![num(*g), num(r.lambda_min), num(e.m), num(e.m_low), num(e.m_high)]),
    )?;
    dir.csv(
        "curve.csv",
        &["m", "lambda_mean", "lambda_stderr"],
        curve.points.iter().map(|p| vec![p.m.to_string(), num(p.mean), num(p.stderr)]),
    )?;
    let summary = json!({ "rows": rows, "estimates": estimates });
    let dir_path = dir.root().to_path_buf();
    let files = dir.finish("mstar", preset, args, summary.clone())?;
    Ok(RunOutput {
        dir: dir_path,
        files,
        summary,
    })
}

/// A sweep of exact trajectories over sizes and couplings, summarized by
/// stationary-window means.
#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    pub cells: Vec<usize>,
    pub j: Vec<f64>,
    /// Either explicit `g` values or ratios `ḡ`, applied to every `J`.
    pub g: Vec<f64>,
    pub ratios: bool,
    pub steps: u64,
    pub cadence: u64,
    pub init: InitArg,
}

pub fn run_scan(cfg: &ScanConfig, out: &Path, preset: Option<&str>) -> CliResult<RunOutput> {
    let points: Vec<(usize, f64, f64)> = cfg
        .cells
        .iter()
        .flat_map(|&c| {
            cfg.j
                .iter()
                .flat_map(move |&j| cfg.g.iter().map(move |&g| (c, j, if cfg.ratios { g * j } else { g })))
        })
        .collect();
    let rows = points
        .par_iter()
        .map(|&(c, j, g)| scan_point(c, BoundaryArg::Periodic, j, g, cfg.init, cfg.steps, cfg.cadence, DEFAULT_MAX_QUBITS))
        .collect::<CliResult<Vec<_>>>()?;
    let mut dir = RunDir::create(out)?;
    dir.csv(
        "scan.csv",
        &["2L", "J", "g", "gbar", "S_half", "S_B", "logneg", "lambda_min", "lambda_min_std", "t_start", "t_end"],
        rows.iter().map(|r| {
            vec![
                (2 * r.cells).to_string(),
                num(r.j),
                num(r.g),
                num(r.g / r.j),
                opt(r.s_half),
                opt(r.s_b),
                num(r.logneg),
                num(r.lambda_min),
                num(r.lambda_std),
                r.window.0.to_string(),
                r.window.1.to_string(),
            ]
        }),
    )?;
    let summary = json!({ "points": rows.len() });
    let dir_path = dir.root().to_path_buf();
    let files = dir.finish("scan", preset, cfg, summary.clone())?;
    Ok(RunOutput {
        dir: dir_path,
        files,
        summary,
    })
}
