//! The one-step unitary `U(J, g)`, trajectories, and the checks on its global
//! symmetries and continuous-time limit.
//!
//! A step applies every exchange gate `SW_AB(g, x)` first and then every
//! cluster gate `C_A(J, x)`, i.e. `U = Π_x C_A(J, x) · Π_x SW_AB(g, x)` read as
//! operator composition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entanglement::{self, Partition};
use crate::error::{invalid, Error, Result};
use crate::lattice::{LatticeLayout, Pauli, PauliString, PureState};
use crate::linalg::{self, CMat};
use crate::order;
use crate::series::{ObservableRecord, ObservableSeries, SpectraRecord};

/// Default guard on the number of qubits of an evolved state.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Largest ladder for which dense oracles are built.
pub const DENSE_MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutomatonParams {
    /// Cluster coupling per step (radians).
    pub j: f64,
    /// Exchange coupling per step (radians).
    pub g: f64,
    pub layout: LatticeLayout,
}

impl AutomatonParams {
    pub fn new(layout: LatticeLayout, j: f64, g: f64) -> Result<Self> {
        if !j.is_finite() || !g.is_finite() {
            return Err(invalid("couplings must be finite"));
        }
        Ok(Self { j, g, layout })
    }

    /// Parameters from `J` and the coupling ratio `ḡ = g/J`.
    pub fn from_gbar(layout: LatticeLayout, j: f64, gbar: f64) -> Result<Self> {
        Self::new(layout, j, gbar * j)
    }

    /// `g / J`, undefined for `J = 0`.
    pub fn gbar(&self) -> Option<f64> {
        (self.j != 0.0).then(|| self.g / self.j)
    }

    /// Whether both couplings lie in the meaningful range `|J|, |g| < π`.
    pub fn in_principal_range(&self) -> bool {
        self.j.abs() < std::f64::consts::PI && self.g.abs() < std::f64::consts::PI
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            j: s * self.j,
            g: s * self.g,
            layout: self.layout,
        }
    }

    fn check_state(&self, state: &PureState) -> Result<()> {
        if *state.layout() != self.layout {
            return Err(Error::DimensionMismatch(
                "state layout differs from the automaton layout".into(),
            ));
        }
        Ok(())
    }
}

pub fn swap_layer(state: &mut PureState, g: f64) -> Result<()> {
    for x in 0..state.layout().cells() {
        state.apply_swap_gate(x, g)?;
    }
    Ok(())
}

pub fn cluster_layer(state: &mut PureState, j: f64) -> Result<()> {
    for x in 0..state.layout().cells() {
        state.apply_cluster_gate(x, j)?;
    }
    Ok(())
}

/// Applies one automaton step `U(J, g)` in place.
pub fn step(state: &mut PureState, params: &AutomatonParams) -> Result<()> {
    params.check_state(state)?;
    swap_layer(state, params.g)?;
    cluster_layer(state, params.j)
}

/// Applies `U(J, g)†`: the cluster layer at `−J`, then the exchange layer at `−g`.
pub fn step_adjoint(state: &mut PureState, params: &AutomatonParams) -> Result<()> {
    params.check_state(state)?;
    cluster_layer(state, -params.j)?;
    swap_layer(state, -params.g)
}

/// How a trajectory is initialized.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Cluster state on A, `|+⟩^L` on B.
    ClusterPlus,
    /// `|+⟩` on every qubit.
    PlusPlus,
    /// Haar-random state drawn from the trajectory seed.
    Haar,
    Custom(PureState),
}

impl InitialState {
    pub fn tag(&self) -> &'static str {
        match self {
            InitialState::ClusterPlus => "cluster-plus",
            InitialState::PlusPlus => "plus-plus",
            InitialState::Haar => "haar",
            InitialState::Custom(_) => "custom",
        }
    }

    pub fn prepare(&self, layout: LatticeLayout, seed: u64) -> Result<PureState> {
        match self {
            InitialState::ClusterPlus => Ok(PureState::cluster_plus(layout)),
            InitialState::PlusPlus => Ok(PureState::plus_product(layout)),
            InitialState::Haar => Ok(PureState::haar(layout, &mut ChaCha8Rng::seed_from_u64(seed))),
            InitialState::Custom(s) if *s.layout() == layout => Ok(s.clone()),
            InitialState::Custom(_) => Err(Error::DimensionMismatch(
                "custom initial state has a different layout".into(),
            )),
        }
    }
}

/// Which observables to record along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservableSet {
    /// Half-ladder entropy `S` and sublattice-B entropy `S_B`.
    pub entropies: bool,
    /// Log-negativity `N` and witness `λ` of the A register.
    pub negativity: bool,
    pub magnetization: bool,
    pub string_order: bool,
    /// Full entanglement and negativity spectra of the A register.
    pub spectra: bool,
}

impl Default for ObservableSet {
    fn default() -> Self {
        Self {
            entropies: true,
            negativity: true,
            magnetization: true,
            string_order: false,
            spectra: false,
        }
    }
}

impl ObservableSet {
    pub fn string_order_only() -> Self {
        Self {
            entropies: true,
            negativity: false,
            magnetization: false,
            string_order: true,
            spectra: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: AutomatonParams,
    pub init: InitialState,
    /// Number of steps `T`; records are taken at `t = 0, k, 2k, …, ≤ T`.
    pub steps: u64,
    /// Record every `cadence` steps.
    pub cadence: u64,
    pub seed: u64,
    pub observables: ObservableSet,
    /// Size of the transposed A block (`A₂`) for the negativity.
    pub split_block: usize,
    pub max_qubits: usize,
}

impl Trajectory {
    pub fn new(params: AutomatonParams, init: InitialState, steps: u64) -> Self {
        Self {
            split_block: params.layout.cells() / 2,
            params,
            init,
            steps,
            cadence: 1,
            seed: 0,
            observables: ObservableSet::default(),
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }

    pub fn with_cadence(mut self, cadence: u64) -> Self {
        self.cadence = cadence;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_observables(mut self, observables: ObservableSet) -> Self {
        self.observables = observables;
        self
    }

    pub fn with_split_block(mut self, block: usize) -> Self {
        self.split_block = block;
        self
    }

    pub fn with_max_qubits(mut self, max_qubits: usize) -> Self {
        self.max_qubits = max_qubits;
        self
    }

    fn validate(&self) -> Result<()> {
        let q = self.params.layout.qubits();
        if q > self.max_qubits {
            return Err(Error::ResourceGuard(format!(
                "{q} qubits exceed the configured maximum of {}",
                self.max_qubits
            )));
        }
        if self.cadence == 0 {
            return Err(invalid("cadence must be at least 1"));
        }
        let obs = &self.observables;
        if obs.entropies && self.params.layout.cells() % 2 != 0 {
            return Err(invalid("the half-ladder entropy needs an even number of cells"));
        }
        if obs.negativity || obs.spectra {
            Partition::ClusterSplit { block: self.split_block }
                .transpose_mask(self.params.layout.cells())?;
        }
        if obs.string_order && self.params.layout.cells() < order::MIN_CELLS {
            return Err(invalid("the string order parameter needs at least four cells"));
        }
        Ok(())
    }
}

/// Measures the requested observables on `state`.
pub fn measure(
    state: &PureState,
    t: u64,
    observables: &ObservableSet,
    split_block: usize,
) -> Result<(ObservableRecord, Option<SpectraRecord>)> {
    let layout = state.layout();
    let max_keep = layout.qubits();
    let mut rec = ObservableRecord {
        t,
        ..Default::default()
    };
    let needs_a = observables.negativity || observables.spectra;
    let rho_a = if needs_a {
        Some(entanglement::reduce_with_limit(state, &layout.a_qubits(), max_keep)?)
    } else {
        None
    };
    // The state is pure, so ρ_B and ρ_A share their nonzero spectrum.
    let spectrum_a = match &rho_a {
        Some(rho) if observables.entropies || observables.spectra => Some(entanglement::entanglement_spectrum(rho)?),
        _ => None,
    };
    if observables.entropies {
        let half = Partition::HalfLadder.kept_qubits(layout)?;
        let rho1 = entanglement::reduce_with_limit(state, &half, max_keep)?;
        rec.s_half = Some(entanglement::von_neumann_entropy(&rho1)?);
        rec.s_b = Some(match &spectrum_a {
            Some(spec) => entanglement::entropy_of_spectrum(spec)?,
            None => {
                let rho_b = entanglement::reduce_with_limit(state, &layout.b_qubits(), max_keep)?;
                entanglement::von_neumann_entropy(&rho_b)?
            }
        });
    }
    let mut spectra = None;
    if let Some(rho_a) = &rho_a {
        let report = entanglement::negativity_report(rho_a, Partition::ClusterSplit { block: split_block })?;
        if observables.negativity {
            rec.log_negativity = Some(report.log_negativity);
            rec.lambda_min = Some(report.lambda_min);
        }
        if observables.spectra {
            spectra = Some(SpectraRecord {
                t,
                entanglement: spectrum_a.expect("computed with spectra"),
                negativity: report.eigenvalues,
            });
        }
    }
    if observables.magnetization {
        rec.magnetization = state.magnetization_x();
    }
    if observables.string_order {
        rec.string_order = Some(order::string_order(state)?);
    }
    Ok((rec, spectra))
}

/// Runs a trajectory and records observables every `cadence` steps.
pub fn evolve(trajectory: &Trajectory) -> Result<ObservableSeries> {
    evolve_inspect(trajectory, |_, _| ())
}

/// Like [`evolve`], also handing every recorded state to `inspect`.
pub fn evolve_inspect(
    trajectory: &Trajectory,
    mut inspect: impl FnMut(u64, &PureState),
) -> Result<ObservableSeries> {
    trajectory.validate()?;
    let params = &trajectory.params;
    let mut state = trajectory.init.prepare(params.layout, trajectory.seed)?;
    let mut series = ObservableSeries::default();
    let mut record = |t: u64, state: &PureState, series: &mut ObservableSeries| -> Result<()> {
        let (rec, spec) = measure(state, t, &trajectory.observables, trajectory.split_block)?;
        series.records.push(rec);
        series.spectra.extend(spec);
        inspect(t, state);
        Ok(())
    };
    record(0, &state, &mut series)?;
    for t in 1..=trajectory.steps {
        step(&mut state, params)?;
        if t % trajectory.cadence == 0 {
            record(t, &state, &mut series)?;
        }
    }
    Ok(series)
}

/// `P_AB = Π_x X_x^A X_x^B`.
pub fn parity_operator(layout: &LatticeLayout) -> PauliString {
    PauliString::new((0..layout.qubits()).map(|q| (q, Pauli::X))).expect("distinct qubits")
}

/// `C_A = Π_x Z_x^A`.
pub fn mirror_operator(layout: &LatticeLayout) -> PauliString {
    PauliString::new(layout.a_qubits().into_iter().map(|q| (q, Pauli::Z))).expect("distinct qubits")
}

fn random_states(layout: LatticeLayout, trials: usize, seed: u64) -> Vec<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| PureState::haar(layout, &mut rng)).collect()
}

/// `max_ψ ‖U P ψ − P U ψ‖` over `trials` Haar-random states.
pub fn check_parity_symmetry(params: &AutomatonParams, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let p = parity_operator(&params.layout);
    let mut worst: f64 = 0.0;
    for psi in random_states(params.layout, trials, seed) {
        let mut lhs = psi.clone();
        lhs.apply_pauli(&p)?;
        step(&mut lhs, params)?;
        let mut rhs = psi;
        step(&mut rhs, params)?;
        rhs.apply_pauli(&p)?;
        worst = worst.max(lhs.distance(&rhs)?);
    }
    Ok(worst)
}

/// `max_ψ ‖C U C ψ − U† ψ‖` over `trials` Haar-random states, with
/// `C = Π_x Z_x^A`.
///
/// Conjugation by `C` flips the sign of both couplings but keeps the layer
/// order, so `C U C = Π C_A(−J) Π SW(−g)` while `U† = Π SW(−g) Π C_A(−J)`. The
/// two agree when the layers commute (`J = 0` or `g = 0`, or the continuous-time
/// limit `C H C = −H`) and differ at order `J·g` otherwise; see
/// [`check_mirror_symmetry_conjugated`] for the identity that holds at every
/// coupling.
pub fn check_mirror_symmetry(params: &AutomatonParams, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let c = mirror_operator(&params.layout);
    let mut worst: f64 = 0.0;
    for psi in random_states(params.layout, trials, seed) {
        let mut lhs = psi.clone();
        lhs.apply_pauli(&c)?;
        step(&mut lhs, params)?;
        lhs.apply_pauli(&c)?;
        let mut rhs = psi;
        step_adjoint(&mut rhs, params)?;
        worst = worst.max(lhs.distance(&rhs)?);
    }
    Ok(worst)
}

/// `max_ψ ‖C U C ψ − S U† S† ψ‖` with `S = Π_x SW_AB(g, x)`: the mirror
/// relation of the discrete-time step, exact at every coupling.
pub fn check_mirror_symmetry_conjugated(params: &AutomatonParams, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let c = mirror_operator(&params.layout);
    let mut worst: f64 = 0.0;
    for psi in random_states(params.layout, trials, seed) {
        let mut lhs = psi.clone();
        lhs.apply_pauli(&c)?;
        step(&mut lhs, params)?;
        lhs.apply_pauli(&c)?;
        let mut rhs = psi;
        swap_layer(&mut rhs, -params.g)?;
        step_adjoint(&mut rhs, params)?;
        swap_layer(&mut rhs, params.g)?;
        worst = worst.max(lhs.distance(&rhs)?);
    }
    Ok(worst)
}

/// Dense matrices of the model at small sizes, built from Pauli strings.
pub mod dense {
    use super::*;

    fn guard(layout: &LatticeLayout) -> Result<()> {
        if layout.qubits() > DENSE_MAX_QUBITS {
            return Err(Error::ResourceGuard(format!(
                "dense operators are limited to {DENSE_MAX_QUBITS} qubits"
            )));
        }
        Ok(())
    }

    /// Cluster stabilizer `Z_{x-1} X_x Z_{x+1}` on the A chain (truncated at
    /// open edges), as a dense matrix. Coinciding sites are multiplied out.
    pub fn stabilizer(layout: &LatticeLayout, x: usize) -> Result<CMat> {
        guard(layout)?;
        let n = layout.qubits();
        let (l, r) = layout.neighbors(x);
        let z = |c: Option<usize>| match c {
            Some(c) => linalg::pauli_dense(n, &PauliString::single(2 * c, Pauli::Z)),
            None => linalg::identity(1 << n),
        };
        let xm = linalg::pauli_dense(n, &PauliString::single(2 * x, Pauli::X));
        Ok(&(&z(l) * &xm) * &z(r))
    }

    /// `(X_A X_B + Y_A Y_B)/2` on cell `x`.
    pub fn exchange(layout: &LatticeLayout, x: usize) -> Result<CMat> {
        guard(layout)?;
        let n = layout.qubits();
        let (a, b) = (layout.a_qubit(x), layout.b_qubit(x));
        let xx = linalg::pauli_dense(n, &PauliString::new([(a, Pauli::X), (b, Pauli::X)])?);
        let yy = linalg::pauli_dense(n, &PauliString::new([(a, Pauli::Y), (b, Pauli::Y)])?);
        Ok(linalg::scaled(&(&xx + &yy), num_complex::Complex64::new(0.5, 0.0)))
    }

    /// Continuous-time Hamiltonian `H = −J Σ ZXZ − (g/2) Σ (XX + YY)`.
    pub fn hamiltonian(params: &AutomatonParams) -> Result<CMat> {
        let layout = &params.layout;
        guard(layout)?;
        let mut h = linalg::zeros(layout.dim());
        for x in 0..layout.cells() {
            h = &h - &linalg::scaled(&stabilizer(layout, x)?, num_complex::Complex64::new(params.j, 0.0));
            h = &h - &linalg::scaled(&exchange(layout, x)?, num_complex::Complex64::new(params.g, 0.0));
        }
        Ok(h)
    }

    /// `U(J, g)` as a product of dense gate exponentials.
    pub fn step_unitary(params: &AutomatonParams) -> Result<CMat> {
        let layout = &params.layout;
        guard(layout)?;
        let mut u = linalg::identity(layout.dim());
        for x in 0..layout.cells() {
            u = &linalg::expm_i_hermitian(&exchange(layout, x)?, params.g)? * &u;
        }
        for x in 0..layout.cells() {
            u = &linalg::expm_i_hermitian(&stabilizer(layout, x)?, params.j)? * &u;
        }
        Ok(u)
    }
}

/// Number of fixed random states the Trotter error is maximized over.
pub const TROTTER_STATES: usize = 4;

/// `max_ψ ‖U(sJ, sg) ψ − exp(−i s H(J, g)) ψ‖` over a fixed set of random
/// states; scales as `s²` for small `s`.
pub fn trotter_error(params: &AutomatonParams, s: f64) -> Result<f64> {
    let h = dense::hamiltonian(params)?;
    let exact = linalg::expm_i_hermitian(&h, -s)?;
    let scaled = params.scaled(s);
    let mut worst: f64 = 0.0;
    for psi in random_states(params.layout, TROTTER_STATES, 0x7407) {
        let reference = linalg::mat_vec(&exact, psi.amplitudes());
        let mut evolved = psi;
        step(&mut evolved, &scaled)?;
        let err = evolved
            .amplitudes()
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err);
    }
    Ok(worst)
}
