//! Dynamics of the cluster register alone, with the free spins traced out.
//!
//! Resetting the B spins to `|+⟩` before every step (the Markov approximation)
//! turns one automaton step into a channel on the `L`-qubit A register with
//! Kraus operators indexed by which B spins end up in `|−⟩`. In this module
//! qubit `x` of the register is A site `x`, and bit `x` of a Kraus index `n` is
//! set when B site `x` is flipped.
//!
//! The dense representation is limited to [`MAX_CELLS`] sites; front ends
//! default to the smaller [`DEFAULT_MAX_CELLS`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::automaton::{self, AutomatonParams};
use crate::entanglement::{self, DensityMatrix, Partition};
use crate::error::{invalid, Error, Result};
use crate::lattice::{LatticeLayout, Pauli, PauliString};
use crate::linalg::{self, CMat};

/// Largest register handled by the dense channel code (256 Kraus operators
/// of 256×256 at the limit).
pub const MAX_CELLS: usize = 8;
/// Register size guard for routine runs.
pub const DEFAULT_MAX_CELLS: usize = 6;
/// Largest accepted Lindblad time step.
pub const MAX_DT: f64 = 0.01;
/// Largest accepted trace drift of a Lindblad run.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;
/// Tolerance of the Kraus symmetry sign rule.
pub const SYMMETRY_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_cells(cells: usize) -> Result<()> {
    if cells > MAX_CELLS {
        return Err(Error::ResourceGuard(format!(
            "dense channel operators are limited to {MAX_CELLS} sites, got {cells}"
        )));
    }
    Ok(())
}

/// `⟨+|SW(g)|+⟩ = cos(g/2) e^{igX/2}` and `⟨−|SW(g)|+⟩ = sin(g/2) e^{−igX/2} Y`
/// as 2×2 operators on the A spin.
pub fn swap_expectations(g: f64) -> (CMat, CMat) {
    let x = linalg::pauli_x();
    let plus = linalg::scaled(&linalg::expm_i_hermitian(&x, g / 2.0).expect("2×2 eigensolve"), c((g / 2.0).cos()));
    let minus_rot = linalg::expm_i_hermitian(&x, -g / 2.0).expect("2×2 eigensolve");
    let minus = linalg::scaled(&(&minus_rot * &linalg::pauli_y()), c((g / 2.0).sin()));
    (plus, minus)
}

/// Stabilizer `Z_{x−1} X_x Z_{x+1}` of the register, with coinciding sites
/// multiplied out and open edges truncated.
pub fn register_stabilizer(layout: &LatticeLayout, x: usize) -> CMat {
    let n = layout.cells();
    let (l, r) = layout.neighbors(x);
    let z = |s: Option<usize>| match s {
        Some(s) => linalg::pauli_dense(n, &PauliString::single(s, Pauli::Z)),
        None => linalg::identity(1 << n),
    };
    let xm = linalg::pauli_dense(n, &PauliString::single(x, Pauli::X));
    &(&z(l) * &xm) * &z(r)
}

/// `Π_x exp(iJ K_x)` on the register.
pub fn cluster_layer(layout: &LatticeLayout, j: f64) -> CMat {
    let dim = 1usize << layout.cells();
    let (cos, sin) = (j.cos(), j.sin());
    let mut u = linalg::identity(dim);
    for x in 0..layout.cells() {
        let k = register_stabilizer(layout, x);
        let gate = CMat::from_fn(dim, dim, |r, col| {
            let id = if r == col { c(cos) } else { c(0.0) };
            id + k[(r, col)] * Complex64::new(0.0, sin)
        });
        u = &gate * &u;
    }
    u
}

/// `Π_x exp(iθ X_x)` on a register of `cells` qubits.
fn x_rotation(cells: usize, theta: f64) -> CMat {
    let site = linalg::expm_i_hermitian(&linalg::pauli_x(), theta).expect("2×2 eigensolve");
    linalg::tensor(&vec![site; cells])
}

/// Shared Kraus prefactor `u₀(g) = Π_x exp(iJ K_x) · Π_x exp(igX_x/2)`.
pub fn prefactor(layout: &LatticeLayout, j: f64, g: f64) -> CMat {
    &cluster_layer(layout, j) * &x_rotation(layout.cells(), g / 2.0)
}

/// `H₀ = −J Σ K_x − (g/2) Σ X_x`, the generator with `u₀ ≈ exp(−iH₀)` to first
/// order in the couplings.
pub fn effective_hamiltonian(layout: &LatticeLayout, j: f64, g: f64) -> Result<CMat> {
    check_cells(layout.cells())?;
    let n = layout.cells();
    let mut h = linalg::zeros(1 << n);
    for x in 0..n {
        h = &h - &linalg::scaled(&register_stabilizer(layout, x), c(j));
        h = &h - &linalg::scaled(&linalg::pauli_dense(n, &PauliString::single(x, Pauli::X)), c(g / 2.0));
    }
    Ok(h)
}

#[derive(Debug, Clone)]
pub struct KrausSet {
    pub params: AutomatonParams,
    pub u0: CMat,
    /// `M_n` for `n = 0 .. 2^L`.
    pub ops: Vec<CMat>,
}

impl KrausSet {
    pub fn cells(&self) -> usize {
        self.params.layout.cells()
    }

    /// `‖Σ M_n† M_n − I‖` (largest entry).
    pub fn completeness_defect(&self) -> f64 {
        let dim = 1usize << self.cells();
        let mut sum = linalg::zeros(dim);
        for m in &self.ops {
            sum = &sum + &(m.adjoint() * m);
        }
        linalg::max_abs_diff(&sum, &linalg::identity(dim))
    }
}

/// Scalar weight `cos^{L−f}(g/2) sin^f(g/2)` of a Kraus operator with `f` flips.
pub fn kraus_weight(cells: usize, flips: usize, g: f64) -> f64 {
    (g / 2.0).cos().powi((cells - flips) as i32) * (g / 2.0).sin().powi(flips as i32)
}

/// All `2^L` Kraus operators `M_n = w(|n₊|) · u₀ · Π_{x∈n₊} e^{−igX_x} Y_x`.
pub fn build_kraus(params: &AutomatonParams) -> Result<KrausSet> {
    let layout = &params.layout;
    let n = layout.cells();
    check_cells(n)?;
    let g = params.g;
    let u0 = prefactor(layout, params.j, g);
    let flip = &linalg::expm_i_hermitian(&linalg::pauli_x(), -g).expect("2×2 eigensolve") * &linalg::pauli_y();
    let ops = (0..1usize << n)
        .map(|idx| {
            let sites: Vec<CMat> = (0..n)
                .map(|x| if idx >> x & 1 == 1 { flip.clone() } else { linalg::identity(2) })
                .collect();
            let w = kraus_weight(n, idx.count_ones() as usize, g);
            linalg::scaled(&(&u0 * &linalg::tensor(&sites)), c(w))
        })
        .collect();
    Ok(KrausSet {
        params: *params,
        u0,
        ops,
    })
}

#[derive(Debug, Clone)]
pub struct ChannelState {
    pub rho: DensityMatrix,
    pub step: u64,
}

impl ChannelState {
    pub fn new(rho: DensityMatrix) -> Self {
        Self { rho, step: 0 }
    }
}

fn conjugate(u: &CMat, rho: &CMat) -> CMat {
    u * rho * u.adjoint()
}

/// `ρ ← Σ_n M_n ρ M_n†`.
pub fn markov_step(state: &ChannelState, kraus: &KrausSet) -> Result<ChannelState> {
    let dim = state.rho.dim();
    if dim != 1 << kraus.cells() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {dim} does not match a {}-site channel",
            kraus.cells()
        )));
    }
    let rho = state.rho.matrix();
    let mut out = linalg::zeros(dim);
    for m in &kraus.ops {
        out = &out + &conjugate(m, rho);
    }
    linalg::hermitize(&mut out);
    Ok(ChannelState {
        rho: DensityMatrix::from_parts(out),
        step: state.step + 1,
    })
}

/// Result of one coherent all-flip step.
#[derive(Debug, Clone)]
pub struct CoherentStep {
    /// Renormalized state.
    pub state: ChannelState,
    /// Trace of the unnormalized image, `sin^{2L}(g/2)`.
    pub weight: f64,
}

/// The all-flip term alone, `ρ ← M ρ M†` with `M = sin^L(g/2) u₀(−g) Π_x Y_x`,
/// renormalized to unit trace.
pub fn coherent_step(state: &ChannelState, params: &AutomatonParams) -> Result<CoherentStep> {
    let layout = &params.layout;
    let n = layout.cells();
    check_cells(n)?;
    if state.rho.dim() != 1 << n {
        return Err(Error::DimensionMismatch("state does not match the register".into()));
    }
    let amp = (params.g / 2.0).sin();
    if amp.abs() < 1e-15 {
        return Err(invalid("the all-flip term vanishes at g ≡ 0 (mod 2π)"));
    }
    let v = &prefactor(layout, params.j, -params.g) * &linalg::tensor(&vec![linalg::pauli_y(); n]);
    let mut out = conjugate(&v, state.rho.matrix());
    linalg::hermitize(&mut out);
    Ok(CoherentStep {
        state: ChannelState {
            rho: DensityMatrix::from_parts(out),
            step: state.step + 1,
        },
        weight: amp.powi(2 * n as i32),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Strong,
    Weak,
}

/// Strong for an even number of flips, weak for odd; verifies
/// `P M_n P = (−1)^{|n₊|} M_n` with `P = Π_x X_x`.
pub fn classify_symmetry(kraus: &KrausSet, n: usize) -> Result<SymmetryKind> {
    let m = kraus
        .ops
        .get(n)
        .ok_or_else(|| invalid(format!("Kraus index {n} out of range")))?;
    let cells = kraus.cells();
    let p = linalg::tensor(&vec![linalg::pauli_x(); cells]);
    let odd = n.count_ones() % 2 == 1;
    let sign = if odd { -1.0 } else { 1.0 };
    let pmp = &(&p * m) * &p;
    let defect = linalg::max_abs_diff(&pmp, &linalg::scaled(m, c(sign)));
    if defect > SYMMETRY_TOL {
        return Err(Error::Numerical(format!(
            "Kraus operator {n} violates the parity sign rule by {defect:e}"
        )));
    }
    Ok(if odd { SymmetryKind::Weak } else { SymmetryKind::Strong })
}

/// One exact automaton step of `ρ_A ⊗ |+⟩⟨+|^L` followed by the trace over B,
/// computed with the dense ladder unitary.
pub fn full_step_oracle(rho_a: &DensityMatrix, params: &AutomatonParams) -> Result<DensityMatrix> {
    let layout = &params.layout;
    let n = layout.cells();
    if rho_a.qubits() != n {
        return Err(Error::DimensionMismatch("state does not match the register".into()));
    }
    let u = automaton::dense::step_unitary(params)?;
    let dim = layout.dim();
    let a_of = |i: usize| (0..n).fold(0usize, |acc, x| acc | (i >> layout.a_qubit(x) & 1) << x);
    let env = 1.0 / (1usize << n) as f64;
    let m = rho_a.matrix();
    let full = CMat::from_fn(dim, dim, |i, j| m[(a_of(i), a_of(j))] * env);
    let evolved = DensityMatrix::from_parts(conjugate(&u, &full));
    let b_mask = layout.b_qubits().iter().fold(0usize, |acc, &q| acc | 1 << q);
    entanglement::partial_trace(&evolved, b_mask)
}

/// Observables of a register state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSample {
    pub step: u64,
    pub time: f64,
    pub trace: f64,
    pub purity: f64,
    pub entropy: f64,
    pub log_negativity: f64,
    pub lambda_min: f64,
}

pub fn sample(state: &ChannelState, time: f64, split_block: usize) -> Result<ChannelSample> {
    let report = entanglement::negativity_report(&state.rho, Partition::ClusterSplit { block: split_block })?;
    Ok(ChannelSample {
        step: state.step,
        time,
        trace: state.rho.trace().re,
        purity: state.rho.purity(),
        entropy: entanglement::von_neumann_entropy(&state.rho)?,
        log_negativity: report.log_negativity,
        lambda_min: report.lambda_min,
    })
}

/// Generator of the Lindblad limit in units `J = 1`:
/// `−i[H̄, ρ] + (ḡ²/4) Σ_x (Y_x ρ Y_x − ρ)` with `H̄ = −Σ_x (K_x + (ḡ/2) X_x)`.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    cells: usize,
    h: CMat,
    rate: f64,
}

impl Lindbladian {
    pub fn new(layout: &LatticeLayout, gbar: f64) -> Result<Self> {
        check_cells(layout.cells())?;
        Ok(Self {
            cells: layout.cells(),
            h: effective_hamiltonian(layout, 1.0, gbar)?,
            rate: gbar * gbar / 4.0,
        })
    }

    /// Dissipator switched off.
    pub fn hamiltonian_only(mut self) -> Self {
        self.rate = 0.0;
        self
    }

    /// Hamiltonian switched off.
    pub fn dissipator_only(mut self) -> Self {
        self.h = linalg::zeros(self.h.nrows());
        self
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        let hr = &self.h * rho;
        let rh = rho * &self.h;
        let i = Complex64::i();
        let mut out = linalg::scaled(&(&hr - &rh), -i);
        if self.rate != 0.0 {
            let dim = rho.nrows();
            let flips = CMat::from_fn(dim, dim, |r, col| {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..self.cells {
                    let m = 1usize << x;
                    // Y ρ Y picks up (−1)^{b_r + b_c} and flips both bits.
                    let s = if ((r ^ col) & m) == 0 { 1.0 } else { -1.0 };
                    acc += rho[(r ^ m, col ^ m)] * s;
                }
                acc - rho[(r, col)] * self.cells as f64
            });
            out = &out + &linalg::scaled(&flips, c(self.rate));
        }
        out
    }

    /// One classical fourth-order Runge-Kutta step followed by Hermitization.
    pub fn rk4_step(&self, rho: &CMat, dt: f64) -> CMat {
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &linalg::scaled(&k1, c(dt / 2.0))));
        let k3 = self.apply(&(rho + &linalg::scaled(&k2, c(dt / 2.0))));
        let k4 = self.apply(&(rho + &linalg::scaled(&k3, c(dt))));
        let sum = &(&k1 + &linalg::scaled(&k2, c(2.0))) + &(&linalg::scaled(&k3, c(2.0)) + &k4);
        let mut out = rho + &linalg::scaled(&sum, c(dt / 6.0));
        linalg::hermitize(&mut out);
        out
    }
}

/// Integrates the Lindblad limit from `rho0` for `steps` steps of `dt`,
/// returning the states every `record_every` steps (including the initial one).
pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    layout: &LatticeLayout,
    gbar: f64,
    dt: f64,
    steps: u64,
    record_every: u64,
) -> Result<Vec<ChannelState>> {
    lindblad_evolve_with(&Lindbladian::new(layout, gbar)?, rho0, dt, steps, record_every)
}

pub fn lindblad_evolve_with(
    generator: &Lindbladian,
    rho0: &DensityMatrix,
    dt: f64,
    steps: u64,
    record_every: u64,
) -> Result<Vec<ChannelState>> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(invalid(format!("time step must lie in (0, {MAX_DT}], got {dt}")));
    }
    if record_every == 0 {
        return Err(invalid("record interval must be at least 1"));
    }
    if rho0.qubits() != generator.cells {
        return Err(Error::DimensionMismatch("state does not match the register".into()));
    }
    let tr0 = rho0.trace().re;
    let mut rho = rho0.matrix().clone();
    let mut out = vec![ChannelState::new(rho0.clone())];
    for step in 1..=steps {
        rho = generator.rk4_step(&rho, dt);
        let drift = (linalg::trace(&rho).re - tr0).abs();
        if drift > TRACE_DRIFT_TOL {
            return Err(Error::Numerical(format!(
                "trace drifted by {drift:e} after {step} steps; reduce the time step"
            )));
        }
        if step % record_every == 0 {
            out.push(ChannelState {
                rho: DensityMatrix::from_parts(rho.clone()),
                step,
            });
        }
    }
    Ok(out)
}
