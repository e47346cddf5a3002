//! Statevector of the 2L-qubit ladder and the closed-form gate kernels.
//!
//! Qubits are interleaved cell by cell: the A site of cell `x` is qubit `2x`,
//! the B site is qubit `2x + 1`, and qubit 0 is the least-significant bit of a
//! basis-state index. Cell-local gates therefore touch neighbouring bits.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest number of qubits a [`PureState`] may be allocated with.
pub const MAX_STATE_QUBITS: usize = 30;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(invalid(format!("unknown boundary '{other}'"))),
        }
    }
}

/// Geometry of the ladder: `cells` AB cells and the boundary condition of the
/// A chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeLayout {
    cells: usize,
    boundary: Boundary,
}

impl LatticeLayout {
    pub fn new(cells: usize, boundary: Boundary) -> Result<Self> {
        if cells == 0 {
            return Err(invalid("a ladder needs at least one cell"));
        }
        if 2 * cells > MAX_STATE_QUBITS {
            return Err(Error::ResourceGuard(format!(
                "{} qubits exceed the hard limit of {MAX_STATE_QUBITS}",
                2 * cells
            )));
        }
        Ok(Self { cells, boundary })
    }

    pub fn periodic(cells: usize) -> Result<Self> {
        Self::new(cells, Boundary::Periodic)
    }

    pub fn open(cells: usize) -> Result<Self> {
        Self::new(cells, Boundary::Open)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Total number of qubits, `2L`.
    pub fn qubits(&self) -> usize {
        2 * self.cells
    }

    /// Hilbert-space dimension `2^(2L)`.
    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    pub fn a_qubit(&self, x: usize) -> usize {
        2 * x
    }

    pub fn b_qubit(&self, x: usize) -> usize {
        2 * x + 1
    }

    pub fn a_qubits(&self) -> Vec<usize> {
        (0..self.cells).map(|x| 2 * x).collect()
    }

    pub fn b_qubits(&self) -> Vec<usize> {
        (0..self.cells).map(|x| 2 * x + 1).collect()
    }

    /// Cells `x - 1` and `x + 1` of the A chain, `None` past an open edge.
    pub fn neighbors(&self, x: usize) -> (Option<usize>, Option<usize>) {
        let l = self.cells;
        match self.boundary {
            Boundary::Periodic => (Some((x + l - 1) % l), Some((x + 1) % l)),
            Boundary::Open => (x.checked_sub(1), (x + 1 < l).then_some(x + 1)),
        }
    }

    /// CZ bonds of the cluster-state preparation. On a periodic chain of two
    /// cells both bonds join the same pair and cancel.
    pub fn cluster_bonds(&self) -> Vec<(usize, usize)> {
        let l = self.cells;
        match self.boundary {
            Boundary::Periodic => (0..l)
                .map(|x| (x, (x + 1) % l))
                .filter(|(a, b)| a != b)
                .collect(),
            Boundary::Open => (0..l.saturating_sub(1)).map(|x| (x, x + 1)).collect(),
        }
    }

    fn check_cell(&self, x: usize) -> Result<()> {
        if x >= self.cells {
            return Err(invalid(format!("cell {x} out of range 0..{}", self.cells)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Tensor product of single-qubit Pauli operators, at most one per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PauliString {
    factors: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn new(factors: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut factors: Vec<_> = factors.into_iter().collect();
        factors.sort_by_key(|&(q, _)| q);
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("a Pauli string may act at most once per qubit"));
        }
        Ok(Self { factors })
    }

    pub fn single(qubit: usize, axis: Pauli) -> Self {
        Self {
            factors: vec![(qubit, axis)],
        }
    }

    pub fn factors(&self) -> &[(usize, Pauli)] {
        &self.factors
    }

    /// Bits flipped by the string (X and Y factors).
    pub fn flip_mask(&self) -> usize {
        self.factors
            .iter()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |m, &(q, _)| m | 1 << q)
    }

    /// Bits contributing a `(-1)^bit` sign (Y and Z factors).
    pub fn phase_mask(&self) -> usize {
        self.factors
            .iter()
            .filter(|(_, p)| matches!(p, Pauli::Y | Pauli::Z))
            .fold(0, |m, &(q, _)| m | 1 << q)
    }

    pub fn y_count(&self) -> usize {
        self.factors.iter().filter(|(_, p)| *p == Pauli::Y).count()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.last().map(|&(q, _)| q)
    }

    /// `P|j⟩ = phase(j) |j ^ flip_mask⟩`.
    pub(crate) fn action(&self) -> PauliAction {
        PauliAction {
            flip: self.flip_mask(),
            sign: self.phase_mask(),
            y_phase: I.powu(self.y_count() as u32),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub flip: usize,
    pub sign: usize,
    pub y_phase: Complex64,
}

impl PauliAction {
    #[inline]
    pub fn phase(&self, j: usize) -> Complex64 {
        if (j & self.sign).count_ones() % 2 == 0 {
            self.y_phase
        } else {
            -self.y_phase
        }
    }
}

/// Amplitudes of the full AB wavefunction over `2^(2L)` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: LatticeLayout,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector; the vector must have length `2^(2L)` and
    /// unit norm within `1e-10`.
    pub fn from_amplitudes(layout: LatticeLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} amplitudes, got {}",
                layout.dim(),
                amps.len()
            )));
        }
        let state = Self { layout, amps };
        let drift = (state.norm_sqr() - 1.0).abs();
        if drift > 1e-10 {
            return Err(invalid(format!("state is not normalized (|norm² - 1| = {drift:e})")));
        }
        Ok(state)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(layout: LatticeLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(invalid(format!("basis index {index} out of range")));
        }
        let mut amps = vec![ZERO; layout.dim()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { layout, amps })
    }

    /// `|+⟩` on every qubit: all amplitudes equal `2^(-L)`.
    pub fn plus_product(layout: LatticeLayout) -> Self {
        let a = (layout.dim() as f64).sqrt().recip();
        Self {
            layout,
            amps: vec![Complex64::new(a, 0.0); layout.dim()],
        }
    }

    /// Cluster state on the A chain times `|+⟩^L` on the B row.
    pub fn cluster_plus(layout: LatticeLayout) -> Self {
        let bonds = layout.cluster_bonds();
        let a = (layout.dim() as f64).sqrt().recip();
        let amps = (0..layout.dim())
            .map(|i| {
                let flips = bonds
                    .iter()
                    .filter(|&&(x, y)| i >> (2 * x) & 1 == 1 && i >> (2 * y) & 1 == 1)
                    .count();
                Complex64::new(if flips % 2 == 0 { a } else { -a }, 0.0)
            })
            .collect();
        Self { layout, amps }
    }

    /// Haar-random state: independent standard-normal real and imaginary
    /// parts, normalized.
    pub fn haar<R: Rng + ?Sized>(layout: LatticeLayout, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> = (0..layout.dim())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= n);
        Self { layout, amps }
    }

    pub fn layout(&self) -> &LatticeLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn apply_global_phase(&mut self, theta: f64) {
        let p = Complex64::from_polar(1.0, theta);
        self.amps.iter_mut().for_each(|a| *a *= p);
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch("states have different layouts".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch("states have different layouts".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Applies `exp(iJ K_x) = cos J + i sin J K_x` where `K_x` is the cluster
    /// stabilizer `Z_{x-1} X_x Z_{x+1}` on the A chain. Past an open edge the
    /// missing `Z` is dropped, giving `X_0 Z_1` and `Z_{L-2} X_{L-1}`.
    pub fn apply_cluster_gate(&mut self, x: usize, j: f64) -> Result<()> {
        self.layout.check_cell(x)?;
        let (left, right) = self.layout.neighbors(x);
        let bit = |c: Option<usize>| c.map_or(0, |c| 1usize << (2 * c));
        let (zl, zr) = (bit(left), bit(right));
        let m = 1usize << (2 * x);
        let (c, s) = (j.cos(), j.sin());
        let sign = |i: usize, mask: usize| if i & mask == 0 { 1.0 } else { -1.0 };
        for hi in (0..self.amps.len()).step_by(2 * m) {
            for i in hi..hi + m {
                let k = i | m;
                // ⟨i|K|k⟩: Z_right acts on |k⟩, X flips to |i⟩, then Z_left.
                let kik = sign(k, zr) * sign(i, zl);
                let kki = sign(i, zr) * sign(k, zl);
                let (ai, ak) = (self.amps[i], self.amps[k]);
                self.amps[i] = c * ai + I * (s * kik) * ak;
                self.amps[k] = c * ak + I * (s * kki) * ai;
            }
        }
        Ok(())
    }

    /// Applies `exp[ig (X_A X_B + Y_A Y_B)/2]` on cell `x`: a rotation by `g`
    /// inside the one-excitation subspace `{|01⟩, |10⟩}`.
    pub fn apply_swap_gate(&mut self, x: usize, g: f64) -> Result<()> {
        self.layout.check_cell(x)?;
        let a = 1usize << (2 * x);
        let b = a << 1;
        let (c, s) = (g.cos(), g.sin());
        let block = 4 * a;
        for hi in (0..self.amps.len()).step_by(block) {
            for i in hi..hi + a {
                let (p, q) = (i | a, i | b);
                let (ap, aq) = (self.amps[p], self.amps[q]);
                self.amps[p] = c * ap + I * s * aq;
                self.amps[q] = c * aq + I * s * ap;
            }
        }
        Ok(())
    }

    /// Applies a Pauli string in place.
    pub fn apply_pauli(&mut self, pauli: &PauliString) -> Result<()> {
        self.check_pauli(pauli)?;
        let act = pauli.action();
        let old = self.amps.clone();
        for (j, &a) in old.iter().enumerate() {
            self.amps[j ^ act.flip] = act.phase(j) * a;
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`; real for a Hermitian Pauli string.
    pub fn expectation_pauli(&self, pauli: &PauliString) -> Result<f64> {
        self.check_pauli(pauli)?;
        let act = pauli.action();
        let value: Complex64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(j, &a)| self.amps[j ^ act.flip].conj() * act.phase(j) * a)
            .sum();
        debug_assert!(value.im.abs() < 1e-9, "non-real Pauli expectation {value}");
        Ok(value.re)
    }

    /// `⟨X_q⟩` for every qubit, in qubit order (A and B sites interleaved).
    pub fn magnetization_x(&self) -> Vec<f64> {
        (0..self.layout.qubits())
            .map(|q| {
                let m = 1usize << q;
                let v: f64 = self
                    .amps
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j & m == 0)
                    .map(|(j, a)| 2.0 * (a.conj() * self.amps[j | m]).re)
                    .sum();
                v
            })
            .collect()
    }

    fn check_pauli(&self, pauli: &PauliString) -> Result<()> {
        match pauli.max_qubit() {
            Some(q) if q >= self.layout.qubits() => Err(invalid(format!(
                "Pauli string acts on qubit {q} of a {}-qubit state",
                self.layout.qubits()
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zxz(layout: &LatticeLayout, x: usize) -> PauliString {
        let (l, r) = layout.neighbors(x);
        let mut f = vec![(2 * x, Pauli::X)];
        f.extend(l.map(|c| (2 * c, Pauli::Z)));
        f.extend(r.map(|c| (2 * c, Pauli::Z)));
        PauliString::new(f).unwrap()
    }

    #[test]
    fn zero_cells_rejected() {
        assert!(LatticeLayout::periodic(0).is_err());
    }

    #[test]
    fn plus_product_amplitudes() {
        let s = PureState::plus_product(LatticeLayout::periodic(1).unwrap());
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
        }
        let s = PureState::plus_product(LatticeLayout::periodic(2).unwrap());
        assert!(s.amplitudes().iter().all(|a| (a.re - 0.25).abs() < 1e-15 && a.im == 0.0));
        for l in 1..6 {
            let s = PureState::plus_product(LatticeLayout::periodic(l).unwrap());
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cluster_two_cells_periodic_is_plus() {
        // Both CZ bonds join the same pair of sites and cancel.
        let layout = LatticeLayout::periodic(2).unwrap();
        let s = PureState::cluster_plus(layout);
        assert_eq!(s, PureState::plus_product(layout));
    }

    #[test]
    fn cluster_three_cells_open_sign() {
        let layout = LatticeLayout::open(3).unwrap();
        let s = PureState::cluster_plus(layout);
        // A pattern 110 (A_0 = A_1 = 1, A_2 = 0) with B = 000; amplitude
        // carries -1/√8 on the A register times (1/√2)^3 from B.
        let idx = 0b000101;
        let expected = -(8f64).sqrt().recip() * (8f64).sqrt().recip();
        assert_abs_diff_eq!(s.amplitudes()[idx].re, expected, epsilon = 1e-15);
        // Marginal A amplitude: sum over the B register.
        let a_amp: f64 = (0..8)
            .map(|b: usize| {
                let i = idx | (b & 1) << 1 | (b >> 1 & 1) << 3 | (b >> 2 & 1) << 5;
                s.amplitudes()[i].re
            })
            .sum::<f64>()
            / (8f64).sqrt();
        assert_abs_diff_eq!(a_amp, -(8f64).sqrt().recip(), epsilon = 1e-15);
    }

    #[test]
    fn cluster_stabilizers_are_one() {
        for l in [3, 4, 5, 6] {
            let layout = LatticeLayout::periodic(l).unwrap();
            let s = PureState::cluster_plus(layout);
            for x in 0..l {
                assert_abs_diff_eq!(s.expectation_pauli(&zxz(&layout, x)).unwrap(), 1.0, epsilon = 1e-12);
            }
        }
        // Open chains use the truncated edge stabilizers.
        let layout = LatticeLayout::open(5).unwrap();
        let s = PureState::cluster_plus(layout);
        for x in 0..5 {
            assert_abs_diff_eq!(s.expectation_pauli(&zxz(&layout, x)).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cluster_gate_identity_at_zero() {
        let layout = LatticeLayout::periodic(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s0 = PureState::haar(layout, &mut rng);
        let mut s = s0.clone();
        s.apply_cluster_gate(1, 0.0).unwrap();
        assert_eq!(s, s0);
    }

    #[test]
    fn cluster_gate_on_plus_triple() {
        // A register |+++⟩: K|+++⟩ = |−+−⟩, so the gate gives cos J|+++⟩ + i sin J|−+−⟩.
        let layout = LatticeLayout::periodic(3).unwrap();
        let j = 0.37;
        let mut s = PureState::plus_product(layout);
        s.apply_cluster_gate(1, j).unwrap();
        let mut flipped = PureState::plus_product(layout);
        flipped
            .apply_pauli(&PauliString::new([(0, Pauli::Z), (4, Pauli::Z)]).unwrap())
            .unwrap();
        let plus = PureState::plus_product(layout);
        let expect: Vec<_> = plus
            .amplitudes()
            .iter()
            .zip(flipped.amplitudes())
            .map(|(p, m)| j.cos() * p + I * j.sin() * m)
            .collect();
        for (a, b) in s.amplitudes().iter().zip(&expect) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn cluster_gate_half_pi_on_cluster_state_is_i() {
        let layout = LatticeLayout::periodic(4).unwrap();
        let s0 = PureState::cluster_plus(layout);
        let mut s = s0.clone();
        s.apply_cluster_gate(2, std::f64::consts::FRAC_PI_2).unwrap();
        for (a, b) in s.amplitudes().iter().zip(s0.amplitudes()) {
            assert_abs_diff_eq!((a - I * b).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn open_cluster_gate_accepts_edges_rejects_outside() {
        let layout = LatticeLayout::open(4).unwrap();
        let mut s = PureState::cluster_plus(layout);
        for x in 0..4 {
            s.apply_cluster_gate(x, 0.3).unwrap();
        }
        assert!(s.apply_cluster_gate(4, 0.3).is_err());
    }

    #[test]
    fn swap_gate_actions() {
        let layout = LatticeLayout::periodic(1).unwrap();
        let g = 0.8;
        // |01⟩ in (B, A) bit order means A = 1, B = 0 -> index 0b01.
        let mut s = PureState::basis(layout, 0b01).unwrap();
        s.apply_swap_gate(0, g).unwrap();
        assert_abs_diff_eq!((s.amplitudes()[0b01] - g.cos()).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s.amplitudes()[0b10] - I * g.sin()).norm(), 0.0, epsilon = 1e-15);

        let half = std::f64::consts::FRAC_PI_2;
        let mut s = PureState::basis(layout, 0b10).unwrap();
        s.apply_swap_gate(0, half).unwrap();
        assert_abs_diff_eq!((s.amplitudes()[0b01] - I).norm(), 0.0, epsilon = 1e-15);

        for idx in 0..4 {
            let mut s = PureState::basis(layout, idx).unwrap();
            s.apply_swap_gate(0, std::f64::consts::PI).unwrap();
            let expect = if idx == 0 || idx == 3 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!((s.amplitudes()[idx] - expect).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn swap_gate_matches_pauli_decomposition() {
        // SW(g) = cos²(g/2) I + sin²(g/2) ZZ + (i/2) sin g (XX + YY)
        let layout = LatticeLayout::periodic(1).unwrap();
        let g = 1.1;
        let strings = [
            PauliString::new([(0, Pauli::Z), (1, Pauli::Z)]).unwrap(),
            PauliString::new([(0, Pauli::X), (1, Pauli::X)]).unwrap(),
            PauliString::new([(0, Pauli::Y), (1, Pauli::Y)]).unwrap(),
        ];
        for col in 0..4 {
            let mut s = PureState::basis(layout, col).unwrap();
            s.apply_swap_gate(0, g).unwrap();
            let mut expect = vec![ZERO; 4];
            expect[col] += (g / 2.0).cos().powi(2);
            for (k, p) in strings.iter().enumerate() {
                let mut b = PureState::basis(layout, col).unwrap();
                b.apply_pauli(p).unwrap();
                let w = if k == 0 {
                    Complex64::new((g / 2.0).sin().powi(2), 0.0)
                } else {
                    I * 0.5 * g.sin()
                };
                for (e, a) in expect.iter_mut().zip(b.amplitudes()) {
                    *e += w * a;
                }
            }
            for (a, e) in s.amplitudes().iter().zip(&expect) {
                assert_abs_diff_eq!((a - e).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn expectation_values_on_plus() {
        let layout = LatticeLayout::periodic(3).unwrap();
        let s = PureState::plus_product(layout);
        assert_abs_diff_eq!(s.expectation_pauli(&PauliString::single(2, Pauli::X)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.expectation_pauli(&PauliString::single(2, Pauli::Z)).unwrap(), 0.0, epsilon = 1e-14);
        assert!(s.magnetization_x().iter().all(|m| (m - 1.0).abs() < 1e-14));
        assert!(s.expectation_pauli(&PauliString::single(6, Pauli::X)).is_err());
    }

    #[test]
    fn pauli_string_rejects_repeated_qubits() {
        assert!(PauliString::new([(1, Pauli::X), (1, Pauli::Z)]).is_err());
    }

    #[test]
    fn inner_products() {
        let layout = LatticeLayout::periodic(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = PureState::haar(layout, &mut rng);
        assert_abs_diff_eq!(s.inner_product(&s).unwrap().re, 1.0, epsilon = 1e-12);
        let a = PureState::basis(layout, 3).unwrap();
        let b = PureState::basis(layout, 5).unwrap();
        assert_eq!(a.inner_product(&b).unwrap(), ZERO);
        let p = PureState::plus_product(layout);
        assert_abs_diff_eq!(p.inner_product(&a).unwrap().re, 0.25, epsilon = 1e-15);
        let other = PureState::plus_product(LatticeLayout::periodic(3).unwrap());
        assert!(p.inner_product(&other).is_err());
    }
}
