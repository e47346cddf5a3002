//! Reduced density matrices, von Neumann entropies, partial transposes and the
//! negativity spectrum.
//!
//! Logarithms are base 2 throughout. Eigenvalues in `(-1e-10, 0)` are treated
//! as zero when computing entropies, but spectra are always reported raw.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lattice::{LatticeLayout, PureState};
use crate::linalg::{self, CMat};

/// Default cap on the number of kept qubits in [`reduce`].
pub const DEFAULT_MAX_KEEP: usize = 14;

/// Eigenvalues above this (negative) threshold count as zero in entropies.
pub const CLIP_NEGATIVE: f64 = -1e-10;

/// Eigenvalues below this make a matrix unphysical for entropy purposes.
pub const REJECT_NEGATIVE: f64 = -1e-8;

/// Hermitian, unit-trace matrix on a register of `qubits` qubits.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Wraps a matrix after checking it is square of size `2^n`, Hermitian
    /// within `1e-10` and of unit trace within `1e-10`.
    pub fn new(mat: CMat) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square with power-of-two size, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = linalg::hermiticity_defect(&mat);
        if herm > 1e-10 {
            return Err(invalid(format!("matrix is not Hermitian (defect {herm:e})")));
        }
        let tr = linalg::trace(&mat);
        if (tr - 1.0).norm() > 1e-10 {
            return Err(invalid(format!("trace {tr} differs from 1")));
        }
        Ok(Self::from_parts(mat))
    }

    pub(crate) fn from_parts(mat: CMat) -> Self {
        let qubits = mat.nrows().trailing_zeros() as usize;
        Self { qubits, mat }
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn from_pure(amps: &[Complex64]) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch("amplitude count must be a power of two".into()));
        }
        let m = CMat::from_fn(amps.len(), amps.len(), |i, j| amps[i] * amps[j].conj());
        Self::new(m)
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let mut m = linalg::identity(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self { qubits, mat: m }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.mat)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        linalg::frobenius(&self.mat).powi(2)
    }

    /// `σ ⊗ τ` with `other` on the low qubits.
    pub fn tensor(&self, low: &DensityMatrix) -> Self {
        Self::from_parts(linalg::kron(&self.mat, &low.mat))
    }
}

/// The bipartitions used to characterize the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Partition {
    /// First `L/2` AB cells against the rest (requires even `L`).
    HalfLadder,
    /// Sublattice A against sublattice B.
    Sublattice,
    /// Within the A register: the last `block` A sites (A₂) against the rest.
    ClusterSplit { block: usize },
}

impl Partition {
    /// Cluster split with the default block of half the A sites.
    pub fn cluster_half(cells: usize) -> Self {
        Partition::ClusterSplit { block: cells / 2 }
    }

    /// Qubits of the full ladder kept by the first factor of the partition.
    pub fn kept_qubits(&self, layout: &LatticeLayout) -> Result<Vec<usize>> {
        let l = layout.cells();
        match self {
            Partition::HalfLadder => {
                if l % 2 != 0 {
                    return Err(invalid("half-ladder partition needs an even number of cells"));
                }
                Ok((0..l).collect())
            }
            Partition::Sublattice => Ok(layout.a_qubits()),
            Partition::ClusterSplit { .. } => Err(invalid(
                "the cluster split acts on the A register, not on the full ladder",
            )),
        }
    }

    /// Bit mask of the transposed factor for a register of `qubits` qubits.
    ///
    /// For the cluster split the register is the A chain (qubit `k` = A site
    /// `k`); for the other kinds it is the full interleaved ladder.
    pub fn transpose_mask(&self, qubits: usize) -> Result<usize> {
        match *self {
            Partition::ClusterSplit { block } => {
                if block == 0 || block >= qubits {
                    return Err(invalid(format!(
                        "cluster split block {block} must lie in 1..{qubits}"
                    )));
                }
                Ok(((1usize << block) - 1) << (qubits - block))
            }
            Partition::HalfLadder => {
                if qubits % 4 != 0 {
                    return Err(invalid("half-ladder partition needs an even number of cells"));
                }
                Ok(((1usize << (qubits / 2)) - 1) << (qubits / 2))
            }
            Partition::Sublattice => {
                if qubits % 2 != 0 {
                    return Err(invalid("sublattice partition needs an even qubit count"));
                }
                Ok((0..qubits / 2).fold(0, |m, x| m | 1 << (2 * x + 1)))
            }
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Partition::HalfLadder => f.write_str("half-ladder"),
            Partition::Sublattice => f.write_str("sublattice"),
            Partition::ClusterSplit { block } => write!(f, "cluster-split:{block}"),
        }
    }
}

/// Negativity spectrum of a partially transposed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Eigenvalues of the partial transpose, ascending.
    pub eigenvalues: Vec<f64>,
    /// Minimum eigenvalue, the entanglement witness.
    pub lambda_min: f64,
    /// `log₂ Σ|λ_n|`.
    pub log_negativity: f64,
    pub partition: Partition,
    pub time: Option<u64>,
}

/// Partial trace of `|ψ⟩⟨ψ|` onto the qubits in `keep`; kept qubit `keep[k]`
/// becomes bit `k` of the reduced register.
pub fn reduce(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    reduce_with_limit(state, keep, DEFAULT_MAX_KEEP)
}

pub fn reduce_with_limit(state: &PureState, keep: &[usize], max_keep: usize) -> Result<DensityMatrix> {
    let n = state.layout().qubits();
    if keep.is_empty() || keep.len() >= n {
        return Err(invalid("kept qubits must form a nonempty proper subset"));
    }
    if keep.len() > max_keep {
        return Err(Error::ResourceGuard(format!(
            "reduced state on {} qubits exceeds the limit of {max_keep}",
            keep.len()
        )));
    }
    let mut kept = vec![false; n];
    for &q in keep {
        if q >= n || kept[q] {
            return Err(invalid(format!("invalid or repeated qubit {q} in keep set")));
        }
        kept[q] = true;
    }
    let traced: Vec<usize> = (0..n).filter(|&q| !kept[q]).collect();
    let rows = 1usize << keep.len();
    let cols = 1usize << traced.len();

    // Scatter tables split the index into low and high halves.
    let half = n / 2;
    let table = |lo: usize, len: usize, qubits: &[usize]| -> Vec<usize> {
        (0..1usize << len)
            .map(|bits| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|&(_, &q)| q >= lo && q < lo + len && bits >> (q - lo) & 1 == 1)
                    .fold(0, |acc, (k, _)| acc | 1 << k)
            })
            .collect()
    };
    let (row_lo, row_hi) = (table(0, half, keep), table(half, n - half, keep));
    let (col_lo, col_hi) = (table(0, half, &traced), table(half, n - half, &traced));
    let lo_mask = (1usize << half) - 1;

    let mut m = CMat::zeros(rows, cols);
    for (i, &a) in state.amplitudes().iter().enumerate() {
        let (lo, hi) = (i & lo_mask, i >> half);
        m[(row_lo[lo] | row_hi[hi], col_lo[lo] | col_hi[hi])] = a;
    }
    Ok(DensityMatrix::from_parts(&m * m.adjoint()))
}

/// Reduced state of the A sublattice; qubit `k` of the result is A site `k`.
pub fn reduce_to_a(state: &PureState) -> Result<DensityMatrix> {
    reduce(state, &state.layout().a_qubits())
}

/// Partial trace of a register density matrix over the qubits in `traced_mask`.
pub fn partial_trace(rho: &DensityMatrix, traced_mask: usize) -> Result<DensityMatrix> {
    let n = rho.qubits();
    if traced_mask >> n != 0 || traced_mask == 0 || traced_mask == (1 << n) - 1 {
        return Err(invalid("traced qubits must form a nonempty proper subset"));
    }
    let kept: Vec<usize> = (0..n).filter(|q| traced_mask >> q & 1 == 0).collect();
    let traced: Vec<usize> = (0..n).filter(|q| traced_mask >> q & 1 == 1).collect();
    let spread = |bits: usize, qs: &[usize]| {
        qs.iter()
            .enumerate()
            .fold(0usize, |acc, (k, &q)| acc | (bits >> k & 1) << q)
    };
    let dk = 1usize << kept.len();
    let kept_idx: Vec<usize> = (0..dk).map(|b| spread(b, &kept)).collect();
    let traced_idx: Vec<usize> = (0..1usize << traced.len()).map(|b| spread(b, &traced)).collect();
    let m = rho.matrix();
    let out = CMat::from_fn(dk, dk, |r, c| {
        traced_idx
            .iter()
            .map(|&t| m[(kept_idx[r] | t, kept_idx[c] | t)])
            .sum()
    });
    Ok(DensityMatrix::from_parts(out))
}

/// Eigenvalues of `ρ`, ascending and unclipped.
pub fn entanglement_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    linalg::hermitian_eigenvalues(rho.matrix())
}

/// `−Σ p log₂ p` over the spectrum of `ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&entanglement_spectrum(rho)?)
}

/// Entropy of a probability spectrum, rejecting eigenvalues below `-1e-8`.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> Result<f64> {
    if let Some(&p) = spectrum.iter().find(|&&p| p < REJECT_NEGATIVE) {
        return Err(Error::Numerical(format!(
            "negative eigenvalue {p:e} in a density matrix"
        )));
    }
    Ok(spectrum
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Transposes the factor selected by `mask`: `ρ^T[i, j] = ρ[i', j']` with the
/// masked bits of `i` and `j` exchanged.
pub fn partial_transpose(rho: &DensityMatrix, mask: usize) -> Result<CMat> {
    let dim = rho.dim();
    if mask >= dim {
        return Err(invalid(format!("transpose mask {mask:#b} exceeds the register")));
    }
    let m = rho.matrix();
    let keep = !mask;
    Ok(CMat::from_fn(dim, dim, |i, j| {
        let ii = (i & keep) | (j & mask);
        let jj = (j & keep) | (i & mask);
        m[(ii, jj)]
    }))
}

/// Negativity spectrum, witness `λ` and log-negativity of `ρ` under `split`.
pub fn negativity_report(rho: &DensityMatrix, split: Partition) -> Result<SpectrumReport> {
    let mask = split.transpose_mask(rho.qubits())?;
    let pt = partial_transpose(rho, mask)?;
    let eigenvalues = linalg::hermitian_eigenvalues(&pt)?;
    let lambda_min = eigenvalues.first().copied().unwrap_or(0.0);
    let abs_sum: f64 = eigenvalues.iter().map(|l| l.abs()).sum();
    Ok(SpectrumReport {
        lambda_min,
        log_negativity: abs_sum.log2().max(0.0),
        eigenvalues,
        partition: split,
        time: None,
    })
}
