//! Dense complex matrix helpers on top of `faer`.
//!
//! Used for reduced density matrices, the A-register channel operators and the
//! small-size dense oracles (full unitaries, Hamiltonians, exponentials).

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::PauliString;

pub type CMat = Mat<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMat {
    CMat::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO })
}

pub fn zeros(dim: usize) -> CMat {
    CMat::zeros(dim, dim)
}

pub fn pauli_x() -> CMat {
    CMat::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO })
}

pub fn pauli_y() -> CMat {
    CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    })
}

pub fn pauli_z() -> CMat {
    CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => ONE,
        (1, 1) => -ONE,
        _ => ZERO,
    })
}

/// Kronecker product `a ⊗ b`; the factor `b` occupies the low bits.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = (b.nrows(), b.ncols());
    CMat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Tensor product of per-qubit 2×2 operators; `ops[q]` acts on qubit `q`
/// (qubit 0 is the least-significant bit).
pub fn tensor(ops: &[CMat]) -> CMat {
    ops.iter()
        .rev()
        .fold(identity(1), |acc, op| kron(&acc, op))
}

/// Dense matrix of a Pauli string on `qubits` qubits.
pub fn pauli_dense(qubits: usize, pauli: &PauliString) -> CMat {
    let act = pauli.action();
    let dim = 1usize << qubits;
    let mut m = zeros(dim);
    for j in 0..dim {
        m[(j ^ act.flip, j)] = act.phase(j);
    }
    m
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    let mut ev = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver failed: {e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let vals: Vec<f64> = (0..m.nrows()).map(|i| s[i].re).collect();
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let u = evd.U();
    let vecs = CMat::from_fn(m.nrows(), m.ncols(), |i, j| u[(i, order[j])]);
    Ok((order.iter().map(|&k| vals[k]).collect(), vecs))
}

/// `exp(iθH)` for Hermitian `H`, via its eigendecomposition.
pub fn expm_i_hermitian(h: &CMat, theta: f64) -> Result<CMat> {
    let (vals, v) = hermitian_eigen(h)?;
    let dim = h.nrows();
    let phases: Vec<Complex64> = vals.iter().map(|&e| Complex64::from_polar(1.0, theta * e)).collect();
    let vd = CMat::from_fn(dim, dim, |i, j| v[(i, j)] * phases[j]);
    Ok(&vd * v.adjoint())
}

/// `s · m`.
pub fn scaled(m: &CMat, s: Complex64) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

pub fn mat_vec(m: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut d: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            d = d.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    d
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut d: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..=j {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d
}

pub fn trace(m: &CMat) -> Complex64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// Replaces `m` with `(m + m†)/2`.
pub fn hermitize(m: &mut CMat) {
    let n = m.nrows();
    for j in 0..n {
        for i in 0..j {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        m[(j, j)] = Complex64::new(m[(j, j)].re, 0.0);
    }
}

/// Operator 2-norm bound used in tests: Frobenius norm.
pub fn frobenius(m: &CMat) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}
