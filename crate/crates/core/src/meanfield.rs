//! Mean-field band structure of the ladder.
//!
//! The free spins are replaced by their magnetization `s_B`, which leaves a
//! quadratic fermion problem with Bloch matrix [`hmf_matrix`], spectrum
//! `{0, 0, ±ε_k}` and a self-consistency condition on `s_B`. Couplings are in
//! units of `J` wherever only `ḡ = g/J` enters.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMat};

/// Initial brackets scanned over `s_B ∈ (0, 1]`.
pub const ROOT_BRACKETS: usize = 10_000;
/// Root tolerance in `s_B`.
pub const ROOT_TOL: f64 = 1e-12;
/// Trapezoidal nodes for the self-consistency integral.
pub const QUADRATURE_NODES: usize = 1 << 12;
/// Smallest admissible `|ε_k² − 2g²|` on a quadrature node.
pub const SINGULARITY_GUARD: f64 = 1e-9;
/// Default resolution of the critical-point bisection in `ḡ`.
pub const CRITICAL_TOL: f64 = 1e-4;

const RADICAND_TOL: f64 = -1e-12;

/// `d_k = 2g s_B − 2J s_B² e^{2ik}`.
pub fn d_k(k: f64, j: f64, g: f64, s_b: f64) -> Complex64 {
    Complex64::new(2.0 * g * s_b, 0.0) - Complex64::from_polar(2.0 * j * s_b * s_b, 2.0 * k)
}

/// The 4×4 Bloch matrix in the basis `(a_k, a†_{−k}, b_k, b†_{−k})`.
///
/// The upper-left block is `[[Re d_k, Im d_k], [Im d_k, −Re d_k]]`; its
/// diagonal carries `2g s_B`, which makes the spectrum exactly `{0, 0, ±ε_k}`.
pub fn hmf_matrix(k: f64, j: f64, g: f64, s_b: f64) -> CMat {
    let d = d_k(k, j, g, s_b);
    bloch(d.re, d.im, g)
}

/// The Bloch matrix with `g s_B` on the diagonal, as it is sometimes written.
/// Its nonzero eigenvalues are `±√(a² + b² + 4g²)` rather than `±ε_k`; kept
/// for comparison only.
pub fn hmf_matrix_single_field(k: f64, j: f64, g: f64, s_b: f64) -> CMat {
    let a = -2.0 * j * s_b * s_b * (2.0 * k).cos() + g * s_b;
    let b = -2.0 * j * s_b * s_b * (2.0 * k).sin();
    bloch(a, b, g)
}

fn bloch(a: f64, b: f64, g: f64) -> CMat {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let rows = [
        [c(a, 0.0), c(b, 0.0), c(-g, 0.0), c(0.0, -g)],
        [c(b, 0.0), c(-a, 0.0), c(0.0, -g), c(g, 0.0)],
        [c(-g, 0.0), c(0.0, g), c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.0, g), c(g, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
    ];
    CMat::from_fn(4, 4, |i, j| rows[i][j])
}

/// `ε_k = 2√((J s_B − g)² s_B² + g² + 4J s_B³ g sin² k)`.
pub fn dispersion(k: f64, j: f64, g: f64, s_b: f64) -> Result<f64> {
    let sin = k.sin();
    let r = (j * s_b - g).powi(2) * s_b * s_b + g * g + 4.0 * j * s_b.powi(3) * g * sin * sin;
    if r < RADICAND_TOL {
        return Err(invalid(format!(
            "negative dispersion radicand {r:e} at k={k}, J={j}, g={g}, s_B={s_b}"
        )));
    }
    Ok(2.0 * r.max(0.0).sqrt())
}

/// Largest distance between the sorted eigenvalues of [`hmf_matrix`] and
/// `{−ε_k, 0, 0, ε_k}`.
pub fn eigen_check(k: f64, j: f64, g: f64, s_b: f64) -> Result<f64> {
    let ev = linalg::hermitian_eigenvalues(&hmf_matrix(k, j, g, s_b))?;
    let e = dispersion(k, j, g, s_b)?;
    Ok(ev
        .iter()
        .zip([-e, 0.0, 0.0, e])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// `4s⁸ − 8ḡ²s⁶ + 4ḡ²(1+ḡ²)s⁴ + ḡ⁴(4s² + 1)`.
fn radicand(s: f64, gbar: f64) -> f64 {
    let g2 = gbar * gbar;
    let s2 = s * s;
    let s4 = s2 * s2;
    4.0 * s4 * s4 - 8.0 * g2 * s4 * s2 + 4.0 * g2 * (1.0 + g2) * s4 + g2 * g2 * (4.0 * s2 + 1.0)
}

/// `ḡ²/√(…)`, the closed form of `∫ dk/2π · 2g²/(ε_k² − 2g²)` at `J = 1`.
pub fn closed_form_integral(s_b: f64, gbar: f64) -> f64 {
    if gbar == 0.0 {
        return 0.0;
    }
    gbar * gbar / radicand(s_b, gbar).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `s_B = 1 − ḡ²/√(…)`, positive roots.
    Plus,
    /// `s_B = −1 + ḡ²/√(…)`, negative roots.
    Minus,
    Zero,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
            Branch::Zero => "zero",
        })
    }
}

/// Residual of the algebraic self-consistency condition on `branch`.
pub fn algebraic_residual(s_b: f64, gbar: f64, branch: Branch) -> f64 {
    let i = closed_form_integral(s_b, gbar);
    match branch {
        Branch::Plus => 1.0 - i - s_b,
        Branch::Minus => -1.0 + i - s_b,
        Branch::Zero => s_b,
    }
}

/// `∫ dk/2π · 2g²/(ε_k² − 2g²)` at `J = 1`, `g = ḡ`, by the trapezoidal rule on
/// `nodes` equispaced points.
pub fn selfconsistent_integral(s_b: f64, gbar: f64, nodes: usize) -> Result<f64> {
    if nodes == 0 {
        return Err(invalid("quadrature needs at least one node"));
    }
    let g2 = 2.0 * gbar * gbar;
    let mut acc = 0.0;
    for i in 0..nodes {
        let k = -PI + 2.0 * PI * i as f64 / nodes as f64;
        let e = dispersion(k, 1.0, gbar, s_b)?;
        let den = e * e - g2;
        if den.abs() < SINGULARITY_GUARD {
            return Err(Error::Numerical(format!(
                "self-consistency integrand singular at k={k} (s_B={s_b}, ḡ={gbar})"
            )));
        }
        acc += g2 / den;
    }
    Ok(acc / nodes as f64)
}

/// `(∫ dk/2π · 2g²/(ε_k² − 2g²) − 1) − s_B`, the self-consistency condition
/// in integral form.
pub fn selfconsistent_residual_integral(s_b: f64, gbar: f64) -> Result<f64> {
    Ok(selfconsistent_integral(s_b, gbar, QUADRATURE_NODES)? - 1.0 - s_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub s_b: f64,
    pub branch: Branch,
    /// Algebraic residual at the root.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub brackets: usize,
    pub tol: f64,
    /// Number of `k` samples in `(−π, π]` stored with a solution.
    pub k_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            brackets: ROOT_BRACKETS,
            tol: ROOT_TOL,
            k_points: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    pub gbar: f64,
    /// All roots in `[−1, 1]`, ascending.
    pub roots: Vec<Root>,
    /// The stable root: the upper positive root while it exists, `0` beyond.
    pub selected: Root,
    pub k: Vec<f64>,
    /// `d_k` at the selected root (`J = 1`).
    pub d_k: Vec<Complex64>,
    /// `ε_k` at the selected root (`J = 1`).
    pub eps_k: Vec<f64>,
}

impl MeanFieldSolution {
    /// Smallest sampled `ε_k` at the selected root.
    pub fn gap(&self) -> f64 {
        self.eps_k.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.branch == Branch::Plus)
    }
}

/// `k` samples `−π + 2π(i+1)/n`, `i = 0..n`, covering `(−π, π]`.
pub fn k_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -PI + 2.0 * PI * (i + 1) as f64 / n as f64).collect()
}

/// Positive roots of the plus branch in `(0, 1]`.
fn positive_roots(gbar: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    if gbar == 0.0 {
        return Ok(vec![1.0]);
    }
    let f = |s: f64| algebraic_residual(s, gbar, Branch::Plus);
    let n = cfg.brackets;
    let mut roots = Vec::new();
    let mut prev_s = 1.0 / n as f64;
    let mut prev_f = f(prev_s);
    if prev_f == 0.0 {
        roots.push(prev_s);
    }
    for i in 2..=n {
        let s = i as f64 / n as f64;
        let fs = f(s);
        if fs == 0.0 {
            roots.push(s);
        } else if prev_f != 0.0 && (prev_f < 0.0) != (fs < 0.0) {
            roots.push(bisect(&f, prev_s, s, prev_f, cfg.tol)?);
        }
        prev_s = s;
        prev_f = fs;
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numerical("root bisection did not converge".into()))
}

/// All roots of the self-consistency condition at `ḡ` and the stable one.
pub fn solve_sb(gbar: f64) -> Result<MeanFieldSolution> {
    solve_sb_with(gbar, &SolverConfig::default())
}

pub fn solve_sb_with(gbar: f64, cfg: &SolverConfig) -> Result<MeanFieldSolution> {
    if !gbar.is_finite() || gbar < 0.0 {
        return Err(invalid(format!("ḡ must be finite and non-negative, got {gbar}")));
    }
    if cfg.brackets < 2 || cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(invalid("solver needs at least two brackets and a positive tolerance"));
    }
    let pos = positive_roots(gbar, cfg)?;
    let mut roots: Vec<Root> = Vec::with_capacity(2 * pos.len() + 1);
    for &s in pos.iter().rev() {
        roots.push(Root {
            s_b: -s,
            branch: Branch::Minus,
            residual: algebraic_residual(-s, gbar, Branch::Minus),
        });
    }
    let zero = Root {
        s_b: 0.0,
        branch: Branch::Zero,
        residual: 0.0,
    };
    roots.push(zero);
    for &s in &pos {
        roots.push(Root {
            s_b: s,
            branch: Branch::Plus,
            residual: algebraic_residual(s, gbar, Branch::Plus),
        });
    }
    let selected = *roots.last().expect("zero root is always present");
    let k = k_grid(cfg.k_points);
    let d = k.iter().map(|&k| d_k(k, 1.0, gbar, selected.s_b)).collect();
    let eps = k
        .iter()
        .map(|&k| dispersion(k, 1.0, gbar, selected.s_b))
        .collect::<Result<_>>()?;
    Ok(MeanFieldSolution {
        gbar,
        roots,
        selected,
        k,
        d_k: d,
        eps_k: eps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    /// Midpoint of the final bracket.
    pub gbar_c: f64,
    /// Largest `ḡ` known to carry a nonzero root.
    pub lower: f64,
    /// Smallest `ḡ` known to carry none.
    pub upper: f64,
    /// Upper-branch root at `lower`, where the branch ends.
    pub s_b_endpoint: f64,
}

/// Endpoint of the nonzero branch, by bisection on `ḡ` to `tol`.
pub fn critical_point(tol: f64) -> Result<CriticalPoint> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    let cfg = SolverConfig::default();
    let has_branch = |g: f64| positive_roots(g, &cfg).map(|r| !r.is_empty());
    let (mut lo, mut hi) = (0.0, 1.0);
    while has_branch(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::Numerical("nonzero branch does not terminate".into()));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if has_branch(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = positive_roots(lo, &cfg)?;
    Ok(CriticalPoint {
        gbar_c: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        s_b_endpoint: *s.last().expect("lower bracket carries a root"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovReport {
    /// `max ‖H v − μ v‖ / ‖v‖` over the four analytic eigenpairs.
    pub residual: f64,
    /// `max |‖v‖ − 1|`.
    pub norm_defect: f64,
    /// Largest off-diagonal modulus of the Gram matrix, excluding the pair
    /// of zero modes.
    pub orthogonality_defect: f64,
    /// `|⟨v₀|v₁⟩|` of the two zero modes as written, `2g²/(|d_k|² + 2g²)`;
    /// they span the kernel without being orthogonal.
    pub zero_mode_overlap: f64,
}

/// The four analytic Bogoliubov vectors with their eigenvalues
/// `(0, 0, +ε_k, −ε_k)`.
pub fn bogoliubov_vectors(k: f64, j: f64, g: f64, s_b: f64) -> Result<[([Complex64; 4], f64); 4]> {
    let e = dispersion(k, j, g, s_b)?;
    let d = d_k(k, j, g, s_b);
    if e <= 1e-12 || g.abs() <= 1e-12 || d.norm() <= 1e-12 {
        return Err(invalid(format!(
            "degenerate Bogoliubov problem (ε_k={e:e}, g={g:e}, |d_k|={:e})",
            d.norm()
        )));
    }
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let gc = Complex64::new(g, 0.0);
    let dc = d.conj();
    let nz = d.norm() / (d.norm_sqr() + 2.0 * g * g).sqrt();
    let ne = g.abs() / e;
    let scale = |v: [Complex64; 4], s: f64| v.map(|x| x * s);
    Ok([
        (scale([i * gc / dc, gc / dc, zero, one], nz), 0.0),
        (scale([gc / dc, -i * gc / dc, one, zero], nz), 0.0),
        (scale([(e + d) / (2.0 * i * gc), (e - d) / (2.0 * gc), i, one], ne), e),
        (scale([-(e - d) / (2.0 * i * gc), -(e + d) / (2.0 * gc), i, one], ne), -e),
    ])
}

pub fn verify_bogoliubov(k: f64, j: f64, g: f64, s_b: f64) -> Result<BogoliubovReport> {
    let h = hmf_matrix(k, j, g, s_b);
    let vecs = bogoliubov_vectors(k, j, g, s_b)?;
    let mut report = BogoliubovReport {
        residual: 0.0,
        norm_defect: 0.0,
        orthogonality_defect: 0.0,
        zero_mode_overlap: 0.0,
    };
    for (v, mu) in &vecs {
        let hv = linalg::mat_vec(&h, v);
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let res = hv
            .iter()
            .zip(v)
            .map(|(a, b)| (a - b * mu).norm_sqr())
            .sum::<f64>()
            .sqrt();
        report.residual = report.residual.max(res / norm);
        report.norm_defect = report.norm_defect.max((norm - 1.0).abs());
    }
    for a in 0..4 {
        for b in 0..a {
            let ip: Complex64 = vecs[a].0.iter().zip(&vecs[b].0).map(|(x, y)| x.conj() * y).sum();
            if (a, b) == (1, 0) {
                report.zero_mode_overlap = ip.norm();
            } else {
                report.orthogonality_defect = report.orthogonality_defect.max(ip.norm());
            }
        }
    }
    Ok(report)
}

/// One row group of a band scan: a root at `ḡ` and `ε_k` on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandScan {
    pub gbar: f64,
    pub root: Root,
    /// Whether this root is the selected (stable) one.
    pub selected: bool,
    pub k: Vec<f64>,
    pub eps_k: Vec<f64>,
}

/// Solves every `ḡ` and tabulates `ε_k` (`J = 1`) for each root.
pub fn band_scan(gbars: &[f64], k_points: usize) -> Result<Vec<BandScan>> {
    let k = k_grid(k_points);
    let mut out = Vec::new();
    for &gbar in gbars {
        let sol = solve_sb(gbar)?;
        for root in &sol.roots {
            let eps = k
                .iter()
                .map(|&k| dispersion(k, 1.0, gbar, root.s_b))
                .collect::<Result<_>>()?;
            out.push(BandScan {
                gbar,
                root: *root,
                selected: root == &sol.selected,
                k: k.clone(),
                eps_k: eps,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_limit_spectrum() {
        let ev = linalg::hermitian_eigenvalues(&hmf_matrix(0.0, 1.3, 0.0, 1.0)).unwrap();
        let expect = [-2.6, 0.0, 0.0, 2.6];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        for k in [-2.0, 0.3, 1.1] {
            assert!((dispersion(k, 1.0, 0.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn flat_band_without_magnetization() {
        for k in [-3.0, -0.4, 0.0, 2.2] {
            assert_eq!(dispersion(k, 0.7, 0.35, 0.0).unwrap(), 0.7);
            assert!(eigen_check(k, 0.7, 0.35, 0.0).unwrap() < 1e-12);
        }
    }

    #[test]
    fn single_field_matrix_misses_dispersion() {
        let (k, j, g, s) = (0.7, 1.0, 0.4, 0.8);
        let ev = linalg::hermitian_eigenvalues(&hmf_matrix_single_field(k, j, g, s)).unwrap();
        let e = dispersion(k, j, g, s).unwrap();
        assert!((ev[3] - e).abs() > 1e-3);
    }

    #[test]
    fn zero_coupling_roots() {
        let sol = solve_sb(0.0).unwrap();
        let values: Vec<f64> = sol.roots.iter().map(|r| r.s_b).collect();
        assert_eq!(values, vec![-1.0, 0.0, 1.0]);
        assert_eq!(sol.selected.s_b, 1.0);
    }

    #[test]
    fn roots_satisfy_both_forms() {
        for gbar in [0.1, 0.3, 0.42] {
            let sol = solve_sb(gbar).unwrap();
            assert!(sol.positive_roots().count() >= 1);
            for r in &sol.roots {
                assert!(r.residual.abs() < 1e-10, "{r:?}");
                if r.s_b >= 0.0 {
                    let i = selfconsistent_integral(r.s_b, gbar, QUADRATURE_NODES).unwrap();
                    assert!((i - closed_form_integral(r.s_b, gbar)).abs() < 1e-8);
                }
            }
            let plus: Vec<f64> = sol.positive_roots().map(|r| r.s_b).collect();
            let minus: Vec<f64> = sol.roots.iter().filter(|r| r.branch == Branch::Minus).map(|r| -r.s_b).rev().collect();
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn large_coupling_selects_zero() {
        let sol = solve_sb(5.0).unwrap();
        assert_eq!(sol.selected.branch, Branch::Zero);
        assert!(sol.eps_k.iter().all(|&e| (e - 10.0).abs() < 1e-12));
    }

    #[test]
    fn integral_limits() {
        assert_eq!(selfconsistent_residual_integral(1.0, 0.0).unwrap(), -2.0);
        let a = selfconsistent_integral(0.6, 0.8, 1 << 12).unwrap();
        let b = selfconsistent_integral(0.6, 0.8, 1 << 13).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn bogoliubov_vectors_diagonalize() {
        let r = verify_bogoliubov(0.9, 1.0, 0.3, 0.7).unwrap();
        assert!(r.residual < 1e-12);
        assert!(r.norm_defect < 1e-12);
        assert!(r.orthogonality_defect < 1e-12);
        let d = d_k(0.9, 1.0, 0.3, 0.7);
        let expect = 2.0 * 0.09 / (d.norm_sqr() + 2.0 * 0.09);
        assert!((r.zero_mode_overlap - expect).abs() < 1e-12);
        assert!(verify_bogoliubov(0.9, 1.0, 0.0, 0.7).is_err());
    }
}
