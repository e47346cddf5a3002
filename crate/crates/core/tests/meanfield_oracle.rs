//! Mean-field band structure and self-consistency against trace identities,
//! an independent Simpson quadrature and brute-force root scans.

use std::f64::consts::PI;

use ladder_qca::linalg::{self, CMat};
use ladder_qca::meanfield::{self, Branch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Composite Simpson rule for `∫ dk/2π · 2g²/(ε² − 2g²)` over `[−π, π]`.
fn simpson_integral(s: f64, gbar: f64, n: usize) -> f64 {
    let f = |k: f64| {
        let e = meanfield::dispersion(k, 1.0, gbar, s).unwrap();
        2.0 * gbar * gbar / (e * e - 2.0 * gbar * gbar)
    };
    let h = 2.0 * PI / n as f64;
    let mut acc = f(-PI) + f(PI);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(-PI + i as f64 * h);
    }
    acc * h / 3.0 / (2.0 * PI)
}

#[test]
fn spectrum_on_a_dense_grid() {
    // {0, 0, ±ε} means Tr H = 0, Tr H² = 2ε², Tr H³ = 0 and det H = 0; the
    // eigensolver comparison covers the rest.
    let mut worst: f64 = 0.0;
    for gi in 0..50 {
        let gbar = 0.02 + 2.0 * gi as f64 / 49.0;
        let s = meanfield::solve_sb(gbar).unwrap().selected.s_b;
        for ki in 0..100 {
            let k = -PI + 2.0 * PI * (ki as f64 + 0.5) / 100.0;
            let h = meanfield::hmf_matrix(k, 1.0, gbar, s);
            let e = meanfield::dispersion(k, 1.0, gbar, s).unwrap();
            let h2 = &h * &h;
            let h3 = &h2 * &h;
            assert!(linalg::trace(&h).norm() < 1e-12);
            assert!((linalg::trace(&h2).re - 2.0 * e * e).abs() < 1e-10 * (1.0 + e * e));
            assert!(linalg::trace(&h3).norm() < 1e-10 * (1.0 + e * e * e));
            worst = worst.max(meanfield::eigen_check(k, 1.0, gbar, s).unwrap());
        }
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn single_field_matrix_misses_the_dispersion() {
    let (k, j, g, s) = (0.7, 1.0, 0.6, 0.8);
    let ev = linalg::hermitian_eigenvalues(&meanfield::hmf_matrix_single_field(k, j, g, s)).unwrap();
    let e = meanfield::dispersion(k, j, g, s).unwrap();
    assert!((ev[3] - e).abs() > 1e-3);
}

#[test]
fn bogoliubov_vectors_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let k = rng.random_range(-PI..PI);
        let j = rng.random_range(0.1..2.0);
        let g = rng.random_range(0.05..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let s = rng.random_range(0.05..1.0);
        let r = meanfield::verify_bogoliubov(k, j, g, s).unwrap();
        assert!(r.residual < 1e-9);
        assert!(r.norm_defect < 1e-12);
        assert!(r.orthogonality_defect < 1e-12);
        let d = meanfield::d_k(k, j, g, s);
        let overlap = 2.0 * g * g / (d.norm_sqr() + 2.0 * g * g);
        assert!((r.zero_mode_overlap - overlap).abs() < 1e-12);
        // The zero modes still span the kernel: the projector onto their span
        // annihilates the ±ε modes.
        let vecs = meanfield::bogoliubov_vectors(k, j, g, s).unwrap();
        let h = meanfield::hmf_matrix(k, j, g, s);
        for (v, _) in &vecs[..2] {
            let hv = linalg::mat_vec(&h, v);
            assert!(hv.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-12);
        }
    }
}

#[test]
fn degenerate_bogoliubov_inputs_are_rejected() {
    assert!(meanfield::verify_bogoliubov(0.3, 1.0, 0.0, 0.5).is_err());
    // d_k = 0 when 2g s = 2J s² and k = 0.
    assert!(meanfield::verify_bogoliubov(0.0, 1.0, 0.5, 0.5).is_err());
}

#[test]
fn closed_form_matches_quadrature() {
    for &(s, gbar) in &[(0.9, 0.1), (0.75, 0.4), (0.5, 0.3), (0.2, 1.5), (0.0, 0.8), (-0.6, 0.35)] {
        let simpson = simpson_integral(s, gbar, 2000);
        let closed = meanfield::closed_form_integral(s, gbar);
        assert!((simpson - closed).abs() < 1e-8, "s={s} ḡ={gbar}: {simpson} vs {closed}");
        let trap = meanfield::selfconsistent_integral(s, gbar, meanfield::QUADRATURE_NODES).unwrap();
        assert!((trap - closed).abs() < 1e-8);
    }
}

#[test]
fn branch_residuals_are_antisymmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let s = rng.random_range(-1.0..1.0);
        let gbar = rng.random_range(0.0..3.0);
        let plus = meanfield::algebraic_residual(s, gbar, Branch::Plus);
        let minus = meanfield::algebraic_residual(-s, gbar, Branch::Minus);
        assert!((plus + minus).abs() < 1e-14);
        // The integral itself is even in s and in g.
        let i = meanfield::closed_form_integral(s, gbar);
        assert!((i - meanfield::closed_form_integral(-s, gbar)).abs() < 1e-14);
        // The integral form equals the minus branch.
        let integral_form = meanfield::selfconsistent_residual_integral(s, gbar);
        if let Ok(r) = integral_form {
            assert!((r - meanfield::algebraic_residual(s, gbar, Branch::Minus)).abs() < 1e-8);
        }
    }
}

#[test]
fn roots_match_a_brute_force_scan() {
    for gbar in [0.1, 0.25, 0.4, 0.42, 0.5, 1.0] {
        let sol = meanfield::solve_sb(gbar).unwrap();
        // Sign changes of the plus residual on a fine independent grid.
        let f = |s: f64| 1.0 - meanfield::closed_form_integral(s, gbar) - s;
        let n = 200_000;
        let mut expected = Vec::new();
        for i in 1..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            if (f(a) < 0.0) != (f(b) < 0.0) {
                expected.push(0.5 * (a + b));
            }
        }
        let found: Vec<f64> = sol.positive_roots().map(|r| r.s_b).collect();
        assert_eq!(found.len(), expected.len(), "ḡ={gbar}");
        for (a, b) in found.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-5);
        }
        for r in &sol.roots {
            assert!(r.residual.abs() < 1e-10);
        }
        assert!(sol.roots.windows(2).all(|w| w[0].s_b < w[1].s_b));
        assert_eq!(sol.selected, *sol.roots.last().unwrap());
    }
}

#[test]
fn zero_coupling_and_flat_band() {
    let sol = meanfield::solve_sb(0.0).unwrap();
    assert_eq!(sol.selected.s_b, 1.0);
    let ss: Vec<f64> = sol.roots.iter().map(|r| r.s_b).collect();
    assert_eq!(ss, vec![-1.0, 0.0, 1.0]);
    for gbar in [0.6, 1.0, 2.5] {
        let sol = meanfield::solve_sb(gbar).unwrap();
        assert_eq!(sol.selected.branch, Branch::Zero);
        for e in &sol.eps_k {
            assert!((e - 2.0 * gbar).abs() < 1e-12);
        }
    }
}

#[test]
fn critical_point_and_endpoint() {
    let c = meanfield::critical_point(meanfield::CRITICAL_TOL).unwrap();
    assert!((c.gbar_c - 0.425).abs() < 0.005, "{c:?}");
    assert!((c.s_b_endpoint - 0.73).abs() < 0.01, "{c:?}");
    assert!(c.upper - c.lower <= meanfield::CRITICAL_TOL);
    assert!(meanfield::solve_sb(c.lower).unwrap().selected.s_b > 0.5);
    assert_eq!(meanfield::solve_sb(c.upper).unwrap().selected.branch, Branch::Zero);
}

#[test]
fn selected_order_parameter_decreases() {
    let c = meanfield::critical_point(meanfield::CRITICAL_TOL).unwrap();
    let mut prev = 1.0;
    for i in 1..40 {
        let gbar = c.lower * i as f64 / 40.0;
        let s = meanfield::solve_sb(gbar).unwrap().selected.s_b;
        assert!(s < prev && s > 0.7);
        prev = s;
    }
}

#[test]
fn smallest_gap_sits_at_the_transition() {
    let c = meanfield::critical_point(meanfield::CRITICAL_TOL).unwrap();
    let gbars: Vec<f64> = (1..=300).map(|i| 0.01 * i as f64).collect();
    let scans = meanfield::band_scan(&gbars, 256).unwrap();
    let (gap, at) = scans
        .iter()
        .filter(|b| b.selected)
        .map(|b| (b.eps_k.iter().copied().fold(f64::INFINITY, f64::min), b.gbar))
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    // Beyond the endpoint the gap is 2ḡ, so the minimum over the selected
    // branch is 2ḡ_c up to the scan spacing.
    assert!((gap - 2.0 * c.gbar_c).abs() / (2.0 * c.gbar_c) < 0.02, "gap {gap} at {at}");
    assert!((at - c.gbar_c).abs() < 0.02);
}

#[test]
fn bloch_matrix_is_hermitian() {
    let h: CMat = meanfield::hmf_matrix(1.1, 0.7, 0.4, 0.6);
    assert!(linalg::hermiticity_defect(&h) < 1e-15);
}
