//! The Markov channel against the exact ladder: Kraus operators as partial
//! matrix elements of the dense step unitary, and one channel step as the full
//! unitary followed by the trace over B.

use ladder_qca::automaton::{dense, AutomatonParams};
use ladder_qca::channel::{self, ChannelState, Lindbladian, SymmetryKind};
use ladder_qca::entanglement::{self, DensityMatrix, Partition};
use ladder_qca::linalg::{self, CMat};
use ladder_qca::{Complex64, LatticeLayout, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(cells: usize, j: f64, g: f64) -> AutomatonParams {
    AutomatonParams::new(LatticeLayout::periodic(cells).unwrap(), j, g).unwrap()
}

fn cluster_register(cells: usize) -> DensityMatrix {
    entanglement::reduce_to_a(&PureState::cluster_plus(LatticeLayout::periodic(cells).unwrap())).unwrap()
}

/// Random mixed register state: a reduced Haar state of the ladder.
fn random_register(cells: usize, seed: u64) -> DensityMatrix {
    let s = PureState::haar(LatticeLayout::periodic(cells).unwrap(), &mut ChaCha8Rng::seed_from_u64(seed));
    entanglement::reduce_to_a(&s).unwrap()
}

/// `⟨a', n_B| U |a, +^L⟩` with B site `x` in `|−⟩` when bit `x` of `n` is set.
fn kraus_from_unitary(p: &AutomatonParams, n: usize) -> CMat {
    let layout = &p.layout;
    let cells = layout.cells();
    let u = dense::step_unitary(p).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // Amplitude ⟨b|±⟩ of a B bit.
    let pm = |minus: bool, b: usize| if minus && b == 1 { -h } else { h };
    let index = |a: usize, b: usize| {
        (0..cells).fold(0usize, |acc, x| {
            acc | (a >> x & 1) << layout.a_qubit(x) | (b >> x & 1) << layout.b_qubit(x)
        })
    };
    let dim_a = 1usize << cells;
    CMat::from_fn(dim_a, dim_a, |ap, a| {
        let mut acc = Complex64::new(0.0, 0.0);
        for bp in 0..dim_a {
            let bra: f64 = (0..cells).map(|x| pm(n >> x & 1 == 1, bp >> x & 1)).product();
            for b in 0..dim_a {
                let ket: f64 = (0..cells).map(|_| h).product();
                acc += u[(index(ap, bp), index(a, b))] * (bra * ket);
            }
        }
        acc
    })
}

#[test]
fn swap_expectations_match_dense_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let g: f64 = rng.random_range(-3.0..3.0);
        let p = params(1, 0.0, g);
        let (plus, minus) = channel::swap_expectations(g);
        // With J = 0 the one-cell step is the exchange gate alone.
        assert!(linalg::max_abs_diff(&plus, &kraus_from_unitary(&p, 0)) < 1e-12);
        assert!(linalg::max_abs_diff(&minus, &kraus_from_unitary(&p, 1)) < 1e-12);
    }
}

#[test]
fn kraus_operators_are_partial_matrix_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for cells in [1, 2, 3] {
        let (j, g) = (rng.random_range(-1.5..1.5), rng.random_range(-3.0..3.0));
        let p = params(cells, j, g);
        let k = channel::build_kraus(&p).unwrap();
        for n in 0..1usize << cells {
            let d = linalg::max_abs_diff(&k.ops[n], &kraus_from_unitary(&p, n));
            assert!(d < 1e-12, "L={cells} n={n}: {d:e}");
        }
    }
}

#[test]
fn open_boundary_kraus_matches_too() {
    let p = AutomatonParams::new(LatticeLayout::open(3).unwrap(), 0.4, 1.1).unwrap();
    let k = channel::build_kraus(&p).unwrap();
    assert!(k.completeness_defect() < 1e-12);
    for n in 0..8 {
        assert!(linalg::max_abs_diff(&k.ops[n], &kraus_from_unitary(&p, n)) < 1e-12);
    }
}

#[test]
fn markov_step_equals_full_unitary_then_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..5 {
        let p = params(4, rng.random_range(-1.5..1.5), rng.random_range(-3.0..3.0));
        let k = channel::build_kraus(&p).unwrap();
        for rho in [cluster_register(4), random_register(4, trial)] {
            let step = channel::markov_step(&ChannelState::new(rho.clone()), &k).unwrap();
            let oracle = channel::full_step_oracle(&rho, &p).unwrap();
            assert!(linalg::max_abs_diff(step.rho.matrix(), oracle.matrix()) < 1e-12);
        }
    }
}

#[test]
fn repeated_steps_stay_physical() {
    let k = channel::build_kraus(&params(4, 0.3, 0.6)).unwrap();
    let mut s = ChannelState::new(cluster_register(4));
    for _ in 0..100 {
        let prev = s.rho.trace().re;
        s = channel::markov_step(&s, &k).unwrap();
        assert!((s.rho.trace().re - prev).abs() < 1e-10);
        let ev = entanglement::entanglement_spectrum(&s.rho).unwrap();
        assert!(ev[0] > -1e-9);
        assert!(linalg::hermiticity_defect(s.rho.matrix()) < 1e-12);
    }
    assert_eq!(s.step, 100);
    assert!((s.rho.trace().re - 1.0).abs() < 1e-9);
}

#[test]
fn zero_exchange_is_unitary() {
    let k = channel::build_kraus(&params(4, 0.3, 0.0)).unwrap();
    let rho = random_register(4, 5);
    let before = entanglement::entanglement_spectrum(&rho).unwrap();
    let mut s = ChannelState::new(rho);
    for _ in 0..10 {
        s = channel::markov_step(&s, &k).unwrap();
    }
    let after = entanglement::entanglement_spectrum(&s.rho).unwrap();
    for (a, b) in before.iter().zip(&after) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn parity_sign_rule_for_every_operator() {
    let k = channel::build_kraus(&params(4, 0.35, 0.9)).unwrap();
    for n in 0..16usize {
        let expect = if n.count_ones() % 2 == 0 {
            SymmetryKind::Strong
        } else {
            SymmetryKind::Weak
        };
        assert_eq!(channel::classify_symmetry(&k, n).unwrap(), expect);
    }
}

#[test]
fn coherent_step_is_the_normalized_all_flip_term() {
    let p = params(4, 0.3, 0.8);
    let k = channel::build_kraus(&p).unwrap();
    let rho = random_register(4, 6);
    let out = channel::coherent_step(&ChannelState::new(rho.clone()), &p).unwrap();
    let m = &k.ops[15];
    let raw = m * rho.matrix() * m.adjoint();
    let weight = linalg::trace(&raw).re;
    assert!((weight - out.weight).abs() < 1e-14);
    assert!((weight - (0.4f64).sin().powi(8)).abs() < 1e-14);
    let normalized = linalg::scaled(&raw, Complex64::new(1.0 / weight, 0.0));
    assert!(linalg::max_abs_diff(&normalized, out.state.rho.matrix()) < 1e-12);
    // The prefactor carries the field with the opposite sign.
    let flips = linalg::tensor(&vec![linalg::pauli_y(); 4]);
    let v = &channel::prefactor(&p.layout, p.j, -p.g) * &flips;
    let m_scaled = linalg::scaled(m, Complex64::new(1.0 / (0.4f64).sin().powi(4), 0.0));
    assert!(linalg::max_abs_diff(&v, &m_scaled) < 1e-12);
}

#[test]
fn coherent_step_keeps_the_parity_sector_at_even_size() {
    let p = params(4, 0.3, 0.8);
    let parity = linalg::tensor(&vec![linalg::pauli_x(); 4]);
    let rho = random_register(4, 7);
    let before = linalg::trace(&(&parity * rho.matrix())).re;
    let out = channel::coherent_step(&ChannelState::new(rho), &p).unwrap();
    let after = linalg::trace(&(&parity * out.state.rho.matrix())).re;
    assert!((before - after).abs() < 1e-12);
}

#[test]
fn lindblad_without_coupling_keeps_purity() {
    let layout = LatticeLayout::periodic(3).unwrap();
    let rho = cluster_register(3);
    let run = channel::lindblad_evolve(&rho, &layout, 0.0, 0.01, 500, 50).unwrap();
    for s in &run {
        assert!((s.rho.purity() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn lindblad_dephasing_rate() {
    // One site, dissipator only: ⟨X⟩ and ⟨Z⟩ decay as exp(−ḡ² t / 2), ⟨Y⟩ stays.
    let layout = LatticeLayout::periodic(1).unwrap();
    let gbar: f64 = 1.4;
    let gen = Lindbladian::new(&layout, gbar).unwrap().dissipator_only();
    let (x, y, z) = (0.5, 0.3, 0.6);
    let half = Complex64::new(0.5, 0.0);
    let m = CMat::from_fn(2, 2, |r, c| match (r, c) {
        (0, 0) => half * (1.0 + z),
        (1, 1) => half * (1.0 - z),
        (0, 1) => half * Complex64::new(x, -y),
        _ => half * Complex64::new(x, y),
    });
    let rho0 = DensityMatrix::new(m).unwrap();
    let run = channel::lindblad_evolve_with(&gen, &rho0, 0.005, 400, 100).unwrap();
    let mut prev = f64::INFINITY;
    for s in &run {
        let t = s.step as f64 * 0.005;
        let decay = (-gbar * gbar * t / 2.0).exp();
        let m = s.rho.matrix();
        let ex = 2.0 * m[(0, 1)].re;
        let ey = -2.0 * m[(0, 1)].im;
        let ez = (m[(0, 0)] - m[(1, 1)]).re;
        assert!((ex - x * decay).abs() < 1e-9);
        assert!((ez - z * decay).abs() < 1e-9);
        assert!((ey - y).abs() < 1e-12);
        assert!(m[(0, 1)].norm() <= prev);
        prev = m[(0, 1)].norm();
    }
}

#[test]
fn lindblad_relaxes_entanglement() {
    let layout = LatticeLayout::periodic(4).unwrap();
    let rho = cluster_register(4);
    let run = channel::lindblad_evolve(&rho, &layout, 1.0, 0.01, 3000, 3000).unwrap();
    let last = run.last().unwrap();
    let r = entanglement::negativity_report(&last.rho, Partition::cluster_half(4)).unwrap();
    // Heading for the maximally mixed fixed point: PPT, spectrum near 1/16.
    assert!(r.lambda_min > -1e-9 && r.log_negativity < 1e-9, "λ = {}", r.lambda_min);
    assert!((r.lambda_min - 1.0 / 16.0).abs() < 5e-3);
}

#[test]
fn lindblad_guards() {
    let layout = LatticeLayout::periodic(2).unwrap();
    let rho = DensityMatrix::maximally_mixed(2);
    assert!(channel::lindblad_evolve(&rho, &layout, 1.0, 0.02, 10, 1).is_err());
    assert!(channel::lindblad_evolve(&rho, &layout, 1.0, 0.01, 10, 0).is_err());
    assert!(Lindbladian::new(&LatticeLayout::periodic(9).unwrap(), 1.0).is_err());
}
