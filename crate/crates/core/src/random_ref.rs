//! Random reference states: Haar vectors, mixtures `R = (1/m) Σ_n |r_n⟩⟨r_n|`,
//! and the effective environment size `m` at which `λ(R)` matches a measured
//! witness.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::entanglement::{self, DensityMatrix, Partition, SpectrumReport};
use crate::error::{invalid, Error, Result};
use crate::linalg::CMat;

/// Largest register for Haar states and mixtures.
pub const MAX_QUBITS: usize = 14;
/// Minimum number of trials per mixture size.
pub const MIN_TRIALS: usize = 8;
/// `log₂` of the largest mixture size on a curve.
pub const CAP_LOG2: u32 = 14;
/// Witness values at or above this are treated as PPT (`m ≥ cap`).
pub const PPT_THRESHOLD: f64 = -1e-6;

fn check_qubits(qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::ResourceGuard(format!(
            "random references are limited to 1..={MAX_QUBITS} qubits, got {qubits}"
        )));
    }
    Ok(())
}

fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

/// Haar-random normalized state on `qubits` qubits.
pub fn haar_state(qubits: usize, seed: u64) -> Result<Vec<Complex64>> {
    check_qubits(qubits)?;
    Ok(gaussian_vector(1 << qubits, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Generator for trial `trial` of mixture size `m` under a master seed.
fn trial_rng(seed: u64, m: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(trial as u64);
    rng
}

#[derive(Debug, Clone)]
pub struct RandomMixture {
    pub qubits: usize,
    pub m: usize,
    pub rho: DensityMatrix,
}

impl RandomMixture {
    pub fn sample<R: Rng + ?Sized>(qubits: usize, m: usize, rng: &mut R) -> Result<Self> {
        check_qubits(qubits)?;
        if m == 0 {
            return Err(invalid("a mixture needs at least one component"));
        }
        let dim = 1usize << qubits;
        let mut g = CMat::zeros(dim, m);
        for col in 0..m {
            for (row, a) in gaussian_vector(dim, rng).into_iter().enumerate() {
                g[(row, col)] = a;
            }
        }
        let mut rho = crate::linalg::scaled(&(&g * g.adjoint()), Complex64::new(1.0 / m as f64, 0.0));
        crate::linalg::hermitize(&mut rho);
        Ok(Self {
            qubits,
            m,
            rho: DensityMatrix::from_parts(rho),
        })
    }

    pub fn seeded(qubits: usize, m: usize, seed: u64) -> Result<Self> {
        Self::sample(qubits, m, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Negativity spectrum of `R` under the cluster split with block `block`.
    pub fn negativity_report(&self, block: usize) -> Result<SpectrumReport> {
        entanglement::negativity_report(&self.rho, Partition::ClusterSplit { block })
    }
}

/// Mean and standard error of `λ` over independent mixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub m: usize,
    pub mean: f64,
    pub stderr: f64,
    pub samples: Vec<f64>,
}

pub fn lambda_of_mixture(qubits: usize, m: usize, block: usize, trials: usize, seed: u64) -> Result<LambdaEstimate> {
    if trials < MIN_TRIALS {
        return Err(invalid(format!("at least {MIN_TRIALS} trials are required, got {trials}")));
    }
    let samples = (0..trials)
        .map(|t| {
            let mix = RandomMixture::sample(qubits, m, &mut trial_rng(seed, m, t))?;
            Ok(mix.negativity_report(block)?.lambda_min)
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(LambdaEstimate {
        m,
        mean,
        stderr: (var / n).sqrt(),
        samples,
    })
}

/// How an estimate relates to the ends of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Interpolated,
    /// Target at or below `λ(m=1)`: reported as `m ≤ 1`.
    AtMostOne,
    /// Target in the PPT regime or above the last point: reported as `m ≥ cap`.
    AtLeastCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MEstimate {
    pub m: f64,
    pub m_low: f64,
    pub m_high: f64,
    pub bound: Bound,
}

/// Mean `λ` at `m = 2^0, 2^1, …, 2^cap`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureCurve {
    pub qubits: usize,
    pub block: usize,
    pub trials: usize,
    pub seed: u64,
    pub points: Vec<LambdaEstimate>,
}

impl MixtureCurve {
    pub fn build(qubits: usize, block: usize, trials: usize, seed: u64) -> Result<Self> {
        Self::build_to(qubits, block, trials, seed, CAP_LOG2)
    }

    pub fn build_to(qubits: usize, block: usize, trials: usize, seed: u64, cap_log2: u32) -> Result<Self> {
        let points = (0..=cap_log2)
            .map(|e| lambda_of_mixture(qubits, 1 << e, block, trials, seed))
            .collect::<Result<_>>()?;
        Ok(Self {
            qubits,
            block,
            trials,
            seed,
            points,
        })
    }

    pub fn cap(&self) -> f64 {
        self.points.last().map_or(1.0, |p| p.m as f64)
    }

    /// Inverts the curve, rejecting targets below the achievable range
    /// `[λ(1) − 2σ, 0]`.
    pub fn estimate(&self, target: f64) -> Result<MEstimate> {
        let first = self.points.first().ok_or_else(|| invalid("empty curve"))?;
        if target < first.mean - 2.0 * first.stderr || target > 0.0 {
            return Err(invalid(format!(
                "target λ = {target} outside the achievable range [{}, 0]",
                first.mean - 2.0 * first.stderr
            )));
        }
        Ok(self.estimate_clamped(target))
    }

    /// Inverts the curve, clamping out-of-range targets to the end points.
    pub fn estimate_clamped(&self, target: f64) -> MEstimate {
        let cap = self.cap();
        let at_least_cap = MEstimate {
            m: cap,
            m_low: cap,
            m_high: f64::INFINITY,
            bound: Bound::AtLeastCap,
        };
        if target >= PPT_THRESHOLD {
            return at_least_cap;
        }
        if self.points.is_empty() || target <= self.points[0].mean {
            return MEstimate {
                m: 1.0,
                m_low: 0.0,
                m_high: 1.0,
                bound: Bound::AtMostOne,
            };
        }
        for w in self.points.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.mean <= target && target <= b.mean {
                let (la, lb) = ((a.m as f64).log2(), (b.m as f64).log2());
                let frac = if b.mean > a.mean {
                    (target - a.mean) / (b.mean - a.mean)
                } else {
                    0.0
                };
                return MEstimate {
                    m: (la + frac * (lb - la)).exp2(),
                    m_low: a.m as f64,
                    m_high: b.m as f64,
                    bound: Bound::Interpolated,
                };
            }
        }
        at_least_cap
    }
}

/// Builds a curve and inverts it at `target`.
pub fn estimate_m(target: f64, qubits: usize, block: usize, trials: usize, seed: u64) -> Result<MEstimate> {
    MixtureCurve::build(qubits, block, trials, seed)?.estimate(target)
}

/// Sample skewness `E[(x−μ)³]/σ³`.
pub fn skewness(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    m3 / m2.powf(1.5)
}
