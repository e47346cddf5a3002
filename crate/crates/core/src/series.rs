//! Time series of trajectory observables and the stationary-window rule.

use std::ops::Range;

use serde::{Deserialize, Serialize};

/// Number of records per block when testing for saturation of `S`.
pub const STATIONARY_BLOCK: usize = 50;
/// Relative change of consecutive block means below which `S` is saturated.
pub const STATIONARY_REL_TOL: f64 = 0.01;
/// Fraction of the saturated records that forms the stationary window.
pub const STATIONARY_TAIL: f64 = 0.25;

/// Observables recorded at one time step. Fields that were not requested by
/// the trajectory are `None` (or empty).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: u64,
    /// Entropy of the first `L/2` cells (bits).
    pub s_half: Option<f64>,
    /// Entropy of sublattice B (bits).
    pub s_b: Option<f64>,
    /// Logarithmic negativity of the A register under the cluster split.
    pub log_negativity: Option<f64>,
    /// Minimum eigenvalue of the partially transposed A register.
    pub lambda_min: Option<f64>,
    /// `⟨X_q⟩` per qubit, A and B interleaved.
    pub magnetization: Vec<f64>,
    /// String order parameter of the A chain.
    pub string_order: Option<f64>,
}

/// Full spectra captured at one time step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectraRecord {
    pub t: u64,
    /// Eigenvalues of the A-register density matrix.
    pub entanglement: Vec<f64>,
    /// Eigenvalues of its partial transpose.
    pub negativity: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub records: Vec<ObservableRecord>,
    pub spectra: Vec<SpectraRecord>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Values of one optional field, in record order. Records lacking the
    /// field are skipped.
    pub fn column(&self, field: impl Fn(&ObservableRecord) -> Option<f64>) -> Vec<f64> {
        self.records.iter().filter_map(field).collect()
    }

    /// Record indices of the stationary window, judged on the half-ladder
    /// entropy. Falls back to the tail of the whole series when `S` was not
    /// recorded.
    pub fn stationary_window(&self) -> Range<usize> {
        let s = self.column(|r| r.s_half);
        if s.len() == self.records.len() {
            stationary_window(&s)
        } else {
            tail_window(0, self.records.len())
        }
    }

    /// Mean of a field over the stationary window.
    pub fn stationary_mean(&self, field: impl Fn(&ObservableRecord) -> Option<f64>) -> Option<f64> {
        let w = self.stationary_window();
        let vals: Vec<f64> = self.records[w].iter().filter_map(field).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

/// Stationary window of a saturating series.
///
/// Consecutive non-overlapping blocks of [`STATIONARY_BLOCK`] records are
/// compared; saturation starts at the first block whose mean differs from the
/// previous block's by less than [`STATIONARY_REL_TOL`] (relative). The window
/// is the last [`STATIONARY_TAIL`] of the records from that point on. A series
/// that never saturates uses the last quarter of all records.
pub fn stationary_window(values: &[f64]) -> Range<usize> {
    stationary_window_with(values, STATIONARY_BLOCK, STATIONARY_REL_TOL, STATIONARY_TAIL)
}

pub fn stationary_window_with(values: &[f64], block: usize, rel_tol: f64, tail: f64) -> Range<usize> {
    let n = values.len();
    let mean = |r: Range<usize>| values[r.clone()].iter().sum::<f64>() / r.len() as f64;
    let mut start = 0;
    let mut found = false;
    let mut k = 1;
    while block > 0 && (k + 1) * block <= n {
        let prev = mean((k - 1) * block..k * block);
        let cur = mean(k * block..(k + 1) * block);
        let scale = prev.abs().max(f64::MIN_POSITIVE);
        if (cur - prev).abs() < rel_tol * scale || (cur == prev) {
            start = k * block;
            found = true;
            break;
        }
        k += 1;
    }
    if !found {
        start = 0;
    }
    tail_window_fraction(start, n, tail)
}

fn tail_window(start: usize, end: usize) -> Range<usize> {
    tail_window_fraction(start, end, STATIONARY_TAIL)
}

fn tail_window_fraction(start: usize, end: usize, tail: f64) -> Range<usize> {
    if end <= start {
        return end..end;
    }
    let len = (((end - start) as f64 * tail).ceil() as usize).clamp(1, end - start);
    end - len..end
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturating_series_window() {
        // Linear growth over 200 records, then flat.
        let v: Vec<f64> = (0..1000).map(|i| (i as f64 / 200.0).min(1.0) * 3.0).collect();
        let w = stationary_window(&v);
        assert_eq!(w.end, 1000);
        // Saturation is detected once two flat blocks follow each other.
        assert!(w.start >= 800);
        assert!(v[w.clone()].iter().all(|&x| x == 3.0));
    }

    #[test]
    fn never_saturating_uses_last_quarter() {
        let v: Vec<f64> = (0..400).map(|i| (1.2f64).powi(i / 50)).collect();
        assert_eq!(stationary_window(&v), 300..400);
    }

    #[test]
    fn short_and_empty_series() {
        assert_eq!(stationary_window(&[]), 0..0);
        assert_eq!(stationary_window(&[1.0, 2.0, 3.0]), 2..3);
    }

    #[test]
    fn constant_zero_series_saturates() {
        let v = vec![0.0; 200];
        assert_eq!(stationary_window(&v), 162..200);
    }
}
