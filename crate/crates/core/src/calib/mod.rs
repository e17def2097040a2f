//! Calibration error estimation from prediction-label pairs.
//!
//! Adaptive (equal-count) binning over sorted predictions, a root mean
//! squared calibration error weighted by bin size, a simulation-based
//! confidence interval for that error, proper scoring rules with their
//! calibration/refinement split, and the data behind reliability plots.

mod binning;
mod curve;
mod interval;
mod scoring;

pub use binning::{bin_stats, calibration_error, sort_and_bin, sort_pairs, BinSummary, Binning};
pub use curve::{fixed_width_binning, reliability_curve, Confidence, CurvePoint, FixedBin};
pub use interval::{calib_error_ci, CalibReport, CI_Z};
pub use scoring::{brier_score, cross_entropy, decomposition_by_unique_q, ScoreDecomposition, CE_EPSILON};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default adaptive bin size.
pub const DEFAULT_BIN_SIZE: usize = 5_000;
/// Default number of confidence-interval simulations.
pub const DEFAULT_CI_SAMPLES: usize = 10_000;

/// A prediction strength `q ∈ [0, 1]` with its binary ground-truth label.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionPair<T> {
    pub q: T,
    pub y: bool,
}

impl<T: Real> PredictionPair<T> {
    pub fn new(q: T, y: bool) -> Result<Self> {
        if !(q >= T::zero() && q <= T::one()) {
            return Err(Error::input(format!("prediction {q} outside [0, 1]")));
        }
        Ok(Self { q, y })
    }

    /// Label as 0 or 1 in the scalar type.
    #[inline]
    pub fn label(&self) -> T {
        if self.y {
            T::one()
        } else {
            T::zero()
        }
    }
}

/// Everything computed by a full adaptive-binning evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation<T> {
    pub report: CalibReport<T>,
    pub bins: Vec<BinSummary<T>>,
    pub n: usize,
    pub bin_size: usize,
    /// Set when `n < bin_size`, i.e. everything landed in a single bin.
    pub low_confidence: bool,
}

/// Adaptive binning, bin statistics, point estimate and simulated interval.
pub fn evaluate<T: Real>(
    pairs: &[PredictionPair<T>],
    bin_size: usize,
    num_samples: usize,
    seed: u64,
) -> Result<Evaluation<T>> {
    if num_samples < 2 {
        return Err(Error::param("number of simulations must be at least 2"));
    }
    let (sorted, binning) = sort_and_bin(pairs, bin_size)?;
    let bins = bin_stats(&binning, &sorted);
    let report = calib_error_ci(&bins, sorted.len(), num_samples, seed)?;
    Ok(Evaluation { report, bins, n: sorted.len(), bin_size, low_confidence: binning.low_confidence })
}
