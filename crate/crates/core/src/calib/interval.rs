use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::binning::{weighted_rmse, BinSummary};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::{mean_and_sd, Real};

/// Two-sided 95% normal quantile.
pub const CI_Z: f64 = 1.96;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibReport<T> {
    /// Point estimate from the observed bin frequencies.
    pub calib_err: T,
    /// Mean over the simulated errors.
    pub calib_err_avg: T,
    /// Standard deviation of the simulated errors (divisor `S − 1`).
    pub stderr: T,
    pub ci_lo: T,
    pub ci_hi: T,
    pub num_samples: usize,
    pub seed: u64,
}

/// Simulated 95% interval for the calibration error.
///
/// Each simulation redraws every bin frequency from
/// `N(p̂ᵢ, p̂ᵢ(1 − p̂ᵢ)/|Bᵢ|)`, clips the draw to `[0, 1]`, and recomputes the
/// error against the unchanged `q̂ᵢ`. Simulation `s` draws from stream `s`
/// of `seed`, so the report is identical however the work is scheduled.
pub fn calib_error_ci<T: Real>(
    summaries: &[BinSummary<T>],
    n: usize,
    num_samples: usize,
    seed: u64,
) -> Result<CalibReport<T>> {
    if num_samples < 2 {
        return Err(Error::param("number of simulations must be at least 2"));
    }
    if summaries.is_empty() || n == 0 {
        return Err(Error::NoData);
    }
    let calib_err = weighted_rmse(summaries.iter().map(|b| (b.q_hat, b.p_hat, b.size)), n);
    let sigmas: Vec<T> = summaries.iter().map(BinSummary::stderr).collect();

    let simulated: Vec<T> = (0..num_samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, s);
            let bins = summaries.iter().zip(&sigmas).map(|(b, &sigma)| {
                let z: f64 = rng.sample(StandardNormal);
                let p = (b.p_hat + sigma * T::lit(z)).max(T::zero()).min(T::one());
                (b.q_hat, p, b.size)
            });
            weighted_rmse(bins, n)
        })
        .collect();

    let (avg, sd) = mean_and_sd(&simulated);
    let z = T::lit(CI_Z);
    Ok(CalibReport {
        calib_err,
        calib_err_avg: avg,
        stderr: sd,
        ci_lo: avg - z * sd,
        ci_hi: avg + z * sd,
        num_samples,
        seed,
    })
}
