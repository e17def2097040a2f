use serde::{Deserialize, Serialize};

use super::series::EventQueryResult;
use crate::error::{Error, Result};
use crate::scalar::{mean_and_sd, Real};

/// Normal-approximation credible band for one period's count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventBand<T> {
    pub mean: T,
    pub sd: T,
    pub ci_lo: T,
    pub ci_hi: T,
    /// Monte Carlo standard error of `mean`: `sd / √S`.
    pub mc_stderr: T,
    pub num_samples: usize,
    /// The lower bound fell below zero; it is reported unclipped.
    pub negative_lower: bool,
}

/// `mean ± z·sd` over the sample counts, with `sd` using divisor `S − 1`.
pub fn posterior_band<T: Real>(result: &EventQueryResult, z: T) -> Result<EventBand<T>> {
    let s = result.samples.len();
    if s < 2 {
        return Err(Error::param("posterior band needs at least 2 samples"));
    }
    let xs: Vec<T> = result.samples.iter().map(|&c| T::from_u32(c).unwrap()).collect();
    let (mean, sd) = mean_and_sd(&xs);
    let ci_lo = mean - z * sd;
    Ok(EventBand {
        mean,
        sd,
        ci_lo,
        ci_hi: mean + z * sd,
        mc_stderr: sd / T::from_count(s).sqrt(),
        num_samples: s,
        negative_lower: ci_lo < T::zero(),
    })
}
