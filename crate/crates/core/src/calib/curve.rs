use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::binning::BinSummary;
use super::PredictionPair;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Where a reliability point sits relative to the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    /// `q̂ > p̂`: below the diagonal.
    Over,
    /// `q̂ < p̂`: above the diagonal.
    Under,
    Calibrated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint<T> {
    pub q_hat: T,
    pub p_hat: T,
    pub size: usize,
    pub stderr: T,
    pub confidence: Confidence,
}

/// One bin of an evenly spaced partition of `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedBin<T> {
    pub lo: T,
    pub hi: T,
    pub summary: BinSummary<T>,
    pub stderr: T,
}

/// Bins `[k·w, (k+1)·w)` with the last one closed at 1. Empty bins are
/// omitted.
pub fn fixed_width_binning<T: Real>(pairs: &[PredictionPair<T>], width: T) -> Result<Vec<FixedBin<T>>> {
    if !(width > T::zero() && width <= T::one()) {
        return Err(Error::param(format!("bin width {width} outside (0, 1]")));
    }
    let edge = |k: usize| T::from_count(k) * width;
    let mut count = (T::one() / width).ceil().to_usize().unwrap_or(1).max(1);
    while count > 1 && edge(count - 1) >= T::one() {
        count -= 1;
    }

    let mut members: Vec<Vec<PredictionPair<T>>> = vec![Vec::new(); count];
    for p in pairs {
        let mut k = (p.q / width).floor().to_usize().unwrap_or(0).min(count - 1);
        // Membership is decided against the reported edges, not the quotient.
        while k + 1 < count && p.q >= edge(k + 1) {
            k += 1;
        }
        while k > 0 && p.q < edge(k) {
            k -= 1;
        }
        members[k].push(*p);
    }

    Ok(members
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_empty())
        .map(|(k, m)| {
            let summary = BinSummary::from_pairs(m);
            FixedBin {
                lo: edge(k),
                hi: if k + 1 == count { T::one() } else { edge(k + 1) },
                stderr: summary.stderr(),
                summary,
            }
        })
        .collect())
}

pub fn reliability_curve<T: Real>(summaries: &[BinSummary<T>]) -> Result<Vec<CurvePoint<T>>> {
    if summaries.is_empty() {
        return Err(Error::NoData);
    }
    let mut points: Vec<CurvePoint<T>> = summaries
        .iter()
        .map(|b| CurvePoint {
            q_hat: b.q_hat,
            p_hat: b.p_hat,
            size: b.size,
            stderr: b.stderr(),
            confidence: match b.q_hat.partial_cmp(&b.p_hat) {
                Some(Ordering::Greater) => Confidence::Over,
                Some(Ordering::Less) => Confidence::Under,
                _ => Confidence::Calibrated,
            },
        })
        .collect();
    points.sort_by(|a, b| a.q_hat.partial_cmp(&b.q_hat).unwrap_or(Ordering::Equal));
    Ok(points)
}
