//! Calibration analysis for probabilistic models, and propagation of
//! coreference posterior uncertainty into aggregate event counts.
//!
//! * [`calib`]: adaptive-binning calibration error with simulated
//!   confidence intervals, Brier/cross-entropy scores and their
//!   calibration-refinement split, reliability curves.
//! * [`seq`]: Bernoulli Naive Bayes, L2 logistic regression, a smoothed
//!   HMM, and forward-backward over generic linear-chain potentials.
//! * [`coref`]: exact independent sampling of entity clusterings from a
//!   locally normalized antecedent model, with an enumeration oracle.
//! * [`events`]: per-period event counts with Monte Carlo credible bands.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! and `*F32` aliases below name the common instantiations.

// `!(x > 0)` is used deliberately so that NaN parameters are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calib;
pub mod coref;
mod error;
pub mod events;
pub mod formats;
pub mod rng;
mod scalar;
pub mod seq;
pub mod svg;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::{log_sum_exp, softmax, Real};

pub type PredictionPairF64 = calib::PredictionPair<f64>;
pub type PredictionPairF32 = calib::PredictionPair<f32>;
pub type BinSummaryF64 = calib::BinSummary<f64>;
pub type BinSummaryF32 = calib::BinSummary<f32>;
pub type CalibReportF64 = calib::CalibReport<f64>;
pub type CalibReportF32 = calib::CalibReport<f32>;
pub type EvaluationF64 = calib::Evaluation<f64>;
pub type EvaluationF32 = calib::Evaluation<f32>;
pub type ScoreDecompositionF64 = calib::ScoreDecomposition<f64>;
pub type ScoreDecompositionF32 = calib::ScoreDecomposition<f32>;
pub type TagLatticeF64 = seq::TagLattice<f64>;
pub type TagLatticeF32 = seq::TagLattice<f32>;
pub type MarginalsF64 = seq::Marginals<f64>;
pub type MarginalsF32 = seq::Marginals<f32>;
pub type NbModelF64 = seq::NbModel<f64>;
pub type LrModelF64 = seq::LrModel<f64>;
pub type HmmModelF64 = seq::HmmModel<f64>;
pub type CorefDocumentF64 = coref::CorefDocument<f64>;
pub type CorefDocumentF32 = coref::CorefDocument<f32>;
pub type AntecedentDistributionsF64 = coref::AntecedentDistributions<f64>;
pub type PairwiseMarginalsF64 = coref::PairwiseMarginals<f64>;
pub type AnnotatedDocumentF64 = events::AnnotatedDocument<f64>;
pub type EventBandF64 = events::EventBand<f64>;
