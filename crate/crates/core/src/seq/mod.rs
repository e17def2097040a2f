//! Reference probabilistic classifiers and taggers whose posteriors feed the
//! calibration analysis.

pub mod features;
pub mod hmm;
pub mod lattice;
pub mod lr;
pub mod metrics;
pub mod nb;
pub mod tagging;

pub use features::{BinaryDocument, Vocabulary};
pub use hmm::{train_hmm, HmmModel, TaggedSentence};
pub use lattice::{forward_backward, Marginals, TagLattice};
pub use lr::{
    penalized_objective, train_logistic_regression, train_logistic_regression_with, LrFit, LrModel, LrOptions,
};
pub use metrics::{evaluate_binary, grid_select, BinaryMetrics};
pub use nb::{nb_posterior, train_bernoulli_nb, NbModel};
pub use tagging::{
    extract_tag_prediction_pairs, per_label_calibration, CalibSettings, LabelCalibration, LabelCalibrationTable,
    LabeledPairs, TagPairExtractor,
};
