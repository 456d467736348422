//! Differentially private smooth boosting over Boolean datasets.
//!
//! The crate provides the algorithmic core: bounded measures and their
//! Bregman projection onto kappa-dense sets, the weighted exponential and
//! report-noisy-max selection mechanisms with composition accounting,
//! exact and private weak learners (1-Rules and TopDown trees), and the
//! lazy-Bregman boosting loop that ties them together. Everything is
//! deterministic given explicit `(seed, stream_id)` randomness and works
//! without `std` (allocation required); IO, file formats, and the command
//! line live in the companion `dpboost` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod boosting;
pub mod dataset;
pub mod error;
mod float;
pub mod learners;
pub mod measures;
pub mod mechanisms;
pub mod rng;

pub use boosting::{
    lazy_bregman_boost, theorem_schedule, Accounting, BoostConfig, Ensemble, LearnerKind, Margins,
    RoundRecord,
};
pub use dataset::BooleanDataset;
pub use error::{Error, Result};
pub use learners::{
    gini, improvement, label_leaves_noisy, leaf_stats, stump_errors, train_1r, train_dp_1r,
    train_dp_topdown, tree_error, tree_potential, weighted_error, DecisionTree, Hypothesis,
    LeafStats, OneRule, Predict, TreeNode,
};
pub use measures::{
    bregman_project, kl_divergence, statistical_distance, Measure, SmoothDistribution,
};
pub use mechanisms::{
    advanced_composition, audit_mechanism, audit_weak_learner, basic_composition, laplace_quantile,
    noise_rate_1r, noise_rate_topdown, sample_laplace, solve_round_budget_approx,
    topdown_advanced_budget, weighted_exponential_mechanism, weighted_report_noisy_max,
    wem_probabilities, AuditOutcome, AuditReport, AuditSide, NoiseRate, PrivacyBudget,
};
pub use rng::RngStream;
