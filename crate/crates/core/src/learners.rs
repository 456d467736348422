//! Weak learners: exact and differentially private 1-Rules (decision
//! stumps) and the DP TopDown tree inducer with Gini potential.

mod one_rule;
mod tree;

pub use one_rule::{stump_errors, train_1r, train_dp_1r, OneRule};
pub use tree::{
    gini, improvement, label_leaves_noisy, leaf_stats, train_dp_topdown, tree_error,
    tree_potential, DecisionTree, LeafStats, TreeNode,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::BooleanDataset;
use crate::error::{Error, Result};
use crate::float::stable_sum;
use crate::measures::SmoothDistribution;

/// Anything that classifies dataset rows into {+1, -1}.
pub trait Predict {
    fn predict(&self, ds: &BooleanDataset, i: usize) -> i8;
}

/// A weak hypothesis: a single rule or a decision tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Rule(OneRule),
    Tree(DecisionTree),
}

impl Predict for Hypothesis {
    fn predict(&self, ds: &BooleanDataset, i: usize) -> i8 {
        match self {
            Hypothesis::Rule(r) => r.predict(ds, i),
            Hypothesis::Tree(t) => t.predict(ds, i),
        }
    }
}

impl Hypothesis {
    /// Distinct feature indices the hypothesis actually reads.
    pub fn features_used(&self) -> Vec<usize> {
        match self {
            Hypothesis::Rule(r) => r.feature().into_iter().collect(),
            Hypothesis::Tree(t) => t.features_used(),
        }
    }

    /// Stable text form used to bucket audit outcomes.
    pub fn canonical_string(&self) -> String {
        match self {
            Hypothesis::Rule(r) => r.canonical_string(),
            Hypothesis::Tree(t) => t.canonical_string(),
        }
    }
}

/// Weighted classification error: the mu-mass of misclassified examples.
pub fn weighted_error<P: Predict>(
    ds: &BooleanDataset,
    mu: &SmoothDistribution,
    hypothesis: &P,
) -> Result<f64> {
    if mu.len() != ds.n() {
        return Err(Error::LengthMismatch {
            expected: ds.n(),
            got: mu.len(),
        });
    }
    Ok(stable_sum((0..ds.n()).filter_map(|i| {
        if hypothesis.predict(ds, i) != ds.label(i) {
            Some(mu.get(i))
        } else {
            None
        }
    })))
}
