//! 1-Rules (decision stumps): constants and signed literals, learned
//! exactly or through the weighted exponential mechanism.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::BooleanDataset;
use crate::error::{Error, Result};
use crate::learners::Predict;
use crate::measures::SmoothDistribution;
use crate::mechanisms::{weighted_exponential_mechanism, NoiseRate};
use crate::rng::RngStream;

/// A decision stump over Boolean features: a literal, a negated literal,
/// or a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneRule {
    /// Predict +1 exactly when the feature is set.
    Literal(usize),
    /// Predict +1 exactly when the feature is clear.
    NegatedLiteral(usize),
    ConstTrue,
    ConstFalse,
}

impl OneRule {
    /// The hypothesis class ordering x_0, !x_0, ..., x_{r-1}, !x_{r-1},
    /// +1, -1; ties in exact argmin paths break toward the lowest index.
    pub fn from_canonical_index(index: usize, r: usize) -> Result<Self> {
        match index {
            i if i < 2 * r && i % 2 == 0 => Ok(OneRule::Literal(i / 2)),
            i if i < 2 * r => Ok(OneRule::NegatedLiteral(i / 2)),
            i if i == 2 * r => Ok(OneRule::ConstTrue),
            i if i == 2 * r + 1 => Ok(OneRule::ConstFalse),
            _ => Err(Error::InvalidParameter {
                name: "index",
                reason: "canonical stump index out of range",
            }),
        }
    }

    pub fn canonical_index(&self, r: usize) -> usize {
        match self {
            OneRule::Literal(j) => 2 * j,
            OneRule::NegatedLiteral(j) => 2 * j + 1,
            OneRule::ConstTrue => 2 * r,
            OneRule::ConstFalse => 2 * r + 1,
        }
    }

    /// Number of stump hypotheses over r features: 2r + 2.
    pub fn class_size(r: usize) -> usize {
        2 * r + 2
    }

    pub fn feature(&self) -> Option<usize> {
        match self {
            OneRule::Literal(j) | OneRule::NegatedLiteral(j) => Some(*j),
            _ => None,
        }
    }

    pub fn canonical_string(&self) -> String {
        match self {
            OneRule::Literal(j) => format!("x{j}"),
            OneRule::NegatedLiteral(j) => format!("!x{j}"),
            OneRule::ConstTrue => String::from("+1"),
            OneRule::ConstFalse => String::from("-1"),
        }
    }
}

impl Predict for OneRule {
    #[inline]
    fn predict(&self, ds: &BooleanDataset, i: usize) -> i8 {
        match self {
            OneRule::Literal(j) => {
                if ds.get(i, *j) {
                    1
                } else {
                    -1
                }
            }
            OneRule::NegatedLiteral(j) => {
                if ds.get(i, *j) {
                    -1
                } else {
                    1
                }
            }
            OneRule::ConstTrue => 1,
            OneRule::ConstFalse => -1,
        }
    }
}

/// Weighted errors of all 2r + 2 stumps in canonical order, in one pass
/// over the set bits of the dataset.
///
/// For the literal on feature j the error mass is the mass of
/// {x_j = 1, y = -1} plus the mass of {x_j = 0, y = +1}; negation swaps
/// every prediction, and the constants err on one label class each.
pub fn stump_errors(ds: &BooleanDataset, mu: &SmoothDistribution) -> Result<Vec<f64>> {
    if mu.len() != ds.n() {
        return Err(Error::LengthMismatch {
            expected: ds.n(),
            got: mu.len(),
        });
    }
    let r = ds.r();
    let mut ones_mass = vec![0.0f64; r];
    let mut ones_pos = vec![0.0f64; r];
    let mut pos = 0.0f64;
    let mut total = 0.0f64;
    for i in 0..ds.n() {
        let w = mu.get(i);
        total += w;
        let positive = ds.label(i) == 1;
        if positive {
            pos += w;
        }
        for j in ds.row_ones(i) {
            ones_mass[j] += w;
            if positive {
                ones_pos[j] += w;
            }
        }
    }
    let neg = total - pos;
    let mut errors = Vec::with_capacity(2 * r + 2);
    for j in 0..r {
        let ones_neg = ones_mass[j] - ones_pos[j];
        let zeros_pos = pos - ones_pos[j];
        errors.push(ones_neg + zeros_pos);
        errors.push(ones_pos[j] + (neg - ones_neg));
    }
    errors.push(neg);
    errors.push(pos);
    Ok(errors)
}

/// Exact 1-Rule induction: the stump with minimum weighted error, ties
/// broken toward the lowest canonical index.
pub fn train_1r(ds: &BooleanDataset, mu: &SmoothDistribution) -> Result<OneRule> {
    let errors = stump_errors(ds, mu)?;
    let mut best = 0;
    for (i, &e) in errors.iter().enumerate() {
        if e < errors[best] {
            best = i;
        }
    }
    OneRule::from_canonical_index(best, ds.r())
}

/// Differentially private 1-Rule induction: sample a stump from the
/// weighted exponential mechanism with quality -err at noise rate eta.
pub fn train_dp_1r(
    ds: &BooleanDataset,
    mu: &SmoothDistribution,
    eta: NoiseRate,
    rng: &mut RngStream,
) -> Result<OneRule> {
    let errors = stump_errors(ds, mu)?;
    let scores: Vec<f64> = errors.into_iter().map(|e| -e).collect();
    let index = weighted_exponential_mechanism(&scores, eta.eta(), rng)?;
    OneRule::from_canonical_index(index, ds.r())
}
