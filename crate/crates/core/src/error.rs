//! Error type shared by all core operations.

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input collection that must be nonempty was empty.
    EmptyInput(&'static str),
    /// Two vectors that must have equal length did not.
    LengthMismatch { expected: usize, got: usize },
    /// A scalar parameter was outside its valid range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// A measure or distribution with zero total mass cannot be normalized.
    ZeroMass,
    /// A score or weight was NaN or infinite where a finite value is required.
    NonFinite(&'static str),
    /// KL divergence is infinite: the reference vanishes on the support.
    InfiniteDivergence { index: usize },
    /// Projection target mass exceeds the positive support of the input.
    InsufficientSupport { support: usize, required_mass: f64 },
    /// Audit inputs must be neighboring datasets (differ in at most one record).
    NotNeighboring { differing: usize },
    /// The ensemble carries no per-round trace.
    MissingTrace,
    /// A tree operation referenced a node that is not a leaf of the tree.
    InvalidLeaf { node: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::ZeroMass => write!(f, "measure has zero mass"),
            Error::NonFinite(what) => write!(f, "non-finite value: {what}"),
            Error::InfiniteDivergence { index } => {
                write!(f, "infinite KL divergence: reference is zero at index {index}")
            }
            Error::InsufficientSupport { support, required_mass } => write!(
                f,
                "projection infeasible: positive support {support} cannot reach mass {required_mass}"
            ),
            Error::NotNeighboring { differing } => {
                write!(f, "datasets differ in {differing} records; at most one allowed")
            }
            Error::MissingTrace => write!(f, "ensemble has no training trace"),
            Error::InvalidLeaf { node } => write!(f, "node {node} is not a leaf"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
