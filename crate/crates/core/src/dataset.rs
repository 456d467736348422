//! Boolean datasets: n examples over r binary features with labels in {+1, -1}.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An immutable binary-feature dataset. Feature bits are packed row-major
/// into 64-bit words; labels are +1 or -1.
///
/// Construction validates every invariant once, after which the dataset is
/// safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanDataset {
    n: usize,
    r: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    labels: Vec<i8>,
    feature_names: Vec<String>,
}

impl BooleanDataset {
    /// Build from per-row set-feature indices.
    pub fn from_sparse_rows(
        r: usize,
        rows: &[Vec<usize>],
        labels: Vec<i8>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("dataset rows"));
        }
        if labels.len() != rows.len() {
            return Err(Error::LengthMismatch {
                expected: rows.len(),
                got: labels.len(),
            });
        }
        if feature_names.len() != r {
            return Err(Error::LengthMismatch {
                expected: r,
                got: feature_names.len(),
            });
        }
        for (k, name) in feature_names.iter().enumerate() {
            if feature_names[..k].contains(name) {
                return Err(Error::InvalidParameter {
                    name: "feature_names",
                    reason: "feature names must be unique",
                });
            }
        }
        if labels.iter().any(|&y| y != 1 && y != -1) {
            return Err(Error::InvalidParameter {
                name: "labels",
                reason: "labels must be +1 or -1",
            });
        }
        let n = rows.len();
        let words_per_row = r.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words_per_row];
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                if j >= r {
                    return Err(Error::InvalidParameter {
                        name: "feature index",
                        reason: "feature index out of range",
                    });
                }
                bits[i * words_per_row + j / 64] |= 1u64 << (j % 64);
            }
        }
        Ok(Self {
            n,
            r,
            words_per_row,
            bits,
            labels,
            feature_names,
        })
    }

    /// Build from dense boolean rows.
    pub fn from_rows(
        rows: &[Vec<bool>],
        labels: Vec<i8>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        let r = feature_names.len();
        let sparse: Vec<Vec<usize>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        for row in rows {
            if row.len() != r {
                return Err(Error::LengthMismatch {
                    expected: r,
                    got: row.len(),
                });
            }
        }
        Self::from_sparse_rows(r, &sparse, labels, feature_names)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.r);
        (self.bits[i * self.words_per_row + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline(always)]
    pub fn label(&self, i: usize) -> i8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Indices of the features set in row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> RowOnes<'_> {
        let start = i * self.words_per_row;
        RowOnes {
            words: &self.bits[start..start + self.words_per_row],
            word_idx: 0,
            current: if self.words_per_row > 0 {
                self.bits[start]
            } else {
                0
            },
        }
    }

    /// New dataset containing the given rows (in order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput("subset indices"));
        }
        let mut rows = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n {
                return Err(Error::InvalidParameter {
                    name: "subset indices",
                    reason: "row index out of range",
                });
            }
            rows.push(self.row_ones(i).collect::<Vec<usize>>());
            labels.push(self.labels[i]);
        }
        Self::from_sparse_rows(self.r, &rows, labels, self.feature_names.clone())
    }

    /// Dataset with row `i` replaced by `(row, label)`; the neighboring
    /// dataset of the differential-privacy definition.
    pub fn substitute(&self, i: usize, row: &[usize], label: i8) -> Result<Self> {
        if i >= self.n {
            return Err(Error::InvalidParameter {
                name: "row index",
                reason: "row index out of range",
            });
        }
        let mut rows: Vec<Vec<usize>> = (0..self.n).map(|k| self.row_ones(k).collect()).collect();
        let mut labels = self.labels.clone();
        rows[i] = row.to_vec();
        labels[i] = label;
        Self::from_sparse_rows(self.r, &rows, labels, self.feature_names.clone())
    }

    /// Number of records at which `self` and `other` differ.
    pub fn differing_records(&self, other: &Self) -> Result<usize> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut count = 0;
        for i in 0..self.n {
            let same_bits = (0..self.words_per_row).all(|w| {
                self.bits[i * self.words_per_row + w] == other.bits[i * other.words_per_row + w]
            });
            if !same_bits || self.labels[i] != other.labels[i] {
                count += 1;
            }
        }
        Ok(count)
    }
}

pub struct RowOnes<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for RowOnes<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}
