//! Random models: named universes of partitions carrying a uniform law, with
//! the prediction side varying and the ground truth held fixed.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{bell, count_with_shape, stirling2, BigCount};
use crate::error::{Error, Result};
use crate::partition::{Partition, PartitionShape};

/// Default cap on full-universe enumeration; B_12 is about 4.2 million, which
/// keeps exhaustive passes in seconds.
pub const DEFAULT_ENUM_LIMIT: usize = 12;

/// A one-sided random model: the universe the varying partition is drawn
/// from, uniformly, while the ground truth stays fixed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum RandomModel {
    /// All partitions of `n` elements.
    All,
    /// Partitions sharing one shape. With `shape: None` the shape of the
    /// ground truth is used, matching historical two-sided usage projected
    /// onto one side.
    Perm { shape: Option<PartitionShape> },
    /// Partitions with exactly `blocks` blocks.
    Num { blocks: usize },
    /// All partitions except the 1-partition and the N-partition.
    Interior,
}

impl RandomModel {
    /// Fixes the perm shape against a concrete ground truth.
    pub fn resolve(&self, truth: &Partition) -> ResolvedModel {
        match self {
            RandomModel::All => ResolvedModel::All,
            RandomModel::Perm { shape } => {
                ResolvedModel::Perm(shape.clone().unwrap_or_else(|| truth.shape()))
            }
            RandomModel::Num { blocks } => ResolvedModel::Num(*blocks),
            RandomModel::Interior => ResolvedModel::Interior,
        }
    }
}

/// A random model with all parameters pinned down for a given `n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum ResolvedModel {
    All,
    Perm(PartitionShape),
    Num(usize),
    Interior,
}

impl ResolvedModel {
    /// Checks that the universe is well defined and non-empty for `n`
    /// elements.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        match self {
            ResolvedModel::All => Ok(()),
            ResolvedModel::Perm(shape) => {
                if shape.n() != n {
                    Err(Error::ShapeSumMismatch {
                        expected: n,
                        shape_sum: shape.n(),
                    })
                } else {
                    Ok(())
                }
            }
            ResolvedModel::Num(k) => {
                if *k == 0 || *k > n {
                    Err(Error::BlockCountOutOfRange { n, k: *k })
                } else {
                    Ok(())
                }
            }
            ResolvedModel::Interior => {
                if n < 3 {
                    Err(Error::EmptyInterior { n })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Exact number of partitions in the universe.
    pub fn universe_size(&self, n: usize) -> Result<BigCount> {
        self.validate(n)?;
        match self {
            ResolvedModel::All => bell(n),
            ResolvedModel::Perm(shape) => Ok(count_with_shape(shape)),
            ResolvedModel::Num(k) => stirling2(n, *k),
            ResolvedModel::Interior => Ok(bell(n)? - 2u32),
        }
    }

    /// Membership test, used to filter the lexicographic stream of all
    /// restricted growth strings.
    pub fn contains(&self, p: &Partition) -> bool {
        match self {
            ResolvedModel::All => true,
            ResolvedModel::Perm(shape) => &p.shape() == shape,
            ResolvedModel::Num(k) => p.block_count() == *k,
            ResolvedModel::Interior => !p.is_boundary(),
        }
    }
}
