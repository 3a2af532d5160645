//! Set partitions in canonical restricted growth form, partition shapes,
//! and contingency tables between two partitions.
//!
//! A partition of `n` elements is stored as a restricted growth string: a
//! sequence of block indices where `assignment[0] == 0` and each entry is at
//! most one larger than the maximum of the entries before it. Every set
//! partition has exactly one such encoding, so equality of partitions is
//! equality of assignments, and sorting assignments lexicographically orders
//! the whole universe.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set partition of `n` elements into unlabeled non-empty blocks,
/// canonically encoded as a restricted growth string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
}

impl Partition {
    /// Builds a partition from an assignment already in restricted growth
    /// form. Rejects non-canonical input.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut max_seen = 0usize;
        for (i, &b) in assignment.iter().enumerate() {
            if i == 0 {
                if b != 0 {
                    return Err(Error::NotCanonical { position: 0 });
                }
            } else if b > max_seen + 1 {
                return Err(Error::NotCanonical { position: i });
            }
            max_seen = max_seen.max(b);
        }
        Ok(Partition { assignment })
    }

    /// Canonicalizes an arbitrary label sequence: two sequences that group
    /// elements identically map to the same partition.
    pub fn canonicalize<T: Eq + Hash>(labels: &[T]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut index: HashMap<&T, usize> = HashMap::new();
        let mut assignment = Vec::with_capacity(labels.len());
        for label in labels {
            let next = index.len();
            assignment.push(*index.entry(label).or_insert(next));
        }
        Ok(Partition { assignment })
    }

    /// The 1-partition: every element in one block.
    pub fn one_partition(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Partition {
            assignment: vec![0; n],
        })
    }

    /// The N-partition: every element a singleton.
    pub fn singleton_partition(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Partition {
            assignment: (0..n).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.assignment.iter().copied().max().unwrap_or(0) + 1
    }

    /// Block sizes in block-index order (the order blocks first appear).
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.block_count()];
        for &b in &self.assignment {
            sizes[b] += 1;
        }
        sizes
    }

    /// The partition shape: the multiset of block sizes.
    pub fn shape(&self) -> PartitionShape {
        PartitionShape::from_sizes(self.block_sizes())
            .expect("block sizes of a valid partition form a valid shape")
    }

    /// True for the single-block partition.
    pub fn is_one_partition(&self) -> bool {
        self.block_count() == 1
    }

    /// True for the all-singletons partition.
    pub fn is_singleton_partition(&self) -> bool {
        self.block_count() == self.n()
    }

    /// True for the 1-partition or the N-partition.
    pub fn is_boundary(&self) -> bool {
        self.is_one_partition() || self.is_singleton_partition()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({:?})", self.assignment)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in &self.assignment {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{b}")?;
            first = false;
        }
        Ok(())
    }
}

/// A multiset of block sizes, stored non-increasing. Equivalent to an integer
/// partition of `n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartitionShape {
    sizes: Vec<usize>,
}

impl PartitionShape {
    /// Builds a shape from block sizes in any order.
    pub fn from_sizes(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::EmptyInput);
        }
        if sizes.contains(&0) {
            return Err(Error::ZeroShapeSize);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartitionShape { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Total number of elements.
    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }
}

impl fmt::Debug for PartitionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartitionShape({:?})", self.sizes)
    }
}

impl fmt::Display for PartitionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Block-overlap counts between two partitions of the same elements.
///
/// `counts[i][j]` is the number of elements in block `i` of the first
/// partition and block `j` of the second. Rows and columns are never all
/// zero because blocks are non-empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContingencyTable {
    counts: Vec<Vec<usize>>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    total: usize,
}

impl ContingencyTable {
    /// Tabulates block overlaps of `c` against `t`.
    pub fn from_partitions(c: &Partition, t: &Partition) -> Result<Self> {
        if c.n() != t.n() {
            return Err(Error::LengthMismatch {
                left: c.n(),
                right: t.n(),
            });
        }
        let rows = c.block_count();
        let cols = t.block_count();
        let mut counts = vec![vec![0usize; cols]; rows];
        for (&ci, &ti) in c.assignment().iter().zip(t.assignment()) {
            counts[ci][ti] += 1;
        }
        let row_sums: Vec<usize> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<usize> = (0..cols)
            .map(|j| counts.iter().map(|r| r[j]).sum())
            .collect();
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            total: c.n(),
        })
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.total
    }
}
