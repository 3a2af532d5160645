//! Entropy, mutual information, Rand index, and normalized mutual
//! information over contingency tables. Natural logarithms throughout; the
//! base cancels in every adjusted ratio.
//!
//! All sums run row-major through compensated accumulation so repeated runs
//! are bit-identical, and the diagonal terms of `I(t, t)` evaluate to exactly
//! the same floats as `entropy(t)`: a perfect self-match normalizes to
//! exactly 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::partition::{ContingencyTable, Partition};

/// Shannon entropy of the block-size distribution, in nats.
///
/// Zero exactly for the 1-partition; `ln n` for the N-partition.
pub fn entropy(p: &Partition) -> f64 {
    entropy_of_sizes(&p.block_sizes(), p.n())
}

/// Entropy of explicit block sizes summing to `n`.
pub fn entropy_of_sizes(sizes: &[usize], n: usize) -> f64 {
    let nf = n as f64;
    let mut acc = KahanSum::new();
    for &a in sizes {
        if a > 0 {
            let af = a as f64;
            // (a/n) * ln(n/a); written so the diagonal of I(t,t) produces
            // bit-identical terms.
            acc.add((af / nf) * (nf / af).ln());
        }
    }
    acc.value()
}

/// Mutual information between the two partitions of a contingency table, in
/// nats, with `0 ln 0 := 0`.
///
/// Non-negative; at most `min(H_row, H_col)`.
pub fn mutual_information(tbl: &ContingencyTable) -> f64 {
    let n = tbl.total() as f64;
    let mut acc = KahanSum::new();
    for (i, row) in tbl.counts().iter().enumerate() {
        let a = tbl.row_sums()[i] as f64;
        for (j, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let b = tbl.col_sums()[j] as f64;
                let nijf = nij as f64;
                acc.add((nijf / n) * ((nijf * n) / (a * b)).ln());
            }
        }
    }
    acc.value()
}

/// Joint entropy of the pair, in nats.
pub fn joint_entropy(tbl: &ContingencyTable) -> f64 {
    let n = tbl.total() as f64;
    let mut acc = KahanSum::new();
    for row in tbl.counts() {
        for &nij in row {
            if nij > 0 {
                let nijf = nij as f64;
                acc.add((nijf / n) * (n / nijf).ln());
            }
        }
    }
    acc.value()
}

/// Fraction of element pairs on which the two partitions agree: both
/// together or both apart. Needs at least two elements.
pub fn rand_index(tbl: &ContingencyTable) -> Result<f64> {
    let n = tbl.total();
    if n < 2 {
        return Err(Error::TooFewElements { n, required: 2 });
    }
    let choose2 = |x: usize| -> u128 {
        let x = x as u128;
        x * (x.saturating_sub(1)) / 2
    };
    let together_both: u128 = tbl
        .counts()
        .iter()
        .flat_map(|row| row.iter())
        .map(|&nij| choose2(nij))
        .sum();
    let together_rows: u128 = tbl.row_sums().iter().map(|&a| choose2(a)).sum();
    let together_cols: u128 = tbl.col_sums().iter().map(|&b| choose2(b)).sum();
    let total_pairs = choose2(n);
    // agreements = pairs together in both + pairs apart in both.
    let agreements = total_pairs + 2 * together_both - together_rows - together_cols;
    Ok(agreements as f64 / total_pairs as f64)
}

/// Normalizer choices for NMI.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NmiNormalization {
    /// `max(H(c), H(t))`.
    Max,
    /// Joint entropy `H(c, t)`.
    Joint,
    /// The constant `ln n`.
    #[serde(rename = "constant-logn")]
    ConstantLogN,
}

/// Normalized mutual information.
///
/// Conventions: two 1-partitions are identical, so their NMI is 1 (the only
/// 0/0 case); if exactly one side has zero entropy the mutual information is
/// zero and the score is 0.
pub fn nmi(c: &Partition, t: &Partition, normalization: NmiNormalization) -> Result<f64> {
    let tbl = ContingencyTable::from_partitions(c, t)?;
    let h_c = entropy(c);
    let h_t = entropy(t);
    if h_c == 0.0 && h_t == 0.0 {
        return Ok(1.0);
    }
    let i = mutual_information(&tbl);
    let normalizer = match normalization {
        NmiNormalization::Max => h_c.max(h_t),
        NmiNormalization::Joint => joint_entropy(&tbl),
        NmiNormalization::ConstantLogN => (c.n() as f64).ln(),
    };
    if normalizer == 0.0 {
        return Ok(0.0);
    }
    Ok(i / normalizer)
}
