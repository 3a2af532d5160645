//! Exact counting: Bell numbers, Stirling numbers of the second kind, and
//! the number of partitions sharing a given shape. All counts are
//! arbitrary-precision; Bell numbers overflow 64 bits already at n = 26.

use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::PartitionShape;

/// Exact non-negative count.
pub type BigCount = BigUint;

/// Hard cap on Bell-number indices; keeps accidental huge requests from
/// allocating without bound.
pub const BELL_HARD_LIMIT: usize = 500;

struct BellCache {
    /// bells[k] = B_k for k < bells.len().
    bells: Vec<BigUint>,
    /// Last computed row of the Bell triangle, used to extend the cache.
    row: Vec<BigUint>,
}

static BELL_CACHE: RwLock<Option<BellCache>> = RwLock::new(None);

fn extend_bells(cache: &mut BellCache, n: usize) {
    // Bell triangle: each row starts with the previous row's last entry;
    // every other entry adds its left neighbor and the entry above it.
    // B_k is the first entry of row k.
    while cache.bells.len() <= n {
        let prev = &cache.row;
        let mut next = Vec::with_capacity(prev.len() + 1);
        next.push(prev.last().expect("rows are non-empty").clone());
        for x in prev {
            let last = next.last().expect("pushed above").clone();
            next.push(last + x);
        }
        cache.bells.push(next[0].clone());
        cache.row = next;
    }
}

/// Exact `B_n`, the number of partitions of an `n`-element set, via the Bell
/// triangle recurrence. Cached across calls.
pub fn bell(n: usize) -> Result<BigCount> {
    bell_with_limit(n, BELL_HARD_LIMIT)
}

/// `bell` with an explicit hard limit.
pub fn bell_with_limit(n: usize, limit: usize) -> Result<BigCount> {
    if n > limit {
        return Err(Error::BellLimitExceeded { n, limit });
    }
    Ok(bell_prefix(n)[n].clone())
}

/// `B_0..=B_n` as a vector; used by the uniform sampler, which consumes the
/// whole prefix on every draw.
pub fn bell_prefix(n: usize) -> Vec<BigCount> {
    {
        let guard = BELL_CACHE.read().expect("bell cache poisoned");
        if let Some(cache) = guard.as_ref() {
            if cache.bells.len() > n {
                return cache.bells[..=n].to_vec();
            }
        }
    }
    let mut guard = BELL_CACHE.write().expect("bell cache poisoned");
    let cache = guard.get_or_insert_with(|| BellCache {
        bells: vec![BigUint::one()],
        row: vec![BigUint::one()],
    });
    extend_bells(cache, n);
    cache.bells[..=n].to_vec()
}

/// Exact Stirling number of the second kind: partitions of `n` elements into
/// exactly `k` blocks.
pub fn stirling2(n: usize, k: usize) -> Result<BigCount> {
    if k == 0 || k > n {
        return Err(Error::BlockCountOutOfRange { n, k });
    }
    Ok(stirling2_table(n, k)[n][k].clone())
}

/// Table `S(m, j)` for `0 <= m <= n`, `0 <= j <= k_max`, via
/// `S(m, j) = j * S(m-1, j) + S(m-1, j-1)`.
pub(crate) fn stirling2_table(n: usize, k_max: usize) -> Vec<Vec<BigUint>> {
    let mut table = vec![vec![BigUint::zero(); k_max + 1]; n + 1];
    table[0][0] = BigUint::one();
    for m in 1..=n {
        for j in 1..=k_max.min(m) {
            let carry = BigUint::from(j) * &table[m - 1][j];
            table[m][j] = carry + &table[m - 1][j - 1];
        }
    }
    table
}

pub(crate) fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Number of set partitions with the given shape:
/// `n! / (prod_i sizes_i! * prod_s mult_s!)` where `mult_s` counts how many
/// blocks share size `s`.
pub fn count_with_shape(shape: &PartitionShape) -> BigCount {
    let n = shape.n();
    let mut denom = BigUint::one();
    let mut run = 0usize;
    let mut prev = 0usize;
    for &s in shape.sizes() {
        denom *= factorial(s);
        if s == prev {
            run += 1;
        } else {
            denom *= factorial(run);
            prev = s;
            run = 1;
        }
    }
    denom *= factorial(run);
    factorial(n) / denom
}

/// All shapes (integer partitions) of `n`, each as a non-increasing size
/// list, in descending lexicographic order.
pub fn enumerate_shapes(n: usize) -> Result<Vec<PartitionShape>> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<PartitionShape>) {
        if remaining == 0 {
            out.push(PartitionShape::from_sizes(current.clone()).expect("sizes are positive"));
            return;
        }
        let mut s = max.min(remaining);
        while s >= 1 {
            current.push(s);
            rec(remaining - s, s, current, out);
            current.pop();
            s -= 1;
        }
    }
    rec(n, n, &mut current, &mut out);
    Ok(out)
}
