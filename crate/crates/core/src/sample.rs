//! Seed-deterministic uniform sampling from each partition universe.
//!
//! * `all`: the recursive block-of-least-element construction with exact
//!   Bell-number weights — the size `j` of the block holding the least
//!   unassigned element is chosen with probability
//!   `C(m-1, j-1) * B_{m-j} / B_m`, its companions uniformly, and the rest
//!   recursively.
//! * `num`: the Stirling-ratio construction — the last element is a new
//!   singleton with probability `S(m-1, k-1) / S(m, k)`, otherwise it joins
//!   one of the `k` blocks of a uniform sub-partition, each with probability
//!   `S(m-1, k) / S(m, k)`.
//! * `perm`: shuffle element identities uniformly and cut into the fixed
//!   block sizes. Every labeled arrangement is equally likely and each
//!   distinct partition of the shape arises from exactly
//!   `prod_i sizes_i! * prod_s mult_s!` arrangements (orderings within
//!   blocks, and swaps of equal-sized cut positions), so the induced law
//!   over distinct partitions is uniform with no correction needed.
//! * `interior`: rejection from `all`, discarding the two boundary
//!   partitions.
//!
//! All weighted choices draw exact uniform big integers below the exact
//! total, so the sampled law is the uniform law, not a floating-point
//! approximation of it.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{bell_prefix, stirling2_table};
use crate::error::{Error, Result};
use crate::model::ResolvedModel;
use crate::partition::Partition;

/// A prepared sampler for one universe; preparation precomputes the exact
/// count tables the draws consume.
pub enum ModelSampler {
    All(AllSampler),
    Perm { sizes: Vec<usize> },
    Num(NumSampler),
    Interior(AllSampler),
}

impl ModelSampler {
    pub fn prepare(model: &ResolvedModel, n: usize) -> Result<Self> {
        model.validate(n)?;
        Ok(match model {
            ResolvedModel::All => ModelSampler::All(AllSampler::new(n)),
            ResolvedModel::Perm(shape) => ModelSampler::Perm {
                sizes: shape.sizes().to_vec(),
            },
            ResolvedModel::Num(k) => ModelSampler::Num(NumSampler::new(n, *k)),
            ResolvedModel::Interior => ModelSampler::Interior(AllSampler::new(n)),
        })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Partition {
        match self {
            ModelSampler::All(s) => s.sample(rng),
            ModelSampler::Perm { sizes } => sample_perm(sizes, rng),
            ModelSampler::Num(s) => s.sample(rng),
            ModelSampler::Interior(s) => loop {
                let p = s.sample(rng);
                if !p.is_boundary() {
                    break p;
                }
            },
        }
    }
}

/// Uniform sampler over all partitions of `n` elements.
pub struct AllSampler {
    n: usize,
    bells: Vec<BigUint>,
}

impl AllSampler {
    pub fn new(n: usize) -> Self {
        AllSampler {
            n,
            bells: bell_prefix(n),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Partition {
        let n = self.n;
        let mut assignment = vec![0usize; n];
        // Unassigned element indices, ascending.
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut block = 0usize;
        while !remaining.is_empty() {
            let m = remaining.len();
            let j = self.draw_block_size(m, rng);
            // The least unassigned element anchors the block; its j-1
            // companions are a uniform subset of the other m-1.
            assignment[remaining[0]] = block;
            let mut pool: Vec<usize> = remaining[1..].to_vec();
            for picked in 0..j - 1 {
                let swap = rng.gen_range(picked..pool.len());
                pool.swap(picked, swap);
                assignment[pool[picked]] = block;
            }
            pool.drain(..j - 1);
            pool.sort_unstable();
            remaining = pool;
            block += 1;
        }
        canonicalize_ints(&assignment)
    }

    /// Size of the block containing the least element among `m` remaining,
    /// with exact probability `C(m-1, j-1) * B_{m-j} / B_m`.
    fn draw_block_size<R: Rng>(&self, m: usize, rng: &mut R) -> usize {
        if m == 1 {
            return 1;
        }
        let target = rng.gen_biguint_below(&self.bells[m]);
        let mut acc = BigUint::zero();
        let mut binom = BigUint::one(); // C(m-1, j-1), starting at j = 1
        for j in 1..=m {
            let weight = &binom * &self.bells[m - j];
            acc += weight;
            if target < acc {
                return j;
            }
            // C(m-1, j) from C(m-1, j-1).
            binom = binom * BigUint::from(m - j) / BigUint::from(j);
        }
        unreachable!("weights sum to B_m, target < B_m");
    }
}

/// Uniform sampler over partitions of `n` elements into exactly `k` blocks.
pub struct NumSampler {
    n: usize,
    k: usize,
    stirling: Vec<Vec<BigUint>>,
}

enum NumStep {
    Singleton(usize),
    Join { element: usize, block: usize },
}

impl NumSampler {
    pub fn new(n: usize, k: usize) -> Self {
        NumSampler {
            n,
            k,
            stirling: stirling2_table(n, k),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Partition {
        let mut steps = Vec::new();
        let mut m = self.n;
        let mut k = self.k;
        while m > k && k > 1 {
            let singleton_weight = &self.stirling[m - 1][k - 1];
            let target = rng.gen_biguint_below(&self.stirling[m][k]);
            if &target < singleton_weight {
                steps.push(NumStep::Singleton(m - 1));
                k -= 1;
            } else {
                let q = (target - singleton_weight) / &self.stirling[m - 1][k];
                steps.push(NumStep::Join {
                    element: m - 1,
                    block: q.to_usize().expect("block index below k"),
                });
            }
            m -= 1;
        }
        // Base case: all singletons (m == k) or one block (k == 1).
        let mut blocks: Vec<Vec<usize>> = if k == 1 {
            vec![(0..m).collect()]
        } else {
            (0..m).map(|e| vec![e]).collect()
        };
        for step in steps.into_iter().rev() {
            match step {
                NumStep::Singleton(e) => blocks.push(vec![e]),
                NumStep::Join { element, block } => blocks[block].push(element),
            }
        }
        let mut assignment = vec![0usize; self.n];
        for (b, members) in blocks.iter().enumerate() {
            for &e in members {
                assignment[e] = b;
            }
        }
        canonicalize_ints(&assignment)
    }
}

fn sample_perm<R: Rng>(sizes: &[usize], rng: &mut R) -> Partition {
    let n: usize = sizes.iter().sum();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut assignment = vec![0usize; n];
    let mut offset = 0;
    for (b, &s) in sizes.iter().enumerate() {
        for &e in &ids[offset..offset + s] {
            assignment[e] = b;
        }
        offset += s;
    }
    canonicalize_ints(&assignment)
}

/// Relabels arbitrary block ids into restricted growth form.
fn canonicalize_ints(assignment: &[usize]) -> Partition {
    let max_id = assignment.iter().copied().max().unwrap_or(0);
    let mut relabel = vec![usize::MAX; max_id + 1];
    let mut next = 0usize;
    let mut out = Vec::with_capacity(assignment.len());
    for &b in assignment {
        if relabel[b] == usize::MAX {
            relabel[b] = next;
            next += 1;
        }
        out.push(relabel[b]);
    }
    Partition::from_assignment(out).expect("first-occurrence relabeling is canonical")
}

/// Streams `count` partitions drawn uniformly from all `B_n` partitions of
/// `n` elements. Deterministic for a fixed seed.
pub fn sample_uniform(
    n: usize,
    seed: u64,
    count: usize,
) -> Result<impl Iterator<Item = Partition>> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let sampler = AllSampler::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(move |_| sampler.sample(&mut rng)))
}

/// Streams `count` uniform draws from an arbitrary model universe.
pub fn sample_model(
    model: &ResolvedModel,
    n: usize,
    seed: u64,
    count: usize,
) -> Result<impl Iterator<Item = Partition>> {
    let sampler = ModelSampler::prepare(model, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(move |_| sampler.sample(&mut rng)))
}
