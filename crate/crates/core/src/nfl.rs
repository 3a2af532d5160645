//! Executable certification of generalizer-independence: sums a metric over
//! the model's whole universe of predictions for each tested ground truth
//! and checks that the sum is a truth-independent constant.
//!
//! For the centered measures under the all-partitions model the constant is
//! zero: the numerator sums to zero exactly and the denominator is constant
//! per truth. Under the fixed-shape model the sum is zero on every interior
//! truth but equals 1 at the N-partition truth (whose one-member universe
//! scores only the perfect self-match), so the check fails once boundary
//! truths enter — the "free morsel" — by exactly `1/B_n` per universe
//! member.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::combinatorics::bell;
use crate::enumerate::enumerate_model;
use crate::error::{Error, Result};
use crate::expectation::Method;
use crate::metrics::{MetricName, MetricSpec, Normalization, Scorer};
use crate::model::RandomModel;
use crate::numeric::KahanSum;
use crate::partition::Partition;
use crate::sample::sample_model;

/// Work budget: exhaustive truth sweeps are refused when they would need
/// more than this many score evaluations.
pub const VERIFY_BUDGET: u64 = 100_000_000;

/// Which ground truths a verification run covers.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TruthSelector {
    /// Every partition of `n` elements.
    All,
    /// Uniform sample of truths, deduplicated.
    Sampled { count: usize, seed: u64 },
    /// Both boundary partitions plus a uniform sample.
    BoundaryPlusSampled { count: usize, seed: u64 },
}

/// One tested truth and its universe sum.
#[derive(Clone, Debug, Serialize)]
pub struct TruthSum {
    pub truth: String,
    pub sum: f64,
}

/// Outcome of a generalizer-independence check.
#[derive(Clone, Debug, Serialize)]
pub struct NflReport {
    pub n: usize,
    pub metric: MetricSpec,
    pub truths_tested: TruthSelector,
    pub per_truth: Vec<TruthSum>,
    /// Mean of the per-truth sums; the constant the sums are compared to.
    pub lambda: f64,
    pub max_abs_deviation: f64,
    /// Deviation restricted to the boundary truths, when any were tested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_deviation: Option<f64>,
    /// Truths whose score is undefined under the metric (SMI against a
    /// zero-variance truth); excluded from the sums.
    pub skipped_degenerate: Vec<String>,
    pub tolerance: f64,
    pub passes: bool,
}

/// Sums `score(C, t)` over every `C` in the metric's model universe,
/// compensated, in enumeration order.
pub fn universe_sum(scorer: &Scorer, spec: &MetricSpec, t: &Partition) -> Result<f64> {
    let limit = match spec.method {
        Method::Exact { enum_limit } => enum_limit,
        Method::MonteCarlo { .. } => crate::model::DEFAULT_ENUM_LIMIT,
    };
    let resolved = spec.model.resolve(t);
    let mut acc = KahanSum::new();
    for c in enumerate_model(&resolved, t.n(), limit)? {
        acc.add(scorer.score(spec, &c, t)?.value);
    }
    Ok(acc.value())
}

fn planned_evaluations(spec: &MetricSpec, truths: &[Partition]) -> Result<u64> {
    let mut total: u128 = 0;
    for t in truths {
        let size = spec
            .model
            .resolve(t)
            .universe_size(t.n())?
            .to_u128()
            .unwrap_or(u128::MAX);
        total = total.saturating_add(size);
    }
    Ok(total.min(u64::MAX as u128) as u64)
}

fn select_truths(selector: &TruthSelector, n: usize, limit: usize) -> Result<Vec<Partition>> {
    let mut truths = Vec::new();
    match selector {
        TruthSelector::All => {
            truths.extend(enumerate_model(
                &crate::model::ResolvedModel::All,
                n,
                limit,
            )?);
        }
        TruthSelector::Sampled { count, seed } => {
            for p in sample_model(&crate::model::ResolvedModel::All, n, *seed, *count)? {
                if !truths.contains(&p) {
                    truths.push(p);
                }
            }
        }
        TruthSelector::BoundaryPlusSampled { count, seed } => {
            truths.push(Partition::one_partition(n)?);
            truths.push(Partition::singleton_partition(n)?);
            for p in sample_model(&crate::model::ResolvedModel::All, n, *seed, *count)? {
                if !truths.contains(&p) {
                    truths.push(p);
                }
            }
        }
    }
    if truths.is_empty() {
        return Err(Error::EmptyTruthSet);
    }
    Ok(truths)
}

/// Runs the sum-constancy check over the selected truths.
///
/// A truth whose score is undefined (SMI's zero-variance ground truth) is
/// recorded and excluded rather than failing the run. Exhaustive sweeps
/// whose total evaluation count exceeds [`VERIFY_BUDGET`] are refused.
pub fn verify_generalizer_independence(
    scorer: &Scorer,
    spec: &MetricSpec,
    n: usize,
    truths: &TruthSelector,
    tolerance: f64,
) -> Result<NflReport> {
    let limit = match spec.method {
        Method::Exact { enum_limit } => enum_limit,
        Method::MonteCarlo { .. } => crate::model::DEFAULT_ENUM_LIMIT,
    };
    let selected = select_truths(truths, n, limit)?;
    if matches!(truths, TruthSelector::All) {
        let planned = planned_evaluations(spec, &selected)?;
        if planned > VERIFY_BUDGET {
            return Err(Error::BudgetExceeded {
                required: planned.to_string(),
                budget: VERIFY_BUDGET,
            });
        }
    }

    let mut per_truth = Vec::with_capacity(selected.len());
    let mut skipped = Vec::new();
    for t in &selected {
        match universe_sum(scorer, spec, t) {
            Ok(sum) => per_truth.push(TruthSum {
                truth: t.to_string(),
                sum,
            }),
            Err(Error::ZeroVariance) => skipped.push(t.to_string()),
            Err(e) => return Err(e),
        }
    }
    if per_truth.is_empty() {
        return Err(Error::EmptyTruthSet);
    }

    let lambda = per_truth
        .iter()
        .map(|ts| ts.sum)
        .collect::<KahanSum>()
        .value()
        / per_truth.len() as f64;
    let max_abs_deviation = per_truth
        .iter()
        .map(|ts| (ts.sum - lambda).abs())
        .fold(0.0f64, f64::max);

    let one = Partition::one_partition(n)?.to_string();
    let singles = Partition::singleton_partition(n)?.to_string();
    let boundary_deviation = per_truth
        .iter()
        .filter(|ts| ts.truth == one || ts.truth == singles)
        .map(|ts| (ts.sum - lambda).abs())
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        });

    let passes = max_abs_deviation <= tolerance;
    Ok(NflReport {
        n,
        metric: spec.clone(),
        truths_tested: truths.clone(),
        per_truth,
        lambda,
        max_abs_deviation,
        boundary_deviation,
        skipped_degenerate: skipped,
        tolerance,
        passes,
    })
}

/// Free-morsel measurements for one element count.
#[derive(Clone, Debug, Serialize)]
pub struct FreeMorselEntry {
    pub n: usize,
    /// Common interior universe-sum value (mean over interior truths).
    pub interior_sum: f64,
    /// Largest deviation of an interior truth from the common value.
    pub max_interior_deviation: f64,
    pub sum_one_partition: f64,
    pub sum_singleton_partition: f64,
    /// Largest boundary deviation from the interior value.
    pub boundary_gap: f64,
    /// `B_n` as a decimal string.
    pub bell: String,
    /// Boundary gap divided by the universe size `B_n`.
    pub normalized_gap: f64,
    pub inv_bell: f64,
}

/// Boundary-versus-interior report for AMI under a random model, across
/// `n = 3..=max_n`.
#[derive(Clone, Debug, Serialize)]
pub struct FreeMorselReport {
    pub model: RandomModel,
    pub normalization: Normalization,
    pub entries: Vec<FreeMorselEntry>,
    /// Whether `normalized_gap` is strictly decreasing in `n`.
    pub gap_decreases: bool,
}

/// Measures how far AMI under `model` is from exact generalizer-independence
/// at the boundary truths, for every `n` in `3..=max_n`.
pub fn free_morsel_report(
    scorer: &Scorer,
    max_n: usize,
    normalization: Normalization,
    model: &RandomModel,
    enum_limit: usize,
) -> Result<FreeMorselReport> {
    if max_n < 3 {
        return Err(Error::EmptyInterior { n: max_n });
    }
    let mut entries = Vec::new();
    for n in 3..=max_n {
        let spec = MetricSpec::new(MetricName::Ami, model.clone())
            .with_normalization(normalization)
            .with_method(Method::Exact { enum_limit });

        let truths = select_truths(&TruthSelector::All, n, enum_limit)?;
        let planned = planned_evaluations(&spec, &truths)?;
        if planned > VERIFY_BUDGET {
            return Err(Error::BudgetExceeded {
                required: planned.to_string(),
                budget: VERIFY_BUDGET,
            });
        }

        let mut interior = KahanSum::new();
        let mut interior_sums = Vec::new();
        let mut sum_one = 0.0;
        let mut sum_singletons = 0.0;
        for t in &truths {
            let s = universe_sum(scorer, &spec, t)?;
            if t.is_one_partition() {
                sum_one = s;
            } else if t.is_singleton_partition() {
                sum_singletons = s;
            } else {
                interior.add(s);
                interior_sums.push(s);
            }
        }
        let interior_sum = interior.value() / interior_sums.len() as f64;
        let max_interior_deviation = interior_sums
            .iter()
            .map(|s| (s - interior_sum).abs())
            .fold(0.0f64, f64::max);
        let boundary_gap = (sum_one - interior_sum)
            .abs()
            .max((sum_singletons - interior_sum).abs());
        let bell_n = bell(n)?;
        let bell_f = bell_n.to_f64().unwrap_or(f64::INFINITY);
        entries.push(FreeMorselEntry {
            n,
            interior_sum,
            max_interior_deviation,
            sum_one_partition: sum_one,
            sum_singleton_partition: sum_singletons,
            boundary_gap,
            bell: bell_n.to_string(),
            normalized_gap: boundary_gap / bell_f,
            inv_bell: 1.0 / bell_f,
        });
    }
    let gap_decreases = entries
        .windows(2)
        .all(|w| w[1].normalized_gap < w[0].normalized_gap);
    Ok(FreeMorselReport {
        model: model.clone(),
        normalization,
        entries,
        gap_decreases,
    })
}
