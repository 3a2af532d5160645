//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by partition construction, combinatorics, and metrics.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A label sequence or assignment with no elements.
    #[error("empty input: a partition needs at least one element")]
    EmptyInput,

    /// An assignment that is not in restricted growth form.
    #[error("assignment is not a canonical restricted growth string at position {position}")]
    NotCanonical { position: usize },

    /// Two partitions over different numbers of elements.
    #[error("element count mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// An operation that needs at least `required` elements.
    #[error("need at least {required} elements, got {n}")]
    TooFewElements { n: usize, required: usize },

    /// Bell number request above the configured hard limit.
    #[error("bell({n}) exceeds the hard limit of {limit}")]
    BellLimitExceeded { n: usize, limit: usize },

    /// Block count outside 1..=n (Stirling numbers, fixed-block-count model).
    #[error("block count {k} out of range for {n} elements")]
    BlockCountOutOfRange { n: usize, k: usize },

    /// A shape whose sizes do not sum to the element count.
    #[error("shape sums to {shape_sum}, expected {expected}")]
    ShapeSumMismatch { expected: usize, shape_sum: usize },

    /// A shape containing a zero-sized block.
    #[error("shape sizes must be positive")]
    ZeroShapeSize,

    /// The interior universe is empty below three elements.
    #[error("the interior universe is empty for n = {n}; it needs n >= 3")]
    EmptyInterior { n: usize },

    /// Full enumeration requested above the configured limit.
    #[error("enumeration of n = {n} exceeds the limit of {limit}")]
    EnumerationLimitExceeded { n: usize, limit: usize },

    /// Monte Carlo estimation with fewer than two samples.
    #[error("monte carlo needs at least 2 samples, got {samples}")]
    TooFewSamples { samples: u64 },

    /// A normalized metric whose denominator vanished for `c != t`.
    #[error("degenerate denominator in {metric}: normalizer equals the expectation")]
    DegenerateDenominator { metric: &'static str },

    /// SMI against a ground truth whose score variance is zero.
    #[error("degenerate ground truth: the statistic has zero variance under the model")]
    ZeroVariance,

    /// An exhaustive verification pass that would exceed the work budget.
    #[error("verification would need {required} score evaluations, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },

    /// A truth selector that resolved to no partitions.
    #[error("empty truth set")]
    EmptyTruthSet,
}

pub type Result<T> = std::result::Result<T, Error>;
