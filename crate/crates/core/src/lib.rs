//! Comparing set partitions (clusterings, community assignments) against a
//! ground truth with chance-adjusted measures whose baseline expectation is
//! taken over an explicit random model, plus a harness that certifies
//! empirically whether a measure's universe sum is independent of the
//! ground truth.
//!
//! The crate is organized around five pieces:
//!
//! * [`partition`] — canonical restricted-growth-string partitions, shapes,
//!   contingency tables;
//! * [`combinatorics`] — exact Bell/Stirling/shape counts,
//!   arbitrary-precision;
//! * [`enumerate`] / [`sample`] — exhaustive streams and seed-deterministic
//!   uniform samplers for each universe;
//! * [`info`] / [`expectation`] / [`metrics`] — raw statistics, their
//!   model expectations, and the adjusted measures built from both;
//! * [`nfl`] — universe sums, the generalizer-independence check, and the
//!   boundary ("free morsel") report.

pub mod combinatorics;
pub mod enumerate;
pub mod error;
pub mod expectation;
pub mod info;
pub mod metrics;
pub mod model;
pub mod nfl;
pub mod numeric;
pub mod partition;
pub mod sample;

pub use combinatorics::{bell, count_with_shape, enumerate_shapes, stirling2, BigCount};
pub use enumerate::{count_model, enumerate_model, RgsIterator};
pub use error::{Error, Result};
pub use expectation::{
    expected_stat, variance_stat, EstimateMethod, ExpectationCache, ExpectationEstimate, Method,
    Stat,
};
pub use info::{entropy, joint_entropy, mutual_information, nmi, rand_index, NmiNormalization};
pub use metrics::{loss, MetricName, MetricSpec, Normalization, Score, Scorer};
pub use model::{RandomModel, ResolvedModel, DEFAULT_ENUM_LIMIT};
pub use nfl::{
    free_morsel_report, universe_sum, verify_generalizer_independence, FreeMorselReport, NflReport,
    TruthSelector,
};
pub use numeric::KahanSum;
pub use partition::{ContingencyTable, Partition, PartitionShape};
pub use sample::{sample_model, sample_uniform, ModelSampler};
