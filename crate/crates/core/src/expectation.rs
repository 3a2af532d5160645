//! Exact and Monte Carlo estimation of `E[stat(C', t)]` and
//! `Var[stat(C', t)]` under a one-sided random model: `C'` drawn uniformly
//! from the model's universe, `t` held fixed.
//!
//! Exact estimates average the statistic over the full universe via the law
//! of the unconscious statistician; Monte Carlo estimates carry a standard
//! error. Expectations are cached per (moment, statistic, truth, model,
//! method) because the verification harness reuses the same expectation
//! across every prediction scored against one truth.

use std::collections::HashMap;
use std::sync::RwLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::enumerate_model;
use crate::error::{Error, Result};
use crate::info::{mutual_information, nmi, rand_index, NmiNormalization};
use crate::model::{RandomModel, ResolvedModel, DEFAULT_ENUM_LIMIT};
use crate::numeric::KahanSum;
use crate::partition::{ContingencyTable, Partition};
use crate::sample::ModelSampler;

/// The raw statistic an expectation ranges over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stat {
    /// Mutual information, nats.
    MutualInformation,
    /// Max-normalized NMI with the identical-1-partitions := 1 convention
    /// (the building block of corrected NMI).
    Nmi,
    /// Rand index.
    RandIndex,
}

impl Stat {
    pub fn evaluate(&self, c: &Partition, t: &Partition) -> Result<f64> {
        match self {
            Stat::MutualInformation => Ok(mutual_information(&ContingencyTable::from_partitions(
                c, t,
            )?)),
            Stat::Nmi => nmi(c, t, NmiNormalization::Max),
            Stat::RandIndex => rand_index(&ContingencyTable::from_partitions(c, t)?),
        }
    }
}

/// How an expectation is computed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    /// Full enumeration of the universe; refused above `enum_limit`.
    Exact { enum_limit: usize },
    /// Seeded uniform sampling.
    MonteCarlo { samples: u64, seed: u64 },
}

impl Default for Method {
    fn default() -> Self {
        Method::Exact {
            enum_limit: DEFAULT_ENUM_LIMIT,
        }
    }
}

/// An estimated moment with its provenance.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ExpectationEstimate {
    pub mean: f64,
    /// Sample standard deviation (Monte Carlo only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std: Option<f64>,
    pub method: EstimateMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// `sample std / sqrt(samples)` (Monte Carlo only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    Exact,
    MonteCarlo,
}

impl ExpectationEstimate {
    pub(crate) fn exact(mean: f64) -> Self {
        ExpectationEstimate {
            mean,
            std: None,
            method: EstimateMethod::Exact,
            samples: None,
            stderr: None,
        }
    }
}

/// `E[stat(C', t)]` under the model, one-sided.
pub fn expected_stat(
    stat: Stat,
    t: &Partition,
    model: &RandomModel,
    method: &Method,
) -> Result<ExpectationEstimate> {
    moment(Moment::Mean, stat, t, model, method)
}

/// `Var[stat(C', t)]` under the model: population variance when exact,
/// unbiased sample variance under Monte Carlo.
pub fn variance_stat(
    stat: Stat,
    t: &Partition,
    model: &RandomModel,
    method: &Method,
) -> Result<ExpectationEstimate> {
    moment(Moment::Variance, stat, t, model, method)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Moment {
    Mean,
    Variance,
}

fn moment(
    which: Moment,
    stat: Stat,
    t: &Partition,
    model: &RandomModel,
    method: &Method,
) -> Result<ExpectationEstimate> {
    let resolved = model.resolve(t);
    moment_resolved(which, stat, t, &resolved, method)
}

pub(crate) fn moment_resolved(
    which: Moment,
    stat: Stat,
    t: &Partition,
    resolved: &ResolvedModel,
    method: &Method,
) -> Result<ExpectationEstimate> {
    resolved.validate(t.n())?;
    match method {
        Method::Exact { enum_limit } => exact_moment(which, stat, t, resolved, *enum_limit),
        Method::MonteCarlo { samples, seed } => {
            mc_moment(which, stat, t, resolved, *samples, *seed)
        }
    }
}

fn exact_moment(
    which: Moment,
    stat: Stat,
    t: &Partition,
    model: &ResolvedModel,
    limit: usize,
) -> Result<ExpectationEstimate> {
    let n = t.n();
    let mut acc = KahanSum::new();
    let mut count = 0u64;
    for c in enumerate_model(model, n, limit)? {
        acc.add(stat.evaluate(&c, t)?);
        count += 1;
    }
    let mean = acc.value() / count as f64;
    match which {
        Moment::Mean => Ok(ExpectationEstimate::exact(mean)),
        Moment::Variance => {
            // Second pass keeps the accumulation order fixed and avoids the
            // cancellation of E[x^2] - E[x]^2.
            let mut dev = KahanSum::new();
            for c in enumerate_model(model, n, limit)? {
                let d = stat.evaluate(&c, t)? - mean;
                dev.add(d * d);
            }
            Ok(ExpectationEstimate::exact(dev.value() / count as f64))
        }
    }
}

fn mc_moment(
    which: Moment,
    stat: Stat,
    t: &Partition,
    model: &ResolvedModel,
    samples: u64,
    seed: u64,
) -> Result<ExpectationEstimate> {
    if samples < 2 {
        return Err(Error::TooFewSamples { samples });
    }
    let sampler = ModelSampler::prepare(model, t.n())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let c = sampler.sample(&mut rng);
        values.push(stat.evaluate(&c, t)?);
    }
    let ns = samples as f64;
    let mean = values.iter().copied().collect::<KahanSum>().value() / ns;
    let central = |k: u32| -> f64 {
        values
            .iter()
            .map(|v| (v - mean).powi(k as i32))
            .collect::<KahanSum>()
            .value()
            / ns
    };
    let m2 = central(2);
    match which {
        Moment::Mean => {
            let sample_var = m2 * ns / (ns - 1.0);
            let std = sample_var.sqrt();
            Ok(ExpectationEstimate {
                mean,
                std: Some(std),
                method: EstimateMethod::MonteCarlo,
                samples: Some(samples),
                stderr: Some(std / ns.sqrt()),
            })
        }
        Moment::Variance => {
            let sample_var = m2 * ns / (ns - 1.0);
            // Standard error of the sample variance from the fourth central
            // moment: Var(s^2) ~= (m4 - m2^2 (ns-3)/(ns-1)) / ns.
            let m4 = central(4);
            let var_of_var = ((m4 - m2 * m2 * (ns - 3.0) / (ns - 1.0)) / ns).max(0.0);
            Ok(ExpectationEstimate {
                mean: sample_var,
                std: Some(m2.sqrt()),
                method: EstimateMethod::MonteCarlo,
                samples: Some(samples),
                stderr: Some(var_of_var.sqrt()),
            })
        }
    }
}

#[derive(PartialEq, Eq, Hash)]
struct CacheKey {
    which: Moment,
    stat: Stat,
    truth: Vec<usize>,
    model: ResolvedModel,
    method: Method,
}

/// Expectation cache: concurrent reads, exclusive inserts. Exact values are
/// keyed without the enumeration limit (the limit only gates work, it never
/// changes the value); Monte Carlo values are keyed by (samples, seed), so a
/// hit is bit-identical to a recomputation.
#[derive(Default)]
pub struct ExpectationCache {
    inner: RwLock<HashMap<CacheKey, ExpectationEstimate>>,
}

impl ExpectationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn moment(
        &self,
        which: Moment,
        stat: Stat,
        t: &Partition,
        resolved: &ResolvedModel,
        method: &Method,
    ) -> Result<ExpectationEstimate> {
        let key = CacheKey {
            which,
            stat,
            truth: t.assignment().to_vec(),
            model: resolved.clone(),
            method: match method {
                // Normalize the limit out of exact keys.
                Method::Exact { .. } => Method::Exact { enum_limit: 0 },
                mc => *mc,
            },
        };
        {
            let map = self.inner.read().expect("expectation cache poisoned");
            if let Some(hit) = map.get(&key) {
                return Ok(hit.clone());
            }
        }
        let computed = moment_resolved(which, stat, t, resolved, method)?;
        let mut map = self.inner.write().expect("expectation cache poisoned");
        Ok(map.entry(key).or_insert(computed).clone())
    }

    pub fn expectation(
        &self,
        stat: Stat,
        t: &Partition,
        resolved: &ResolvedModel,
        method: &Method,
    ) -> Result<ExpectationEstimate> {
        self.moment(Moment::Mean, stat, t, resolved, method)
    }

    pub fn variance(
        &self,
        stat: Stat,
        t: &Partition,
        resolved: &ResolvedModel,
        method: &Method,
    ) -> Result<ExpectationEstimate> {
        self.moment(Moment::Variance, stat, t, resolved, method)
    }
}
