//! Chance-adjusted comparison measures, each parameterized by an explicit
//! random model for the chance baseline.
//!
//! Every adjusted measure here has the shape "observed score minus expected
//! score", optionally normalized. The expectation is one-sided: the
//! prediction side varies over the model's universe while the ground truth
//! stays fixed. Two normalizations ship for the AMI family:
//!
//! * `ConstantLogN` divides by `ln n - E[I]`;
//! * `MaxEntropy` divides by `max over the universe of I(C', t) - E[I]`,
//!   and that maximum is `H(t)`, attained by any refinement of `t`.
//!
//! Both normalizers are constant in the prediction for a fixed truth, which
//! is what makes the sum of scores over the universe independent of the
//! truth. Normalizing by `max(H(c), H(t))` of the actual pair would break
//! that constancy, so it is deliberately not offered here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expectation::{ExpectationCache, ExpectationEstimate, Method, Stat};
use crate::info::{entropy, mutual_information, nmi, rand_index, NmiNormalization};
use crate::model::RandomModel;
use crate::partition::{ContingencyTable, Partition};

/// Below this magnitude a normalized metric's denominator counts as zero;
/// it only vanishes when the expectation meets the normalizer, which pins
/// the score to 1 for a perfect match and leaves it undefined otherwise.
const DEGENERATE_DEN_EPS: f64 = 1e-12;

/// Normalizations for the AMI family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Normalization {
    /// `ln n`, constant over everything.
    #[serde(rename = "constant-logn")]
    ConstantLogN,
    /// The largest mutual information attainable against the fixed truth,
    /// `H(t)`; makes the self-match score exactly 1.
    #[serde(rename = "max-entropy")]
    MaxEntropy,
}

/// Named measures.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricName {
    Nmi,
    Ami,
    Ari,
    Rnmi,
    Rrnmi,
    Cnmi,
    Smi,
    Kappa,
}

/// A fully specified metric: which measure, over which random model, with
/// which normalization and estimation method.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MetricSpec {
    pub name: MetricName,
    pub model: RandomModel,
    pub normalization: Normalization,
    pub method: Method,
}

impl MetricSpec {
    pub fn new(name: MetricName, model: RandomModel) -> Self {
        MetricSpec {
            name,
            model,
            normalization: Normalization::ConstantLogN,
            method: Method::default(),
        }
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

/// A metric value with the expectation and normalizer that produced it.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Score {
    pub value: f64,
    /// The chance baseline subtracted from the observed statistic; absent
    /// for plain NMI, which is not chance-adjusted.
    pub expectation_used: Option<ExpectationEstimate>,
    /// The denominator the centered statistic was divided by (1.0 for the
    /// unnormalized rNMI).
    pub normalizer_used: f64,
}

impl Score {
    fn new(value: f64, expectation: Option<ExpectationEstimate>, normalizer: f64) -> Self {
        Score {
            value,
            expectation_used: expectation,
            normalizer_used: normalizer,
        }
    }
}

/// The loss transform `L = 1 - score` for normalized metrics: zero at a
/// perfect match under max-entropy normalization, positive otherwise.
pub fn loss(score: &Score) -> f64 {
    1.0 - score.value
}

/// Scores partitions against ground truths, caching expectations across
/// calls. Cheap to construct; share one per batch of related scorings so
/// repeated truths hit the cache.
#[derive(Default)]
pub struct Scorer {
    cache: ExpectationCache,
}

impl Scorer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cache(&self) -> &ExpectationCache {
        &self.cache
    }

    fn check_pair(c: &Partition, t: &Partition) -> Result<()> {
        if c.n() != t.n() {
            return Err(Error::LengthMismatch {
                left: c.n(),
                right: t.n(),
            });
        }
        Ok(())
    }

    /// Adjusted mutual information:
    /// `(I(c,t) - E[I(C',t)]) / (normalizer - E[I(C',t)])`.
    ///
    /// A zero-entropy truth forces both `I` and `E[I]` to zero, so the
    /// centered score is 0 for every prediction. The denominator vanishes
    /// only when the expectation reaches the normalizer (a single-member
    /// universe); the self-match then scores 1 and anything else is a
    /// degenerate-denominator error. At n = 1 under constant-log-n the
    /// normalizer itself is zero, which is an error.
    pub fn ami(
        &self,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        normalization: Normalization,
        method: &Method,
    ) -> Result<Score> {
        Self::check_pair(c, t)?;
        let n = t.n();
        if n == 1 && normalization == Normalization::ConstantLogN {
            return Err(Error::DegenerateDenominator { metric: "ami" });
        }
        let h_t = entropy(t);
        if h_t == 0.0 {
            let normalizer = match normalization {
                Normalization::ConstantLogN => (n as f64).ln(),
                Normalization::MaxEntropy => 0.0,
            };
            return Ok(Score::new(
                0.0,
                Some(ExpectationEstimate::exact(0.0)),
                normalizer,
            ));
        }
        let resolved = model.resolve(t);
        let e = self
            .cache
            .expectation(Stat::MutualInformation, t, &resolved, method)?;
        let normalizer = match normalization {
            Normalization::ConstantLogN => (n as f64).ln(),
            Normalization::MaxEntropy => h_t,
        };
        let i = mutual_information(&ContingencyTable::from_partitions(c, t)?);
        let num = i - e.mean;
        let den = normalizer - e.mean;
        if den.abs() <= DEGENERATE_DEN_EPS {
            return if c == t {
                Ok(Score::new(1.0, Some(e), normalizer))
            } else {
                Err(Error::DegenerateDenominator { metric: "ami" })
            };
        }
        Ok(Score::new(num / den, Some(e), normalizer))
    }

    /// Adjusted Rand index: `(RI - E[RI]) / (1 - E[RI])`.
    pub fn ari(
        &self,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        method: &Method,
    ) -> Result<Score> {
        self.pair_agreement("ari", c, t, model, method)
    }

    /// Cohen's kappa realized as chance-corrected pair agreement under the
    /// chosen model; numerically identical to `ari` by construction, kept as
    /// a named alias so reports can cite it explicitly.
    pub fn kappa(
        &self,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        method: &Method,
    ) -> Result<Score> {
        self.pair_agreement("kappa", c, t, model, method)
    }

    fn pair_agreement(
        &self,
        metric: &'static str,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        method: &Method,
    ) -> Result<Score> {
        Self::check_pair(c, t)?;
        if t.n() < 2 {
            return Err(Error::TooFewElements {
                n: t.n(),
                required: 2,
            });
        }
        let resolved = model.resolve(t);
        let e = self
            .cache
            .expectation(Stat::RandIndex, t, &resolved, method)?;
        let ri = rand_index(&ContingencyTable::from_partitions(c, t)?)?;
        let num = ri - e.mean;
        let den = 1.0 - e.mean;
        if den.abs() <= DEGENERATE_DEN_EPS {
            return if c == t {
                Ok(Score::new(1.0, Some(e), 1.0))
            } else {
                Err(Error::DegenerateDenominator { metric })
            };
        }
        Ok(Score::new(num / den, Some(e), 1.0))
    }

    /// Relative NMI: the unnormalized AMI numerator `I(c,t) - E[I(C',t)]`,
    /// in nats.
    ///
    /// This is the "drop the denominator" reading; the variant that
    /// subtracts an expected NMI instead is exactly the numerator of
    /// [`Scorer::cnmi`].
    pub fn rnmi(
        &self,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        method: &Method,
    ) -> Result<Score> {
        Self::check_pair(c, t)?;
        if entropy(t) == 0.0 {
            return Ok(Score::new(0.0, Some(ExpectationEstimate::exact(0.0)), 1.0));
        }
        let resolved = model.resolve(t);
        let e = self
            .cache
            .expectation(Stat::MutualInformation, t, &resolved, method)?;
        let i = mutual_information(&ContingencyTable::from_partitions(c, t)?);
        Ok(Score::new(i - e.mean, Some(e), 1.0))
    }

    /// Ratio of relative NMI; identical to one-sided AMI, so it delegates
    /// and is bit-for-bit equal.
    pub fn rrnmi(
        &self,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        normalization: Normalization,
        method: &Method,
    ) -> Result<Score> {
        self.ami(c, t, model, normalization, method)
    }

    /// Corrected NMI, one-sided:
    /// `(NMI(c,t) - E[NMI(C',t)]) / (1 - E[NMI(C',c)])`.
    ///
    /// The denominator expectation runs against `c`, not `t`. Inner NMI is
    /// max-normalized with NMI(1-partition, 1-partition) := 1, and the
    /// expectations run over the full universe including the identity
    /// member. The model's shape parameter resolves against `t` once and
    /// the same universe serves both expectations.
    pub fn cnmi(
        &self,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        method: &Method,
    ) -> Result<Score> {
        Self::check_pair(c, t)?;
        let resolved = model.resolve(t);
        let e_t = self.cache.expectation(Stat::Nmi, t, &resolved, method)?;
        let e_c = self.cache.expectation(Stat::Nmi, c, &resolved, method)?;
        let observed = nmi(c, t, NmiNormalization::Max)?;
        let num = observed - e_t.mean;
        let den = 1.0 - e_c.mean;
        if den.abs() <= DEGENERATE_DEN_EPS {
            return if c == t {
                Ok(Score::new(1.0, Some(e_t), den))
            } else {
                Err(Error::DegenerateDenominator { metric: "cnmi" })
            };
        }
        Ok(Score::new(num / den, Some(e_t), den))
    }

    /// Standardized mutual information:
    /// `(I(c,t) - E[I(C',t)]) / sqrt(Var[I(C',t)])`.
    ///
    /// A zero-entropy truth makes `I` constant over every universe, so the
    /// variance vanishes and the score is a degenerate-ground-truth error
    /// rather than a value.
    pub fn smi(
        &self,
        c: &Partition,
        t: &Partition,
        model: &RandomModel,
        method: &Method,
    ) -> Result<Score> {
        Self::check_pair(c, t)?;
        if entropy(t) == 0.0 {
            return Err(Error::ZeroVariance);
        }
        let resolved = model.resolve(t);
        let var = self
            .cache
            .variance(Stat::MutualInformation, t, &resolved, method)?;
        if var.mean <= 0.0 {
            return Err(Error::ZeroVariance);
        }
        let e = self
            .cache
            .expectation(Stat::MutualInformation, t, &resolved, method)?;
        let i = mutual_information(&ContingencyTable::from_partitions(c, t)?);
        let sd = var.mean.sqrt();
        Ok(Score::new((i - e.mean) / sd, Some(e), sd))
    }

    /// Plain NMI as a scored metric; ignores the random model.
    pub fn nmi_score(
        &self,
        c: &Partition,
        t: &Partition,
        normalization: NmiNormalization,
    ) -> Result<Score> {
        let value = nmi(c, t, normalization)?;
        let normalizer = match normalization {
            NmiNormalization::Max => entropy(c).max(entropy(t)),
            NmiNormalization::Joint => {
                crate::info::joint_entropy(&ContingencyTable::from_partitions(c, t)?)
            }
            NmiNormalization::ConstantLogN => (t.n() as f64).ln(),
        };
        Ok(Score::new(value, None, normalizer))
    }

    /// Dispatches on the metric name in a spec.
    pub fn score(&self, spec: &MetricSpec, c: &Partition, t: &Partition) -> Result<Score> {
        match spec.name {
            MetricName::Nmi => {
                let norm = match spec.normalization {
                    Normalization::ConstantLogN => NmiNormalization::ConstantLogN,
                    Normalization::MaxEntropy => NmiNormalization::Max,
                };
                self.nmi_score(c, t, norm)
            }
            MetricName::Ami => self.ami(c, t, &spec.model, spec.normalization, &spec.method),
            MetricName::Ari => self.ari(c, t, &spec.model, &spec.method),
            MetricName::Rnmi => self.rnmi(c, t, &spec.model, &spec.method),
            MetricName::Rrnmi => self.rrnmi(c, t, &spec.model, spec.normalization, &spec.method),
            MetricName::Cnmi => self.cnmi(c, t, &spec.model, &spec.method),
            MetricName::Smi => self.smi(c, t, &spec.model, &spec.method),
            MetricName::Kappa => self.kappa(c, t, &spec.model, &spec.method),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::from_assignment(v.to_vec()).unwrap()
    }

    const LN2: f64 = std::f64::consts::LN_2;

    fn scorer() -> Scorer {
        Scorer::new()
    }

    #[test]
    fn ami_n2_hand_enumeration_exact() {
        // E = (ln 2)/2 over the two-partition universe; scores are exactly
        // +1 and -1 in floats.
        let s = scorer();
        let one = part(&[0, 0]);
        let single = part(&[0, 1]);
        let plus = s
            .ami(
                &single,
                &single,
                &RandomModel::All,
                Normalization::ConstantLogN,
                &Method::default(),
            )
            .unwrap();
        assert_eq!(plus.value, 1.0);
        assert_eq!(plus.expectation_used.as_ref().unwrap().mean, LN2 / 2.0);
        let minus = s
            .ami(
                &one,
                &single,
                &RandomModel::All,
                Normalization::ConstantLogN,
                &Method::default(),
            )
            .unwrap();
        assert_eq!(minus.value, -1.0);
    }

    #[test]
    fn ami_zero_entropy_truth_scores_zero() {
        let s = scorer();
        let t = part(&[0, 0, 0]);
        for c in [part(&[0, 0, 0]), part(&[0, 0, 1]), part(&[0, 1, 2])] {
            let score = s
                .ami(
                    &c,
                    &t,
                    &RandomModel::All,
                    Normalization::ConstantLogN,
                    &Method::default(),
                )
                .unwrap();
            assert_eq!(score.value, 0.0);
        }
    }

    #[test]
    fn ami_self_match_is_one_under_max_entropy() {
        let s = scorer();
        for v in [vec![0, 0, 1], vec![0, 1, 1, 2], vec![0, 1, 2, 3, 4]] {
            let t = part(&v);
            let score = s
                .ami(
                    &t,
                    &t,
                    &RandomModel::All,
                    Normalization::MaxEntropy,
                    &Method::default(),
                )
                .unwrap();
            assert_eq!(score.value, 1.0, "self match for {v:?}");
        }
    }

    #[test]
    fn ami_frozen_n3_values() {
        let s = scorer();
        let c = part(&[0, 0, 1]);
        let t = part(&[0, 1, 1]);
        let clogn = s
            .ami(
                &c,
                &t,
                &RandomModel::All,
                Normalization::ConstantLogN,
                &Method::default(),
            )
            .unwrap();
        assert!((clogn.value - -0.1936815450069424).abs() < 1e-15);
        let maxe = s
            .ami(
                &c,
                &t,
                &RandomModel::All,
                Normalization::MaxEntropy,
                &Method::default(),
            )
            .unwrap();
        assert!((maxe.value - -0.48040955482932624).abs() < 1e-15);
    }

    #[test]
    fn ami_degenerate_single_member_universe() {
        // Perm model with the all-singletons shape: the universe is only the
        // N-partition, the expectation meets the normalizer, and only the
        // self match is defined.
        let s = scorer();
        let single = part(&[0, 1, 2]);
        let other = part(&[0, 0, 1]);
        let model = RandomModel::Perm { shape: None };
        let self_match = s
            .ami(
                &single,
                &single,
                &model,
                Normalization::ConstantLogN,
                &Method::default(),
            )
            .unwrap();
        assert_eq!(self_match.value, 1.0);
        let err = s
            .ami(
                &other,
                &single,
                &model,
                Normalization::ConstantLogN,
                &Method::default(),
            )
            .unwrap_err();
        assert_eq!(err, Error::DegenerateDenominator { metric: "ami" });
    }

    #[test]
    fn ami_n1_constant_logn_is_degenerate() {
        let s = scorer();
        let p = part(&[0]);
        let err = s
            .ami(
                &p,
                &p,
                &RandomModel::All,
                Normalization::ConstantLogN,
                &Method::default(),
            )
            .unwrap_err();
        assert_eq!(err, Error::DegenerateDenominator { metric: "ami" });
    }

    #[test]
    fn ari_self_match_and_frozen_value() {
        let s = scorer();
        let c = part(&[0, 0, 1]);
        let t = part(&[0, 1, 1]);
        let self_match = s
            .ari(&t, &t, &RandomModel::All, &Method::default())
            .unwrap();
        assert_eq!(self_match.value, 1.0);
        // (1/3 - 8/15) / (1 - 8/15) = -3/7 from the five-partition universe.
        let v = s
            .ari(&c, &t, &RandomModel::All, &Method::default())
            .unwrap();
        assert!((v.value - (-3.0 / 7.0)).abs() < 1e-14);
    }

    #[test]
    fn kappa_equals_ari() {
        let s = scorer();
        let c = part(&[0, 1, 0, 2]);
        let t = part(&[0, 0, 1, 1]);
        let a = s
            .ari(&c, &t, &RandomModel::All, &Method::default())
            .unwrap();
        let k = s
            .kappa(&c, &t, &RandomModel::All, &Method::default())
            .unwrap();
        assert_eq!(a.value, k.value);
    }

    #[test]
    fn rnmi_centering_and_boundary() {
        let s = scorer();
        let t = part(&[0, 1]);
        let v = s
            .rnmi(&part(&[0, 1]), &t, &RandomModel::All, &Method::default())
            .unwrap();
        assert_eq!(v.value, LN2 / 2.0);
        let z = s
            .rnmi(
                &part(&[0, 1]),
                &part(&[0, 0]),
                &RandomModel::All,
                &Method::default(),
            )
            .unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn rrnmi_is_bit_identical_to_ami() {
        let s = scorer();
        let c = part(&[0, 1, 0, 2, 1]);
        let t = part(&[0, 0, 1, 1, 2]);
        for norm in [Normalization::ConstantLogN, Normalization::MaxEntropy] {
            let a = s
                .ami(&c, &t, &RandomModel::All, norm, &Method::default())
                .unwrap();
            let r = s
                .rrnmi(&c, &t, &RandomModel::All, norm, &Method::default())
                .unwrap();
            assert_eq!(a.value.to_bits(), r.value.to_bits());
        }
    }

    #[test]
    fn cnmi_frozen_values() {
        let s = scorer();
        let c = part(&[0, 0, 1]);
        let t = part(&[0, 1, 1]);
        let v = s
            .cnmi(&c, &t, &RandomModel::All, &Method::default())
            .unwrap();
        assert!((v.value - -0.2636397542435753).abs() < 1e-15);
        // N-partition against the 1-partition truth at n = 3.
        let w = s
            .cnmi(
                &part(&[0, 1, 2]),
                &part(&[0, 0, 0]),
                &RandomModel::All,
                &Method::default(),
            )
            .unwrap();
        assert!((w.value - -0.44211410869774037).abs() < 1e-15);
        // Numerator there is 0 - E[NMI(C', 1p)] = -1/5.
        assert!((w.expectation_used.as_ref().unwrap().mean - 0.2).abs() < 1e-15);
    }

    #[test]
    fn cnmi_self_match_is_exactly_one() {
        let s = scorer();
        for v in [vec![0, 0, 1], vec![0, 1, 1, 2], vec![0, 0, 0]] {
            let t = part(&v);
            let score = s
                .cnmi(&t, &t, &RandomModel::All, &Method::default())
                .unwrap();
            assert_eq!(score.value, 1.0, "t = {v:?}");
        }
    }

    #[test]
    fn smi_frozen_value_and_degenerate_truth() {
        let s = scorer();
        let c = part(&[0, 0, 1]);
        let t = part(&[0, 1, 1]);
        let v = s
            .smi(&c, &t, &RandomModel::All, &Method::default())
            .unwrap();
        assert!((v.value - -0.570826361144612).abs() < 1e-14);
        let err = s
            .smi(&c, &part(&[0, 0, 0]), &RandomModel::All, &Method::default())
            .unwrap_err();
        assert_eq!(err, Error::ZeroVariance);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let s = scorer();
        let err = s
            .ami(
                &part(&[0, 1]),
                &part(&[0, 1, 1]),
                &RandomModel::All,
                Normalization::ConstantLogN,
                &Method::default(),
            )
            .unwrap_err();
        assert_eq!(err, Error::LengthMismatch { left: 2, right: 3 });
    }

    #[test]
    fn loss_transform() {
        let mk = |v: f64| Score::new(v, None, 1.0);
        assert_eq!(loss(&mk(1.0)), 0.0);
        assert_eq!(loss(&mk(0.0)), 1.0);
        assert_eq!(loss(&mk(-1.0)), 2.0);
    }

    #[test]
    fn nmi_score_has_no_expectation() {
        let s = scorer();
        let t = part(&[0, 0, 1]);
        let v = s.nmi_score(&t, &t, NmiNormalization::Max).unwrap();
        assert_eq!(v.value, 1.0);
        assert!(v.expectation_used.is_none());
    }
}
