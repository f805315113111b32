//! Deterministic and stochastic instances of `P || Σ w_j C_j`, processing-time
//! laws, and the Smith ordering shared by WSPT and WSEPT.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a finite-support law.
const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: String,
    pub weight: f64,
    pub ptime: f64,
}

impl Job {
    pub fn new(id: impl Into<String>, weight: f64, ptime: f64) -> Self {
        Self {
            id: id.into(),
            weight,
            ptime,
        }
    }

    pub fn smith_ratio(&self) -> f64 {
        self.weight / self.ptime
    }
}

/// Compares two Smith ratios `w1/p1` and `w2/p2` by cross-multiplication, falling
/// back to division when a product is not finite.
pub fn cmp_ratio(w1: f64, p1: f64, w2: f64, p2: f64) -> Ordering {
    let lhs = w1 * p2;
    let rhs = w2 * p1;
    if lhs.is_finite() && rhs.is_finite() {
        lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
    } else {
        (w1 / p1).partial_cmp(&(w2 / p2)).unwrap_or(Ordering::Equal)
    }
}

/// Indices sorted by non-increasing `weight/ptime`; equal ratios keep input order.
fn order_by_ratio(pairs: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| {
        let (wa, pa) = pairs[a];
        let (wb, pb) = pairs[b];
        cmp_ratio(wb, pb, wa, pa)
    });
    order
}

fn check_ids<'a>(ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::InvalidInstance(format!("duplicate job id `{id}`")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDeterministic")]
pub struct DeterministicInstance {
    machines: usize,
    jobs: Vec<Job>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDeterministic {
    machines: usize,
    jobs: Vec<Job>,
}

impl TryFrom<RawDeterministic> for DeterministicInstance {
    type Error = Error;

    fn try_from(raw: RawDeterministic) -> Result<Self> {
        Self::new(raw.machines, raw.jobs)
    }
}

impl DeterministicInstance {
    pub fn new(machines: usize, jobs: Vec<Job>) -> Result<Self> {
        if machines == 0 {
            return Err(Error::InvalidInstance("machine count must be at least 1".into()));
        }
        if jobs.is_empty() {
            return Err(Error::InvalidInstance("instance has no jobs".into()));
        }
        for job in &jobs {
            if !(job.weight.is_finite() && job.weight > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "job `{}` has non-positive weight {}",
                    job.id, job.weight
                )));
            }
            if !(job.ptime.is_finite() && job.ptime > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "job `{}` has non-positive processing time {}",
                    job.id, job.ptime
                )));
            }
        }
        check_ids(jobs.iter().map(|j| j.id.as_str()))?;
        Ok(Self { machines, jobs })
    }

    /// Builds an instance with ids `j1, j2, ...` from `(weight, ptime)` pairs.
    pub fn from_pairs(machines: usize, pairs: &[(f64, f64)]) -> Result<Self> {
        let jobs = pairs
            .iter()
            .enumerate()
            .map(|(i, &(w, p))| Job::new(format!("j{}", i + 1), w, p))
            .collect();
        Self::new(machines, jobs)
    }

    /// Unit Smith ratio instance (`w_j = p_j`) from processing times.
    pub fn unit_ratio(machines: usize, ptimes: &[f64]) -> Result<Self> {
        let pairs: Vec<_> = ptimes.iter().map(|&p| (p, p)).collect();
        Self::from_pairs(machines, &pairs)
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn with_machines(&self, machines: usize) -> Result<Self> {
        Self::new(machines, self.jobs.clone())
    }

    pub fn total_weighted_ptime(&self) -> f64 {
        self.jobs.iter().map(|j| j.weight * j.ptime).sum()
    }

    pub fn is_unit_ratio(&self) -> bool {
        self.jobs
            .iter()
            .all(|j| (j.weight - j.ptime).abs() <= 1e-12 * j.ptime.max(1.0))
    }

    /// Job indices in WSPT order: non-increasing `w/p`, ties by input order.
    pub fn smith_order(&self) -> Vec<usize> {
        let pairs: Vec<_> = self.jobs.iter().map(|j| (j.weight, j.ptime)).collect();
        order_by_ratio(&pairs)
    }

    /// Maximal runs of equal Smith ratio within [`smith_order`](Self::smith_order).
    pub fn tie_classes(&self) -> Vec<Vec<usize>> {
        let order = self.smith_order();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for idx in order {
            let job = &self.jobs[idx];
            match classes.last_mut() {
                Some(class) => {
                    let head = &self.jobs[class[0]];
                    if cmp_ratio(head.weight, head.ptime, job.weight, job.ptime) == Ordering::Equal {
                        class.push(idx);
                    } else {
                        classes.push(vec![idx]);
                    }
                }
                None => classes.push(vec![idx]),
            }
        }
        classes
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// Law of a processing time. All supports are strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Distribution {
    PointMass {
        value: f64,
    },
    Exponential {
        rate: f64,
    },
    /// `low` with probability `p_low`, otherwise `high`.
    TwoPoint {
        low: f64,
        high: f64,
        p_low: f64,
    },
    Discrete {
        values: Vec<f64>,
        probs: Vec<f64>,
    },
    Uniform {
        low: f64,
        high: f64,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl Distribution {
    pub fn two_point(low: f64, high: f64, p_low: f64) -> Self {
        Self::TwoPoint { low, high, p_low }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PointMass { value } => positive("point mass value", *value),
            Self::Exponential { rate } => positive("exponential rate", *rate),
            Self::TwoPoint { low, high, p_low } => {
                positive("two-point low value", *low)?;
                positive("two-point high value", *high)?;
                if !(0.0..=1.0).contains(p_low) {
                    return Err(Error::InvalidDistribution(format!(
                        "two-point probability {p_low} outside [0, 1]"
                    )));
                }
                Ok(())
            }
            Self::Discrete { values, probs } => {
                if values.is_empty() || values.len() != probs.len() {
                    return Err(Error::InvalidDistribution(
                        "discrete law needs equally many values and probabilities".into(),
                    ));
                }
                for &v in values {
                    positive("discrete support value", v)?;
                }
                if probs.iter().any(|&q| !(0.0..=1.0).contains(&q)) {
                    return Err(Error::InvalidDistribution(
                        "discrete probabilities must lie in [0, 1]".into(),
                    ));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > PROB_SUM_TOL {
                    return Err(Error::InvalidDistribution(format!(
                        "discrete probabilities sum to {total}, not 1"
                    )));
                }
                Ok(())
            }
            Self::Uniform { low, high } => {
                positive("uniform lower end", *low)?;
                if !(high.is_finite() && high >= low) {
                    return Err(Error::InvalidDistribution(format!(
                        "uniform upper end {high} below lower end {low}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::PointMass { value } => *value,
            Self::Exponential { rate } => 1.0 / rate,
            Self::TwoPoint { low, high, p_low } => p_low * low + (1.0 - p_low) * high,
            Self::Discrete { values, probs } => values.iter().zip(probs).map(|(v, q)| v * q).sum(),
            Self::Uniform { low, high } => 0.5 * (low + high),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Self::PointMass { .. } => 0.0,
            Self::Exponential { rate } => 1.0 / (rate * rate),
            Self::TwoPoint { low, high, p_low } => {
                let d = high - low;
                p_low * (1.0 - p_low) * d * d
            }
            Self::Discrete { values, probs } => {
                let mean = self.mean();
                values.iter().zip(probs).map(|(v, q)| q * (v - mean) * (v - mean)).sum()
            }
            Self::Uniform { low, high } => (high - low) * (high - low) / 12.0,
        }
    }

    /// Squared coefficient of variation `Var/E²`.
    pub fn scv(&self) -> Result<f64> {
        self.validate()?;
        let mean = self.mean();
        Ok(self.variance() / (mean * mean))
    }

    /// Finite support as `(value, probability)` pairs, zero-mass atoms dropped.
    /// `None` for continuous laws.
    pub fn support(&self) -> Option<Vec<(f64, f64)>> {
        let atoms = match self {
            Self::PointMass { value } => vec![(*value, 1.0)],
            Self::TwoPoint { low, high, p_low } => vec![(*low, *p_low), (*high, 1.0 - p_low)],
            Self::Discrete { values, probs } => values.iter().copied().zip(probs.iter().copied()).collect(),
            Self::Exponential { .. } | Self::Uniform { .. } => return None,
        };
        Some(atoms.into_iter().filter(|&(_, q)| q > 0.0).collect())
    }

    pub fn is_point_mass(&self) -> bool {
        matches!(self, Self::PointMass { .. })
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::PointMass { value } => *value,
            Self::Exponential { rate } => {
                // validated rate > 0; a zero draw has probability zero but is nudged away
                let exp = Exp::new(*rate).expect("validated rate");
                let x: f64 = exp.sample(rng);
                if x > 0.0 {
                    x
                } else {
                    f64::MIN_POSITIVE
                }
            }
            Self::TwoPoint { low, high, p_low } => {
                if rng.random::<f64>() < *p_low {
                    *low
                } else {
                    *high
                }
            }
            Self::Discrete { values, probs } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (v, q) in values.iter().zip(probs) {
                    acc += q;
                    if u < acc {
                        return *v;
                    }
                }
                *values.last().expect("nonempty support")
            }
            Self::Uniform { low, high } => {
                if high > low {
                    rng.random_range(*low..*high)
                } else {
                    *low
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StochasticJob {
    pub id: String,
    pub weight: f64,
    pub dist: Distribution,
}

impl StochasticJob {
    pub fn new(id: impl Into<String>, weight: f64, dist: Distribution) -> Self {
        Self {
            id: id.into(),
            weight,
            dist,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStochastic")]
pub struct StochasticInstance {
    machines: usize,
    jobs: Vec<StochasticJob>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStochastic {
    machines: usize,
    jobs: Vec<StochasticJob>,
}

impl TryFrom<RawStochastic> for StochasticInstance {
    type Error = Error;

    fn try_from(raw: RawStochastic) -> Result<Self> {
        Self::new(raw.machines, raw.jobs)
    }
}

impl StochasticInstance {
    pub fn new(machines: usize, jobs: Vec<StochasticJob>) -> Result<Self> {
        if machines == 0 {
            return Err(Error::InvalidInstance("machine count must be at least 1".into()));
        }
        if jobs.is_empty() {
            return Err(Error::InvalidInstance("instance has no jobs".into()));
        }
        for job in &jobs {
            if !(job.weight.is_finite() && job.weight > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "job `{}` has non-positive weight {}",
                    job.id, job.weight
                )));
            }
            job.dist.validate()?;
        }
        check_ids(jobs.iter().map(|j| j.id.as_str()))?;
        Ok(Self { machines, jobs })
    }

    /// Builds an instance with ids `j1, j2, ...`.
    pub fn from_parts(machines: usize, parts: Vec<(f64, Distribution)>) -> Result<Self> {
        let jobs = parts
            .into_iter()
            .enumerate()
            .map(|(i, (w, d))| StochasticJob::new(format!("j{}", i + 1), w, d))
            .collect();
        Self::new(machines, jobs)
    }

    /// Point-mass instance carrying the same jobs as `inst`.
    pub fn from_deterministic(inst: &DeterministicInstance) -> Self {
        let jobs = inst
            .jobs()
            .iter()
            .map(|j| StochasticJob::new(j.id.clone(), j.weight, Distribution::PointMass { value: j.ptime }))
            .collect();
        Self {
            machines: inst.machines(),
            jobs,
        }
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> &[StochasticJob] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn expected_ptimes(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| j.dist.mean()).collect()
    }

    /// Largest squared coefficient of variation over all jobs.
    pub fn delta(&self) -> f64 {
        self.jobs
            .iter()
            .map(|j| j.dist.scv().expect("validated at construction"))
            .fold(0.0, f64::max)
    }

    /// WSEPT priority: non-increasing `w_j / E[p_j]`, ties by input order.
    pub fn wsept_order(&self) -> Vec<usize> {
        let pairs: Vec<_> = self.jobs.iter().map(|j| (j.weight, j.dist.mean())).collect();
        order_by_ratio(&pairs)
    }

    /// The deterministic instance obtained by replacing each law by its mean.
    pub fn expected_instance(&self) -> DeterministicInstance {
        let jobs = self
            .jobs
            .iter()
            .map(|j| Job::new(j.id.clone(), j.weight, j.dist.mean()))
            .collect();
        DeterministicInstance {
            machines: self.machines,
            jobs,
        }
    }

    /// If every law is a point mass, the equivalent deterministic instance.
    pub fn as_deterministic(&self) -> Option<DeterministicInstance> {
        self.jobs
            .iter()
            .all(|j| j.dist.is_point_mass())
            .then(|| self.expected_instance())
    }

    /// Draws one realization `(p_1, ..., p_n)`. Job `j` uses its own ChaCha
    /// stream `j` under `seed`, so draws are independent across jobs and stable
    /// under appending jobs.
    pub fn sample_realization(&self, seed: u64) -> DeterministicInstance {
        let jobs = self
            .jobs
            .iter()
            .enumerate()
            .map(|(idx, j)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(idx as u64);
                Job::new(j.id.clone(), j.weight, j.dist.sample(&mut rng))
            })
            .collect();
        DeterministicInstance {
            machines: self.machines,
            jobs,
        }
    }

    /// Realization with the given processing times, weights and order preserved.
    pub fn realize(&self, ptimes: &[f64]) -> Result<DeterministicInstance> {
        if ptimes.len() != self.jobs.len() {
            return Err(Error::InvalidInstance(format!(
                "expected {} processing times, got {}",
                self.jobs.len(),
                ptimes.len()
            )));
        }
        let jobs = self
            .jobs
            .iter()
            .zip(ptimes)
            .map(|(j, &p)| Job::new(j.id.clone(), j.weight, p))
            .collect();
        DeterministicInstance::new(self.machines, jobs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// Either kind of instance file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyInstance {
    Deterministic(DeterministicInstance),
    Stochastic(StochasticInstance),
}

impl AnyInstance {
    /// Parses an instance file; a job carrying `dist` marks the stochastic form.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let stochastic = value
            .get("jobs")
            .and_then(|jobs| jobs.as_array())
            .map(|jobs| jobs.iter().any(|j| j.get("dist").is_some()))
            .unwrap_or(false);
        if stochastic {
            Ok(Self::Stochastic(serde_json::from_value(value)?))
        } else {
            Ok(Self::Deterministic(serde_json::from_value(value)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(inst: &DeterministicInstance, order: &[usize]) -> Vec<String> {
        order.iter().map(|&i| inst.jobs()[i].id.clone()).collect()
    }

    #[test]
    fn scv_examples() {
        assert_eq!(Distribution::PointMass { value: 5.0 }.scv().unwrap(), 0.0);
        assert!((Distribution::Exponential { rate: 2.0 }.scv().unwrap() - 1.0).abs() < 1e-15);
        let tp = Distribution::two_point(1.0, 3.0, 0.5);
        assert_eq!(tp.mean(), 2.0);
        assert_eq!(tp.variance(), 1.0);
        assert_eq!(tp.scv().unwrap(), 0.25);
        let uni = Distribution::Uniform { low: 1.0, high: 3.0 };
        assert!((uni.scv().unwrap() - (4.0 / 12.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_laws_rejected() {
        assert!(Distribution::Exponential { rate: 0.0 }.scv().is_err());
        assert!(Distribution::two_point(-1.0, 3.0, 0.5).validate().is_err());
        assert!(Distribution::two_point(1.0, 3.0, 1.5).validate().is_err());
        let bad = Distribution::Discrete {
            values: vec![1.0, 2.0],
            probs: vec![0.5, 0.6],
        };
        assert!(bad.validate().is_err());
        let bad = Distribution::Discrete {
            values: vec![1.0],
            probs: vec![0.5, 0.5],
        };
        assert!(bad.validate().is_err());
        assert!(Distribution::Uniform { low: 2.0, high: 1.0 }.validate().is_err());
    }

    #[test]
    fn delta_examples() {
        let pm = |v| Distribution::PointMass { value: v };
        let inst = StochasticInstance::from_parts(2, vec![(1.0, pm(1.0)), (2.0, pm(3.0))]).unwrap();
        assert_eq!(inst.delta(), 0.0);
        let exp = |r| Distribution::Exponential { rate: r };
        let inst = StochasticInstance::from_parts(2, vec![(1.0, exp(1.0)), (2.0, exp(0.5))]).unwrap();
        assert!((inst.delta() - 1.0).abs() < 1e-15);
        let inst =
            StochasticInstance::from_parts(2, vec![(1.0, pm(2.0)), (1.0, Distribution::two_point(1.0, 3.0, 0.5))])
                .unwrap();
        assert_eq!(inst.delta(), 0.25);
    }

    #[test]
    fn smith_order_examples() {
        let inst = DeterministicInstance::from_pairs(1, &[(2.0, 1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(ids(&inst, &inst.smith_order()), ["j1", "j2"]);
        let inst = DeterministicInstance::unit_ratio(2, &[3.0, 1.0, 2.0, 5.0]).unwrap();
        assert_eq!(inst.smith_order(), vec![0, 1, 2, 3]);
        let inst = DeterministicInstance::from_pairs(1, &[(1.0, 2.0), (3.0, 3.0), (2.0, 1.0)]).unwrap();
        assert_eq!(ids(&inst, &inst.smith_order()), ["j3", "j2", "j1"]);
    }

    #[test]
    fn cross_multiplication_sees_exact_ties() {
        let inst = DeterministicInstance::from_pairs(1, &[(1.0, 3.0), (3.0, 9.0), (2.0, 6.0)]).unwrap();
        assert_eq!(inst.tie_classes(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn wsept_order_examples() {
        let pm = |v| Distribution::PointMass { value: v };
        let inst = StochasticInstance::from_parts(2, vec![(1.0, pm(2.0)), (3.0, pm(3.0)), (2.0, pm(1.0))]).unwrap();
        assert_eq!(inst.wsept_order(), inst.sample_realization(7).smith_order());
        let exp = |r| Distribution::Exponential { rate: r };
        let inst = StochasticInstance::from_parts(2, vec![(1.0, exp(1.0)), (2.0, exp(1.0))]).unwrap();
        assert_eq!(inst.wsept_order(), vec![1, 0]);
        let inst = StochasticInstance::from_parts(
            2,
            vec![
                (2.0, exp(0.5)),
                (1.0, pm(1.0)),
                (3.0, Distribution::two_point(1.0, 5.0, 0.5)),
            ],
        )
        .unwrap();
        assert_eq!(inst.wsept_order(), vec![0, 1, 2]);
    }

    #[test]
    fn sampling_is_reproducible_and_positive() {
        let tp = Distribution::two_point(1.0, 3.0, 0.5);
        let inst = StochasticInstance::from_parts(2, vec![(1.0, tp); 4]).unwrap();
        let a = inst.sample_realization(42);
        let b = inst.sample_realization(42);
        assert_eq!(a, b);
        assert!(a.jobs().iter().all(|j| j.ptime == 1.0 || j.ptime == 3.0));

        let pm = StochasticInstance::from_parts(1, vec![(1.0, Distribution::PointMass { value: 4.5 })]).unwrap();
        assert_eq!(pm.sample_realization(3).jobs()[0].ptime, 4.5);

        let exp = StochasticInstance::from_parts(3, vec![(1.0, Distribution::Exponential { rate: 3.0 }); 50]).unwrap();
        for seed in 0..20 {
            assert!(exp.sample_realization(seed).jobs().iter().all(|j| j.ptime > 0.0));
        }
    }

    #[test]
    fn invalid_instances_rejected() {
        assert!(DeterministicInstance::from_pairs(0, &[(1.0, 1.0)]).is_err());
        assert!(DeterministicInstance::from_pairs(1, &[]).is_err());
        assert!(DeterministicInstance::from_pairs(1, &[(0.0, 1.0)]).is_err());
        assert!(DeterministicInstance::from_pairs(1, &[(1.0, -1.0)]).is_err());
        let dup = vec![Job::new("a", 1.0, 1.0), Job::new("a", 1.0, 2.0)];
        assert!(DeterministicInstance::new(1, dup).is_err());
    }

    #[test]
    fn file_format_round_trip() {
        let text = r#"{"machines": 2, "jobs": [{"id": "a", "weight": 1, "ptime": 2},
                       {"id": "b", "weight": 3, "ptime": 1.5}]}"#;
        let AnyInstance::Deterministic(inst) = AnyInstance::from_json(text).unwrap() else {
            panic!("expected deterministic");
        };
        assert_eq!(inst.machines(), 2);
        assert_eq!(inst.jobs()[1], Job::new("b", 3.0, 1.5));

        let text = r#"{"machines": 1, "jobs": [
            {"id": "x", "weight": 1, "dist": {"kind": "exponential", "rate": 2}},
            {"id": "y", "weight": 2, "dist": {"kind": "two-point", "low": 1, "high": 3, "p_low": 0.5}},
            {"id": "z", "weight": 2, "dist": {"kind": "point-mass", "value": 4}}]}"#;
        let AnyInstance::Stochastic(inst) = AnyInstance::from_json(text).unwrap() else {
            panic!("expected stochastic");
        };
        assert_eq!(inst.jobs()[0].dist, Distribution::Exponential { rate: 2.0 });
        let back = AnyInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back, AnyInstance::Stochastic(inst));

        assert!(AnyInstance::from_json(r#"{"machines": 0, "jobs": []}"#).is_err());
        assert!(AnyInstance::from_json("{not json").is_err());
    }
}
