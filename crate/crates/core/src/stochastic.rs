//! WSEPT under random processing times: simulation, exact expectations for
//! finite-support laws, and an exact optimal-policy oracle.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bounds::{BoundId, BoundParams, Machines};
use crate::error::{Error, Result};
use crate::instance::StochasticInstance;
use crate::report::RatioReport;
use crate::schedule::{list_schedule, Schedule};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// One realization scheduled by WSEPT.
#[derive(Debug, Clone)]
pub struct PolicyRunResult {
    pub seed: u64,
    pub schedule: Schedule,
    pub objective: f64,
}

impl PolicyRunResult {
    pub fn alpha_objective(&self, alpha: f64) -> Result<f64> {
        self.schedule.weighted_alpha_objective(alpha)
    }
}

/// Sample mean with a 95% normal-approximation confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateCI {
    pub mean: f64,
    pub half_width: f64,
    pub samples: usize,
}

impl EstimateCI {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        let mean = pairwise_sum(values) / n as f64;
        let half_width = if n < 2 {
            f64::INFINITY
        } else {
            let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
            let var = pairwise_sum(&dev) / (n - 1) as f64;
            Z95 * var.sqrt() / (n as f64).sqrt()
        };
        Self {
            mean,
            half_width,
            samples: n,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.half_width
    }
}

/// Fixed-order pairwise summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        values.iter().sum()
    } else {
        let (a, b) = values.split_at(values.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Seed of sample `index` under a base seed (splitmix64 finalizer).
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws a realization and list-schedules it in WSEPT order. The priority only
/// depends on expected processing times, so the policy is non-anticipative.
pub fn wsept_run(inst: &StochasticInstance, seed: u64) -> PolicyRunResult {
    let realized = inst.sample_realization(seed);
    let schedule = list_schedule(&realized, &inst.wsept_order()).expect("wsept order is a permutation");
    let objective = schedule.weighted_completion();
    PolicyRunResult {
        seed,
        schedule,
        objective,
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// Monte Carlo estimate of `E[Σ w_j C_j^WSEPT(α)]`.
pub fn monte_carlo_wsept(inst: &StochasticInstance, samples: usize, seed: u64, alpha: f64) -> Result<EstimateCI> {
    check_alpha(alpha)?;
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            wsept_run(inst, sample_seed(seed, i))
                .alpha_objective(alpha)
                .expect("alpha checked")
        })
        .collect();
    Ok(EstimateCI::from_samples(&values))
}

/// One side-by-side comparison of a variance identity for one job.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub job: String,
    /// `α` of the identity; `1` is the completion-time form.
    pub alpha: f64,
    /// Estimate of `E[p_j C_j(α)]`.
    pub lhs: f64,
    /// Estimate of `E[p_j] E[C_j(α)] + α Var[p_j]`.
    pub rhs: f64,
    /// Confidence half-width of the per-sample difference.
    pub half_width: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceIdentityReport {
    pub samples: usize,
    pub seed: u64,
    /// Familywise confidence level of the joint interval.
    pub confidence: f64,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

/// Familywise confidence of [`variance_identity_check`], split over all checks.
pub const IDENTITY_CONFIDENCE: f64 = 0.99;

/// Checks `E[p_j C_j(α)] = E[p_j] E[C_j(α)] + α Var[p_j]` and its completion-time
/// form for every job under WSEPT, using the per-sample difference
/// `p_j C_j(α) − E[p_j] C_j(α) − α Var[p_j]` whose mean is zero. Intervals are
/// Bonferroni-corrected to a familywise level of [`IDENTITY_CONFIDENCE`].
pub fn variance_identity_check(
    inst: &StochasticInstance,
    samples: usize,
    seed: u64,
    alpha: f64,
) -> Result<VarianceIdentityReport> {
    check_alpha(alpha)?;
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    let n = inst.len();
    let alphas = [alpha, 1.0];
    let runs: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let run = wsept_run(inst, sample_seed(seed, i));
            let mut row = Vec::with_capacity(2 * n);
            for a in alphas {
                for j in 0..n {
                    row.push(run.schedule.alpha_point(j, a).expect("alpha checked"));
                }
            }
            // realized processing times ride along at the end
            row.extend(run.schedule.jobs().iter().map(|job| job.ptime));
            row
        })
        .collect();

    let comparisons = 2 * n;
    let tail = (1.0 - IDENTITY_CONFIDENCE) / (2.0 * comparisons as f64);
    let z = Normal::standard().inverse_cdf(1.0 - tail);
    let mut checks = Vec::with_capacity(comparisons);
    for (ai, a) in alphas.into_iter().enumerate() {
        for (j, job) in inst.jobs().iter().enumerate() {
            let mean_p = job.dist.mean();
            let var_p = job.dist.variance();
            let col = |r: &Vec<f64>| r[ai * n + j];
            let p = |r: &Vec<f64>| r[2 * n + j];
            let lhs: Vec<f64> = runs.iter().map(|r| p(r) * col(r)).collect();
            let times: Vec<f64> = runs.iter().map(col).collect();
            let diff: Vec<f64> = runs
                .iter()
                .map(|r| p(r) * col(r) - mean_p * col(r) - a * var_p)
                .collect();
            let lhs_est = EstimateCI::from_samples(&lhs).mean;
            let time_est = EstimateCI::from_samples(&times).mean;
            let diff_est = EstimateCI::from_samples(&diff);
            let half_width = diff_est.half_width / Z95 * z;
            let scale = lhs_est.abs().max(1.0);
            checks.push(IdentityCheck {
                job: job.id.clone(),
                alpha: a,
                lhs: lhs_est,
                rhs: mean_p * time_est + a * var_p,
                half_width,
                ok: diff_est.mean.abs() <= half_width + 1e-12 * scale,
            });
        }
    }
    let passed = checks.iter().all(|c| c.ok);
    Ok(VarianceIdentityReport {
        samples,
        seed,
        confidence: IDENTITY_CONFIDENCE,
        checks,
        passed,
    })
}

/// Largest number of realization vectors [`exact_wsept_value`] enumerates.
pub const MAX_REALIZATIONS: usize = 1_000_000;

/// Visits every realization vector with its probability.
fn for_each_realization(inst: &StochasticInstance, mut visit: impl FnMut(f64, &[f64]) -> Result<()>) -> Result<()> {
    let supports = inst
        .jobs()
        .iter()
        .map(|j| {
            j.dist
                .support()
                .ok_or_else(|| Error::Domain(format!("job `{}` does not have a finite-support law", j.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let count = supports
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
        .filter(|&c| c <= MAX_REALIZATIONS)
        .ok_or_else(|| Error::Size(format!("more than {MAX_REALIZATIONS} realizations")))?;
    let n = supports.len();
    let mut choice = vec![0usize; n];
    let mut ptimes = vec![0.0; n];
    for _ in 0..count {
        let mut prob = 1.0;
        for j in 0..n {
            let (v, q) = supports[j][choice[j]];
            ptimes[j] = v;
            prob *= q;
        }
        visit(prob, &ptimes)?;
        for j in (0..n).rev() {
            choice[j] += 1;
            if choice[j] < supports[j].len() {
                break;
            }
            choice[j] = 0;
        }
    }
    Ok(())
}

/// Exact `E[Σ w_j C_j^WSEPT(α)]` by enumerating all realizations of a
/// finite-support instance.
pub fn exact_wsept_alpha_value(inst: &StochasticInstance, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let order = inst.wsept_order();
    let mut total = 0.0;
    for_each_realization(inst, |prob, ptimes| {
        let realized = inst.realize(ptimes)?;
        total += prob * list_schedule(&realized, &order)?.weighted_alpha_objective(alpha)?;
        Ok(())
    })?;
    Ok(total)
}

/// Exact `E[Σ w_j C_j^WSEPT]`.
pub fn exact_wsept_value(inst: &StochasticInstance) -> Result<f64> {
    exact_wsept_alpha_value(inst, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MdpConfig {
    pub max_jobs: usize,
    pub max_machines: usize,
    /// Largest support value after scaling supports to integers.
    pub max_support: usize,
    /// Largest integer tried when scaling rational supports to integers.
    pub max_scale: usize,
    /// Whether the policy may leave a machine idle while jobs wait.
    pub allow_idling: bool,
}

impl Default for MdpConfig {
    fn default() -> Self {
        Self {
            max_jobs: 6,
            max_machines: 3,
            max_support: 8,
            max_scale: 1000,
            allow_idling: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MdpResult {
    pub value: f64,
    pub states_explored: usize,
}

const NOT_RUNNING: u8 = u8::MAX;

struct Mdp {
    machines: usize,
    weights: Vec<f64>,
    /// `hazard[j][e]`: probability that job `j` finishes during `[e, e+1)` given it ran `e` units.
    hazard: Vec<Vec<f64>>,
    allow_idling: bool,
    memo: HashMap<(u16, Vec<u8>), f64>,
}

impl Mdp {
    /// Minimal expected remaining cost. `elapsed[j]` is the processing a running
    /// job has received, or `NOT_RUNNING`.
    fn value(&mut self, pending: u16, elapsed: &[u8]) -> f64 {
        let running: Vec<usize> = (0..elapsed.len()).filter(|&j| elapsed[j] != NOT_RUNNING).collect();
        if pending == 0 && running.is_empty() {
            return 0.0;
        }
        let key = (pending, elapsed.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // every unfinished job pays its weight for the coming time unit
        let open_weight: f64 = (0..elapsed.len())
            .filter(|&j| pending & (1 << j) != 0 || elapsed[j] != NOT_RUNNING)
            .map(|j| self.weights[j])
            .sum();
        let free = self.machines - running.len();
        let pending_count = pending.count_ones() as usize;
        let forced = free.min(pending_count);

        let mut best = f64::INFINITY;
        // iterate over all submasks of `pending`, including the empty one
        let mut start = pending;
        loop {
            let size = start.count_ones() as usize;
            let allowed = size <= free && (self.allow_idling || size == forced) && !(size == 0 && running.is_empty());
            if allowed {
                let mut next = elapsed.to_vec();
                for (j, e) in next.iter_mut().enumerate() {
                    if start & (1 << j) != 0 {
                        *e = 0;
                    }
                }
                let v = open_weight + self.expected_after_step(pending & !start, &next);
                if v < best {
                    best = v;
                }
            }
            if start == 0 {
                break;
            }
            start = (start - 1) & pending;
        }
        self.memo.insert(key, best);
        best
    }

    /// Expectation over which running jobs complete during the next time unit.
    fn expected_after_step(&mut self, pending: u16, elapsed: &[u8]) -> f64 {
        let running: Vec<usize> = (0..elapsed.len()).filter(|&j| elapsed[j] != NOT_RUNNING).collect();
        let mut total = 0.0;
        for outcome in 0u32..(1 << running.len()) {
            let mut prob = 1.0;
            let mut next = elapsed.to_vec();
            for (bit, &j) in running.iter().enumerate() {
                let e = elapsed[j] as usize;
                let h = self.hazard[j][e];
                if outcome & (1 << bit) != 0 {
                    prob *= h;
                    next[j] = NOT_RUNNING;
                } else {
                    prob *= 1.0 - h;
                    next[j] = elapsed[j] + 1;
                }
            }
            if prob > 0.0 {
                total += prob * self.value(pending, &next);
            }
        }
        total
    }
}

/// Smallest integer scale turning every support value into a positive integer.
fn integer_scale(values: &[f64], max_scale: usize) -> Option<usize> {
    (1..=max_scale).find(|&s| {
        values.iter().all(|&v| {
            let x = v * s as f64;
            (x - x.round()).abs() <= 1e-9 * x.max(1.0) && x.round() >= 1.0
        })
    })
}

/// Exact minimum of `E[Σ w_j C_j]` over non-anticipative policies that may idle.
pub fn mdp_optimal(inst: &StochasticInstance) -> Result<MdpResult> {
    mdp_optimal_with(inst, &MdpConfig::default())
}

/// Exact optimum of the scheduling MDP on the integer time grid.
///
/// Supports are scaled to integers; at every integer time the policy observes
/// which jobs are done and how long running jobs have run, and starts any
/// subset of waiting jobs on free machines. Machines are identical, so the
/// state records only the waiting set and the elapsed time of each running job.
pub fn mdp_optimal_with(inst: &StochasticInstance, cfg: &MdpConfig) -> Result<MdpResult> {
    let (n, m) = (inst.len(), inst.machines());
    if n > cfg.max_jobs || m > cfg.max_machines || n > 16 {
        return Err(Error::Size(format!(
            "{n} jobs on {m} machines exceeds the cap of {} jobs and {} machines",
            cfg.max_jobs, cfg.max_machines
        )));
    }
    let supports = inst
        .jobs()
        .iter()
        .map(|j| {
            j.dist
                .support()
                .ok_or_else(|| Error::Domain(format!("job `{}` does not have a finite-support law", j.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let all_values: Vec<f64> = supports.iter().flatten().map(|&(v, _)| v).collect();
    let scale = integer_scale(&all_values, cfg.max_scale).ok_or_else(|| {
        Error::Size(format!(
            "supports are not integral after scaling by up to {}",
            cfg.max_scale
        ))
    })?;
    let max_value = all_values
        .iter()
        .map(|v| (v * scale as f64).round() as usize)
        .max()
        .unwrap_or(0);
    if max_value > cfg.max_support {
        return Err(Error::Size(format!(
            "largest scaled support value {max_value} exceeds the cap of {}",
            cfg.max_support
        )));
    }

    let hazard = supports
        .iter()
        .map(|support| {
            let mut pmf = vec![0.0; max_value + 1];
            for &(v, q) in support {
                pmf[(v * scale as f64).round() as usize] += q;
            }
            let mut survival = 1.0;
            (0..max_value)
                .map(|e| {
                    let h = if survival > 0.0 {
                        (pmf[e + 1] / survival).min(1.0)
                    } else {
                        1.0
                    };
                    survival -= pmf[e + 1];
                    h
                })
                .collect()
        })
        .collect();

    let mut mdp = Mdp {
        machines: m,
        weights: inst.jobs().iter().map(|j| j.weight).collect(),
        hazard,
        allow_idling: cfg.allow_idling,
        memo: HashMap::new(),
    };
    let value = mdp.value(((1u32 << n) - 1) as u16, &vec![NOT_RUNNING; n]) / scale as f64;
    Ok(MdpResult {
        value,
        states_explored: mdp.memo.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmpiricalMode {
    /// Exact WSEPT expectation by enumeration.
    Exact,
    /// Monte Carlo WSEPT estimate.
    MonteCarlo { samples: usize, seed: u64 },
}

/// `E[WSEPT] / E[OPT]` against `composite(m, Δ)`, with `Δ` taken from the instance.
pub fn empirical_ratio(inst: &StochasticInstance, mode: EmpiricalMode) -> Result<RatioReport> {
    let oracle = mdp_optimal(inst)?;
    let delta = inst.delta();
    let bound = BoundId::Composite.evaluate(BoundParams {
        m: Some(Machines::Finite(inst.machines())),
        delta: Some(delta),
        alpha: None,
    })?;
    match mode {
        EmpiricalMode::Exact => Ok(RatioReport::new(exact_wsept_value(inst)?, oracle.value, bound)),
        EmpiricalMode::MonteCarlo { samples, seed } => {
            let est = monte_carlo_wsept(inst, samples, seed, 1.0)?;
            let mut report = RatioReport::new(est.mean, oracle.value, bound);
            report.half_width = Some(est.half_width);
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::instance::{DeterministicInstance, Distribution};
    use approx::assert_abs_diff_eq;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pm(v: f64) -> Distribution {
        Distribution::PointMass { value: v }
    }

    fn exp(rate: f64) -> Distribution {
        Distribution::Exponential { rate }
    }

    #[test]
    fn wsept_run_examples() {
        let inst = StochasticInstance::from_parts(2, vec![(1.0, pm(2.0)), (3.0, pm(1.0)), (2.0, pm(2.0))]).unwrap();
        let det = inst.as_deterministic().unwrap();
        let run = wsept_run(&inst, 9);
        assert_eq!(run.objective, crate::wspt_schedule(&det).weighted_completion());

        let inst = StochasticInstance::from_parts(3, vec![(1.0, exp(1.0)), (2.0, exp(0.5))]).unwrap();
        let run = wsept_run(&inst, 4);
        let realized: f64 = run.schedule.jobs().iter().map(|j| j.weight * j.ptime).sum();
        assert_abs_diff_eq!(run.objective, realized, epsilon = 1e-12);
        assert_eq!(wsept_run(&inst, 4).objective, run.objective);
    }

    #[test]
    fn monte_carlo_examples() {
        let inst = StochasticInstance::from_parts(2, vec![(1.0, pm(2.0)), (2.0, pm(1.0)), (1.0, pm(3.0))]).unwrap();
        let est = monte_carlo_wsept(&inst, 50, 1, 1.0).unwrap();
        assert_eq!(est.half_width, 0.0);
        assert_eq!(
            est.mean,
            crate::wspt_schedule(&inst.as_deterministic().unwrap()).weighted_completion()
        );

        let one = StochasticInstance::from_parts(1, vec![(1.0, exp(1.0))]).unwrap();
        let est = monte_carlo_wsept(&one, 100_000, 17, 1.0).unwrap();
        assert!(est.contains(1.0), "{est:?}");

        let two = StochasticInstance::from_parts(1, vec![(1.0, exp(1.0)), (1.0, exp(1.0))]).unwrap();
        let est = monte_carlo_wsept(&two, 100_000, 23, 1.0).unwrap();
        assert!(est.contains(3.0), "{est:?}");

        assert!(monte_carlo_wsept(&one, 1, 0, 1.0).is_err());
        assert!(monte_carlo_wsept(&one, 10, 0, 1.5).is_err());
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let inst = StochasticInstance::from_parts(2, vec![(1.0, exp(1.0)), (2.0, exp(2.0)), (1.0, exp(0.5))]).unwrap();
        let a = monte_carlo_wsept(&inst, 2000, 5, 0.5).unwrap();
        let b = monte_carlo_wsept(&inst, 2000, 5, 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn variance_identity_examples() {
        let det = StochasticInstance::from_parts(2, vec![(1.0, pm(2.0)), (2.0, pm(1.0)), (1.0, pm(3.0))]).unwrap();
        let report = variance_identity_check(&det, 100, 3, 0.5).unwrap();
        assert!(report.passed);
        for c in &report.checks {
            assert_abs_diff_eq!(c.lhs, c.rhs, epsilon = 1e-12);
        }

        let one = StochasticInstance::from_parts(1, vec![(1.0, exp(1.0))]).unwrap();
        let report = variance_identity_check(&one, 100_000, 8, 1.0).unwrap();
        assert!(report.passed, "{report:?}");
        assert!((report.checks[0].lhs - 2.0).abs() < 0.05);
        assert_abs_diff_eq!(
            report.checks[0].rhs - report.checks[0].lhs,
            0.0,
            epsilon = report.checks[0].half_width
        );

        let start = StochasticInstance::from_parts(
            2,
            vec![
                (1.0, exp(1.0)),
                (1.0, exp(2.0)),
                (2.0, Distribution::two_point(1.0, 3.0, 0.5)),
            ],
        )
        .unwrap();
        let report = variance_identity_check(&start, 20_000, 2, 0.0).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn exact_wsept_examples() {
        let inst = StochasticInstance::from_parts(2, vec![(1.0, pm(2.0)), (2.0, pm(1.0)), (1.0, pm(3.0))]).unwrap();
        let expect = crate::wspt_schedule(&inst.as_deterministic().unwrap()).weighted_completion();
        assert_eq!(exact_wsept_value(&inst).unwrap(), expect);

        let one = StochasticInstance::from_parts(1, vec![(1.0, Distribution::two_point(1.0, 3.0, 0.3))]).unwrap();
        assert_abs_diff_eq!(exact_wsept_value(&one).unwrap(), 0.3 + 0.7 * 3.0, epsilon = 1e-12);

        let tp = Distribution::two_point(1.0, 2.0, 0.5);
        let three = StochasticInstance::from_parts(2, vec![(1.0, tp.clone()); 3]).unwrap();
        let mut brute = 0.0;
        for code in 0..8 {
            let p: Vec<f64> = (0..3).map(|b| if code & (1 << b) != 0 { 2.0 } else { 1.0 }).collect();
            let det = three.realize(&p).unwrap();
            brute += list_schedule(&det, &three.wsept_order()).unwrap().weighted_completion() / 8.0;
        }
        assert_abs_diff_eq!(exact_wsept_value(&three).unwrap(), brute, epsilon = 1e-12);

        let cont = StochasticInstance::from_parts(1, vec![(1.0, exp(1.0))]).unwrap();
        assert!(exact_wsept_value(&cont).is_err());
    }

    #[test]
    fn mdp_single_job_and_trivial_cases() {
        let one = StochasticInstance::from_parts(1, vec![(2.0, Distribution::two_point(1.0, 3.0, 0.25))]).unwrap();
        let r = mdp_optimal(&one).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 * (0.25 + 0.75 * 3.0), epsilon = 1e-12);

        let unit = StochasticInstance::from_parts(1, vec![(1.0, pm(1.0)), (1.0, pm(1.0))]).unwrap();
        assert_abs_diff_eq!(mdp_optimal(&unit).unwrap().value, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn mdp_scales_rational_supports() {
        let inst = StochasticInstance::from_parts(1, vec![(1.0, pm(0.5)), (1.0, pm(1.5))]).unwrap();
        assert_abs_diff_eq!(mdp_optimal(&inst).unwrap().value, 0.5 + 2.0, epsilon = 1e-12);
    }

    #[test]
    fn mdp_caps() {
        let big = StochasticInstance::from_parts(2, vec![(1.0, pm(1.0)); 7]).unwrap();
        assert!(matches!(mdp_optimal(&big), Err(Error::Size(_))));
        let long = StochasticInstance::from_parts(2, vec![(1.0, pm(9.0))]).unwrap();
        assert!(matches!(mdp_optimal(&long), Err(Error::Size(_))));
        let cont = StochasticInstance::from_parts(2, vec![(1.0, exp(1.0))]).unwrap();
        assert!(matches!(mdp_optimal(&cont), Err(Error::Domain(_))));
    }

    #[test]
    fn mdp_point_masses_match_deterministic_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let n = rng.random_range(1..=5);
            let m = rng.random_range(1..=3);
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(1..=5) as f64, rng.random_range(1..=6) as f64))
                .collect();
            let det = DeterministicInstance::from_pairs(m, &pairs).unwrap();
            let stoch = StochasticInstance::from_deterministic(&det);
            let mdp = mdp_optimal(&stoch).unwrap().value;
            let opt = exact::optimal(&det, 1.0).unwrap().value;
            assert_abs_diff_eq!(mdp, opt, epsilon = 1e-9 * opt);
        }
    }

    #[test]
    fn single_machine_mdp_equals_wsept() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..30 {
            let n = rng.random_range(1..=4);
            let parts = (0..n)
                .map(|_| {
                    let low = rng.random_range(1..=3) as f64;
                    let high = rng.random_range(4..=8) as f64;
                    let q = rng.random_range(1..=9) as f64 / 10.0;
                    (rng.random_range(1..=5) as f64, Distribution::two_point(low, high, q))
                })
                .collect();
            let inst = StochasticInstance::from_parts(1, parts).unwrap();
            let mdp = mdp_optimal(&inst).unwrap().value;
            let wsept = exact_wsept_value(&inst).unwrap();
            assert_abs_diff_eq!(mdp, wsept, epsilon = 1e-9 * wsept);
        }
    }

    #[test]
    fn idling_never_hurts_and_wsept_is_feasible() {
        let tp = Distribution::two_point(1.0, 4.0, 0.5);
        let inst = StochasticInstance::from_parts(2, vec![(1.0, tp); 4]).unwrap();
        let idle = mdp_optimal(&inst).unwrap().value;
        let greedy = mdp_optimal_with(
            &inst,
            &MdpConfig {
                allow_idling: false,
                ..MdpConfig::default()
            },
        )
        .unwrap()
        .value;
        let wsept = exact_wsept_value(&inst).unwrap();
        assert!(idle <= greedy + 1e-12);
        assert!(greedy <= wsept + 1e-9);
        let r = empirical_ratio(&inst, EmpiricalMode::Exact).unwrap();
        assert!(r.ratio >= 1.0 - 1e-9);
        assert!(r.within_bound(1e-9));
    }

    #[test]
    fn mdp_lower_bound_by_single_job() {
        let inst = StochasticInstance::from_parts(
            2,
            vec![
                (3.0, Distribution::two_point(1.0, 5.0, 0.5)),
                (1.0, pm(2.0)),
                (2.0, Distribution::two_point(2.0, 3.0, 0.2)),
            ],
        )
        .unwrap();
        let v = mdp_optimal(&inst).unwrap().value;
        let floor = inst.jobs().iter().map(|j| j.weight * j.dist.mean()).fold(0.0, f64::max);
        assert!(v >= floor - 1e-9);
    }

    #[test]
    fn empirical_ratio_monte_carlo_mode() {
        let inst = StochasticInstance::from_parts(
            2,
            vec![
                (1.0, Distribution::two_point(1.0, 3.0, 0.5)),
                (2.0, pm(2.0)),
                (1.0, Distribution::two_point(2.0, 5.0, 0.4)),
            ],
        )
        .unwrap();
        let r = empirical_ratio(
            &inst,
            EmpiricalMode::MonteCarlo {
                samples: 20_000,
                seed: 3,
            },
        )
        .unwrap();
        let hw = r.half_width.unwrap();
        assert!(r.within_bound(hw / r.oracle_value + 1e-9));
        let exact = exact_wsept_value(&inst).unwrap();
        assert!((r.algorithm_value - exact).abs() <= 4.0 * hw);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64 * 0.5).collect();
        assert_eq!(pairwise_sum(&v), v.iter().sum::<f64>());
        assert_ne!(sample_seed(1, 0), sample_seed(1, 1));
        assert_ne!(sample_seed(1, 0), sample_seed(2, 0));
    }
}
