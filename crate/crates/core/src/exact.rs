//! Exact optimum of `P || Σ w_j C_j(α)` for small instances.
//!
//! For a fixed assignment of jobs to machines, Smith's order is optimal on each
//! machine, so the search only enumerates assignments. Jobs are placed in Smith
//! order and always appended, which makes every leaf a Smith-sequenced schedule.
//! Machines with equal current load are interchangeable; only the first of each
//! load class is branched on.

use crate::bounds::{BoundId, BoundParams, BoundValue, Machines};
use crate::error::{Error, Result};
use crate::instance::DeterministicInstance;
use crate::report::RatioReport;
use crate::schedule::{list_schedule, wspt_schedule, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    pub max_jobs: usize,
    pub max_machines: usize,
    /// Largest tie class whose orders are enumerated in [`TieMode::Worst`].
    pub max_tie_class: usize,
    /// Cap on the number of tie orders tried in [`TieMode::Worst`].
    pub max_tie_orders: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            max_jobs: 12,
            max_machines: 4,
            max_tie_class: 6,
            max_tie_orders: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimalResult {
    pub schedule: Schedule,
    pub value: f64,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieMode {
    /// Ties in Smith ratio are broken by input order.
    Given,
    /// The worst WSPT value over all orders within each tie class.
    Worst,
}

struct Search<'a> {
    weights: Vec<f64>,
    ptimes: Vec<f64>,
    order: &'a [usize],
    alpha: f64,
    suffix_w: Vec<f64>,
    suffix_wp: Vec<f64>,
    loads: Vec<f64>,
    assign: Vec<usize>,
    best: f64,
    best_assign: Option<Vec<usize>>,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize, cost: f64) {
        self.nodes += 1;
        let n = self.order.len();
        if depth == n {
            if cost < self.best {
                self.best = cost;
                self.best_assign = Some(self.assign.clone());
            }
            return;
        }
        let min_load = self.loads.iter().copied().fold(f64::INFINITY, f64::min);
        let bound = cost + min_load * self.suffix_w[depth] + self.alpha * self.suffix_wp[depth];
        if bound >= self.best {
            return;
        }
        let j = self.order[depth];
        let (w, p) = (self.weights[j], self.ptimes[j]);

        let mut machines: Vec<usize> = (0..self.loads.len()).collect();
        machines.sort_by(|&a, &b| self.loads[a].total_cmp(&self.loads[b]).then(a.cmp(&b)));
        let mut last_load = f64::NAN;
        for i in machines {
            let load = self.loads[i];
            if load == last_load {
                continue;
            }
            last_load = load;
            let add = w * (load + self.alpha * p);
            self.loads[i] += p;
            self.assign[j] = i;
            self.dfs(depth + 1, cost + add);
            self.loads[i] = load;
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// Optimal schedule with the default caps.
pub fn optimal(inst: &DeterministicInstance, alpha: f64) -> Result<OptimalResult> {
    optimal_with(inst, alpha, &ExactConfig::default())
}

pub fn optimal_with(inst: &DeterministicInstance, alpha: f64, cfg: &ExactConfig) -> Result<OptimalResult> {
    check_alpha(alpha)?;
    let (n, m) = (inst.len(), inst.machines());
    if m == 1 || n <= m {
        // Smith order on one machine, or one job per machine, is optimal outright.
        let schedule = wspt_schedule(inst);
        let value = schedule.weighted_alpha_objective(alpha)?;
        return Ok(OptimalResult {
            schedule,
            value,
            nodes_explored: 1,
        });
    }
    if n > cfg.max_jobs || m > cfg.max_machines {
        return Err(Error::Size(format!(
            "{n} jobs on {m} machines exceeds the cap of {} jobs and {} machines",
            cfg.max_jobs, cfg.max_machines
        )));
    }

    let order = inst.smith_order();
    let weights: Vec<f64> = inst.jobs().iter().map(|j| j.weight).collect();
    let ptimes: Vec<f64> = inst.jobs().iter().map(|j| j.ptime).collect();
    let mut suffix_w = vec![0.0; n + 1];
    let mut suffix_wp = vec![0.0; n + 1];
    for d in (0..n).rev() {
        let j = order[d];
        suffix_w[d] = suffix_w[d + 1] + weights[j];
        suffix_wp[d] = suffix_wp[d + 1] + weights[j] * ptimes[j];
    }

    let wspt = wspt_schedule(inst);
    let upper = wspt.weighted_alpha_objective(alpha)?;
    let mut search = Search {
        weights,
        ptimes,
        order: &order,
        alpha,
        suffix_w,
        suffix_wp,
        loads: vec![0.0; m],
        assign: vec![0; n],
        // slack so that a leaf matching the WSPT value is still recorded
        best: upper * (1.0 + 1e-12) + f64::MIN_POSITIVE,
        best_assign: None,
        nodes: 0,
    };
    search.dfs(0, 0.0);
    let nodes_explored = search.nodes;

    let schedule = match search.best_assign {
        Some(assign) => {
            let mut sequences = vec![Vec::new(); m];
            for &j in &order {
                sequences[assign[j]].push(j);
            }
            Schedule::from_sequences(inst, sequences)?
        }
        None => wspt,
    };
    let value = schedule.weighted_alpha_objective(alpha)?;
    Ok(OptimalResult {
        schedule,
        value,
        nodes_explored,
    })
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut items.to_vec(), &mut out);
    out
}

/// Largest WSPT objective over all priority lists consistent with Smith order,
/// together with the priority list attaining it.
pub fn worst_tie_wspt(inst: &DeterministicInstance, alpha: f64, cfg: &ExactConfig) -> Result<(f64, Vec<usize>)> {
    check_alpha(alpha)?;
    let classes = inst.tie_classes();
    let mut total: usize = 1;
    for class in &classes {
        if class.len() > cfg.max_tie_class {
            return Err(Error::Size(format!(
                "tie class of {} jobs exceeds the cap of {}",
                class.len(),
                cfg.max_tie_class
            )));
        }
        total = (1..=class.len())
            .try_fold(total, |acc, k| acc.checked_mul(k))
            .filter(|&t| t <= cfg.max_tie_orders)
            .ok_or_else(|| Error::Size(format!("more than {} tie orders to enumerate", cfg.max_tie_orders)))?;
    }
    let class_perms: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations_of(c)).collect();

    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut choice = vec![0usize; classes.len()];
    loop {
        let priority: Vec<usize> = choice
            .iter()
            .zip(&class_perms)
            .flat_map(|(&c, perms)| perms[c].iter().copied())
            .collect();
        let value = list_schedule(inst, &priority)?.weighted_alpha_objective(alpha)?;
        if value > best.0 {
            best = (value, priority);
        }
        // odometer over the classes
        let mut pos = classes.len();
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < class_perms[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// WSPT value under the chosen tie handling.
pub fn wspt_value(inst: &DeterministicInstance, alpha: f64, tie_mode: TieMode, cfg: &ExactConfig) -> Result<f64> {
    match tie_mode {
        TieMode::Given => wspt_schedule(inst).weighted_alpha_objective(alpha),
        TieMode::Worst => Ok(worst_tie_wspt(inst, alpha, cfg)?.0),
    }
}

/// Tightest closed-form WSPT ratio known for `m` machines and the `α`-point objective.
pub fn applicable_bound(m: usize, alpha: f64) -> Result<BoundValue> {
    let machines = Machines::Finite(m);
    let params = BoundParams {
        m: Some(machines),
        delta: None,
        alpha: Some(alpha),
    };
    let mut candidates = Vec::new();
    if alpha == 1.0 {
        candidates.push(BoundId::WsptM.evaluate(params)?);
    }
    if (0.5..=1.0).contains(&alpha) {
        candidates.push(BoundId::KkAlpha.evaluate(params)?);
    }
    if alpha > 0.0 {
        candidates.push(BoundId::EeiAlpha.evaluate(params)?);
    }
    candidates
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::Domain(format!("no WSPT bound is known for alpha = {alpha}")))
        .map(|b| if m == 1 { BoundValue { value: 1.0, ..b } } else { b })
}

/// `WSPT_α(I) / OPT_α(I)` with the applicable bound.
pub fn ratio(inst: &DeterministicInstance, alpha: f64, tie_mode: TieMode) -> Result<RatioReport> {
    ratio_with(inst, alpha, tie_mode, &ExactConfig::default())
}

pub fn ratio_with(
    inst: &DeterministicInstance,
    alpha: f64,
    tie_mode: TieMode,
    cfg: &ExactConfig,
) -> Result<RatioReport> {
    let opt = optimal_with(inst, alpha, cfg)?;
    let algorithm_value = wspt_value(inst, alpha, tie_mode, cfg)?;
    Ok(RatioReport::new(
        algorithm_value,
        opt.value,
        applicable_bound(inst.machines(), alpha)?,
    ))
}

/// Brute force over every assignment and per-machine Smith sequencing. Test oracle only.
#[doc(hidden)]
pub fn brute_force_optimum(inst: &DeterministicInstance, alpha: f64) -> f64 {
    let (n, m) = (inst.len(), inst.machines());
    let order = inst.smith_order();
    let mut best = f64::INFINITY;
    let mut code = vec![0usize; n];
    loop {
        let mut loads = vec![0.0; m];
        let mut value = 0.0;
        for &j in &order {
            let job = &inst.jobs()[j];
            value += job.weight * (loads[code[j]] + alpha * job.ptime);
            loads[code[j]] += job.ptime;
        }
        best = best.min(value);
        let mut pos = 0;
        loop {
            if pos == n {
                return best;
            }
            code[pos] += 1;
            if code[pos] < m {
                break;
            }
            code[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DeterministicInstance {
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(1..=10) as f64, rng.random_range(1..=10) as f64))
            .collect();
        DeterministicInstance::from_pairs(m, &pairs).unwrap()
    }

    #[test]
    fn unit_ratio_two_machine_example() {
        let inst = DeterministicInstance::unit_ratio(2, &[2.0, 1.0, 1.0]).unwrap();
        let opt = optimal(&inst, 1.0).unwrap();
        assert_eq!(opt.value, 7.0);
        let mut loads = opt.schedule.machine_loads();
        loads.sort_by(f64::total_cmp);
        assert_eq!(loads, vec![2.0, 2.0]);
        let r = ratio(&inst, 1.0, TieMode::Given).unwrap();
        assert_eq!(r.ratio, 1.0);
    }

    #[test]
    fn trivial_shapes() {
        let inst = DeterministicInstance::from_pairs(4, &[(2.0, 3.0), (1.0, 1.0), (5.0, 2.0)]).unwrap();
        for alpha in [0.0, 0.5, 1.0] {
            let opt = optimal(&inst, alpha).unwrap();
            let expect: f64 = inst.jobs().iter().map(|j| j.weight * alpha * j.ptime).sum();
            assert_relative_eq!(opt.value, expect, max_relative = 1e-12);
        }
        let single = DeterministicInstance::from_pairs(1, &[(2.0, 3.0), (1.0, 1.0), (5.0, 2.0)]).unwrap();
        let opt = optimal(&single, 1.0).unwrap();
        assert_eq!(opt.value, wspt_schedule(&single).weighted_completion());
        assert_eq!(ratio(&single, 1.0, TieMode::Worst).unwrap().ratio, 1.0);
    }

    #[test]
    fn caps_are_errors() {
        let inst = DeterministicInstance::unit_ratio(2, &[1.0; 13]).unwrap();
        assert!(matches!(optimal(&inst, 1.0), Err(Error::Size(_))));
        let inst = DeterministicInstance::unit_ratio(5, &[1.0; 8]).unwrap();
        assert!(matches!(optimal(&inst, 1.0), Err(Error::Size(_))));
        let inst = DeterministicInstance::unit_ratio(2, &[1.0; 7]).unwrap();
        assert!(matches!(
            worst_tie_wspt(&inst, 1.0, &ExactConfig::default()),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.random_range(2..=8);
            let m = rng.random_range(2..=3);
            let inst = random_instance(&mut rng, n, m);
            for alpha in [0.0, 0.5, 1.0] {
                let opt = optimal(&inst, alpha).unwrap();
                let brute = brute_force_optimum(&inst, alpha);
                assert_relative_eq!(opt.value, brute, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn shift_identity_for_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.random_range(3..=9);
            let inst = random_instance(&mut rng, n, 3);
            let full = optimal(&inst, 1.0).unwrap().value;
            for alpha in [0.0, 0.3, 0.5, 0.75] {
                let v = optimal(&inst, alpha).unwrap().value;
                let shifted = full - (1.0 - alpha) * inst.total_weighted_ptime();
                assert_relative_eq!(v, shifted, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn worst_tie_order_dominates_given() {
        // unit ratio: every order is a WSPT order; (1,1,2) puts the long job last
        let inst = DeterministicInstance::unit_ratio(2, &[2.0, 1.0, 1.0]).unwrap();
        let (worst, order) = worst_tie_wspt(&inst, 1.0, &ExactConfig::default()).unwrap();
        assert_eq!(worst, 1.0 + 1.0 + 2.0 * 3.0);
        assert_eq!(order, vec![1, 2, 0]);
        let r = ratio(&inst, 1.0, TieMode::Worst).unwrap();
        assert_relative_eq!(r.ratio, 8.0 / 7.0);
        assert!(r.within_bound(1e-9));
    }

    #[test]
    fn applicable_bounds() {
        assert_eq!(applicable_bound(2, 1.0).unwrap().formula, BoundId::WsptM);
        assert_eq!(applicable_bound(3, 0.5).unwrap().formula, BoundId::KkAlpha);
        assert_eq!(applicable_bound(3, 0.2).unwrap().formula, BoundId::EeiAlpha);
        assert_eq!(applicable_bound(1, 0.7).unwrap().value, 1.0);
        assert!(applicable_bound(2, 0.0).is_err());
    }

    #[test]
    fn ratio_never_below_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let n = rng.random_range(1..=9);
            let inst = random_instance(&mut rng, n, 2);
            let r = ratio(&inst, 1.0, TieMode::Worst).unwrap();
            assert!(r.ratio >= 1.0 - 1e-9);
            assert!(r.within_bound(1e-9), "{r:?}");
        }
    }
}
