//! Worst-case structure of WSPT on unit Smith ratio instances.
//!
//! Contains the long/medium/short job classification, the limit ratio
//! functions over the worst-case parameter space, generators for the instance
//! families that approach the tight bounds, an exact optimum for those
//! families, and the instance transformations that never decrease the ratio.

use serde::Serialize;

use crate::bounds::{self, Machines};
use crate::error::{Error, Result};
use crate::instance::{DeterministicInstance, Job};
use crate::schedule::wspt_schedule;

/// Relative slack used for domain boundaries and equal-length checks.
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JobClassification {
    pub long: Vec<usize>,
    pub medium: Vec<usize>,
    pub short: Vec<usize>,
    pub ell: usize,
}

fn require_unit_ratio(inst: &DeterministicInstance) -> Result<()> {
    if inst.is_unit_ratio() {
        Ok(())
    } else {
        Err(Error::Contract(
            "operation is defined for unit Smith ratio instances (w_j = p_j)".into(),
        ))
    }
}

/// Splits the jobs into long, medium and short.
///
/// With jobs sorted by non-increasing length, `ℓ` is the largest `j ≤ m` with
/// `p_j ≥ (Σ_{j' ≥ j} p_j') / (m − j + 1)`, or 0 if there is none; the `ℓ`
/// longest jobs are long. Among the rest, jobs starting strictly before the
/// least machine load of the WSPT schedule are short, the others medium.
pub fn classify(inst: &DeterministicInstance) -> Result<JobClassification> {
    require_unit_ratio(inst)?;
    let m = inst.machines();
    let n = inst.len();
    let mut by_length: Vec<usize> = (0..n).collect();
    by_length.sort_by(|&a, &b| inst.jobs()[b].ptime.total_cmp(&inst.jobs()[a].ptime));
    let lengths: Vec<f64> = by_length.iter().map(|&j| inst.jobs()[j].ptime).collect();
    let mut tail = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tail[i] = tail[i + 1] + lengths[i];
    }
    let ell = (1..=m.min(n))
        .filter(|&j| lengths[j - 1] >= tail[j - 1] / (m - j + 1) as f64)
        .max()
        .unwrap_or(0);

    let long: Vec<usize> = by_length[..ell].to_vec();
    let schedule = wspt_schedule(inst);
    let min_load = schedule.machine_loads().into_iter().fold(f64::INFINITY, f64::min);
    let mut medium = Vec::new();
    let mut short = Vec::new();
    for j in 0..n {
        if long.contains(&j) {
            continue;
        }
        if schedule.entry(j).start < min_load {
            short.push(j);
        } else {
            medium.push(j);
        }
    }
    let mut long = long;
    long.sort_unstable();
    Ok(JobClassification {
        long,
        medium,
        short,
        ell,
    })
}

fn check_share(s: f64) -> Result<()> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::Domain(format!("share s must lie in [0, 1), got {s}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// Limit ratio when the `s·m` non-short jobs of length `x` are medium
/// (`0 ≤ x ≤ 1/(1−s)`), with short jobs of total length `m`.
pub fn lambda_medium(s: f64, x: f64, alpha: f64) -> Result<f64> {
    check_share(s)?;
    check_alpha(alpha)?;
    let cap = 1.0 / (1.0 - s);
    if !(x >= 0.0 && x <= cap * (1.0 + TOL)) {
        return Err(Error::Domain(format!("medium regime needs 0 <= x <= {cap}, got {x}")));
    }
    let num = 2.0 * s * x * (alpha * x + 1.0) + 1.0;
    let den = s * s * x * x + s * x * ((2.0 * alpha - 1.0) * x + 2.0) + 1.0;
    Ok(num / den)
}

/// Limit ratio when the non-short jobs are long (`x ≥ 1/(1−s)`).
pub fn lambda_long(s: f64, x: f64, alpha: f64) -> Result<f64> {
    check_share(s)?;
    check_alpha(alpha)?;
    let floor = 1.0 / (1.0 - s);
    if !(x.is_finite() && x >= floor * (1.0 - TOL)) {
        return Err(Error::Domain(format!("long regime needs x >= {floor}, got {x}")));
    }
    let num = (1.0 - s) * (2.0 * s * x * (alpha * x + 1.0) + 1.0);
    let den = 2.0 * alpha * s * (1.0 - s) * x * x + 1.0;
    Ok(num / den)
}

/// The unique positive critical point of `x ↦ lambda_long(s, x, α)`.
pub fn critical_long_length(s: f64, alpha: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("share s must lie in (0, 1), got {s}")));
    }
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [1/2, 1], got {alpha}")));
    }
    let root = ((2.0 * (1.0 - s) + alpha * s) * alpha * s).sqrt();
    Ok((alpha * s + root) / (2.0 * alpha * s * (1.0 - s)))
}

/// Share of long jobs per machine in the machine-independent worst case: `1/(2+√(2α))`.
pub fn worst_long_share(alpha: f64) -> f64 {
    1.0 / (2.0 + (2.0 * alpha).sqrt())
}

/// Limit ratio for `m` machines, `k` long jobs of length `x`, one medium job of
/// length `y` and short jobs of total length `m`.
pub fn lambda_fixed_m(x: f64, y: f64, k: usize, m: usize) -> Result<f64> {
    if m < 2 || k >= m {
        return Err(Error::Domain(format!("need m >= 2 and k < m, got k={k}, m={m}")));
    }
    let (mf, kf) = (m as f64, k as f64);
    let y_cap = if k + 1 < m { mf / (mf - kf - 1.0) } else { 0.0 };
    if !(y >= 0.0 && y <= y_cap * (1.0 + TOL)) {
        return Err(Error::Domain(format!(
            "medium length must lie in [0, {y_cap}], got {y}"
        )));
    }
    let x_floor = (y + mf) / (mf - kf);
    if !(x.is_finite() && x >= x_floor * (1.0 - TOL)) {
        return Err(Error::Domain(format!(
            "long length must be at least {x_floor}, got {x}"
        )));
    }
    let num = (mf - kf) * (2.0 * kf * x * x + 2.0 * kf * x + 2.0 * y * y + 2.0 * y + mf);
    let den = (mf - kf) * (2.0 * kf * x * x + y * y) + (y + mf) * (y + mf);
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedMMaximum {
    pub x: f64,
    pub y: f64,
    pub k: usize,
    pub value: f64,
}

/// Grid resolution of the confirming sweep in [`maximize_lambda_m`].
const SWEEP_X: usize = 200;
const SWEEP_Y: usize = 100;
/// The x sweep spans `[x_floor, SWEEP_X_SPAN · x_floor]` log-uniformly.
const SWEEP_X_SPAN: f64 = 50.0;

/// Maximizes [`lambda_fixed_m`] for `m` machines.
///
/// Uses the per-`k` optimal long-job length `m/(√((2m−k)k) − k)` with `y = 0`,
/// then sweeps a grid over `(x, y)` for every `k`; a grid point beating the
/// closed form would replace it.
pub fn maximize_lambda_m(m: usize) -> Result<FixedMMaximum> {
    if m < 2 {
        return Err(Error::Domain(format!("need at least 2 machines, got {m}")));
    }
    let mut best = FixedMMaximum {
        x: 0.0,
        y: 0.0,
        k: 0,
        value: lambda_fixed_m(1.0, 0.0, 0, m)?,
    };
    for k in 1..m {
        let x = bounds::long_job_length(m, k)?;
        let value = lambda_fixed_m(x, 0.0, k, m)?;
        if value > best.value {
            best = FixedMMaximum { x, y: 0.0, k, value };
        }
    }
    let closed_form = best;
    let mf = m as f64;
    for k in 0..m {
        let kf = k as f64;
        let y_cap = if k + 1 < m { mf / (mf - kf - 1.0) } else { 0.0 };
        let y_steps = if k + 1 < m { SWEEP_Y } else { 1 };
        for iy in 0..y_steps {
            let y = if y_steps == 1 {
                0.0
            } else {
                y_cap * iy as f64 / (y_steps - 1) as f64
            };
            let x_floor = (y + mf) / (mf - kf);
            for ix in 0..SWEEP_X {
                let x = x_floor * SWEEP_X_SPAN.powf(ix as f64 / (SWEEP_X - 1) as f64);
                let value = lambda_fixed_m(x, y, k, m)?;
                if value > best.value && value > closed_form.value + 1e-12 {
                    best = FixedMMaximum { x, y, k, value };
                }
            }
        }
    }
    Ok(best)
}

/// `1/ε` as an integer, if `ε` is the reciprocal of an integer at least 2.
fn reciprocal_count(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let n = (1.0 / eps).round();
    if (n * eps - 1.0).abs() > TOL || n < 2.0 {
        return Err(Error::Domain(format!(
            "epsilon must be 1/N for an integer N >= 2, got {eps}"
        )));
    }
    Ok(n as usize)
}

/// Unit-ratio instance: `m/ε` short jobs of length `ε` followed by `count` long
/// jobs of length `long_len`.
fn shorts_then_longs(m: usize, n_per_unit: usize, count: usize, long_len: f64) -> Result<DeterministicInstance> {
    let eps = 1.0 / n_per_unit as f64;
    let mut jobs: Vec<Job> = (0..m * n_per_unit)
        .map(|i| Job::new(format!("s{}", i + 1), eps, eps))
        .collect();
    jobs.extend((0..count).map(|i| Job::new(format!("l{}", i + 1), long_len, long_len)));
    DeterministicInstance::new(m, jobs)
}

/// Worst-case family for the weighted sum of α-points: `round(m/(2+√(2α)))`
/// long jobs of length `1+√(2/α)` after short jobs of total length `m`.
pub fn kk_alpha_instance(m: usize, alpha: f64, eps: f64) -> Result<DeterministicInstance> {
    if m < 2 {
        return Err(Error::Domain(format!("need at least 2 machines, got {m}")));
    }
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [1/2, 1], got {alpha}")));
    }
    let n = reciprocal_count(eps)?;
    let count = (m as f64 * worst_long_share(alpha) + 0.5).floor() as usize;
    shorts_then_longs(m, n, count, 1.0 + (2.0 / alpha).sqrt())
}

/// Worst-case family for `m` machines: `k_m` long jobs of length
/// `x_m = m/(√((2m−k_m)k_m) − k_m)` after `m/ε` short jobs of length `ε`.
pub fn fixed_m_worst_instance(m: usize, eps: f64) -> Result<DeterministicInstance> {
    let k = bounds::k_m(m)?;
    let n = reciprocal_count(eps)?;
    shorts_then_longs(m, n, k, bounds::long_job_length(m, k)?)
}

/// `(lim WSPT, lim OPT)` of [`fixed_m_worst_instance`] as `ε → 0`.
pub fn fixed_m_limit_values(m: usize) -> Result<(f64, f64)> {
    let k = bounds::k_m(m)?;
    let x = bounds::long_job_length(m, k)?;
    let (mf, kf) = (m as f64, k as f64);
    Ok((mf / 2.0 + kf * x * (1.0 + x), kf * x * x + mf * mf / (2.0 * (mf - kf))))
}

/// Optimal `Σ w_j C_j(α)` for an instance whose long jobs each get a machine of
/// their own while the remaining equal-length jobs are balanced over the other
/// machines (counts differing by at most one).
pub fn structural_optimum(inst: &DeterministicInstance, classes: &JobClassification, alpha: f64) -> Result<f64> {
    require_unit_ratio(inst)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let m = inst.machines();
    let jobs = inst.jobs();
    let rest: Vec<f64> = (0..inst.len())
        .filter(|j| !classes.long.contains(j))
        .map(|j| jobs[j].ptime)
        .collect();
    let free = m.saturating_sub(classes.long.len());
    if free == 0 && !rest.is_empty() {
        return Err(Error::Contract("no machine left for the non-long jobs".into()));
    }
    let mut value: f64 = classes
        .long
        .iter()
        .map(|&j| alpha * jobs[j].ptime * jobs[j].ptime)
        .sum();
    if let Some(&len) = rest.first() {
        if rest.iter().any(|&p| (p - len).abs() > TOL * len) {
            return Err(Error::Contract(
                "structural optimum needs all non-long jobs of equal length".into(),
            ));
        }
        let (q, r) = (rest.len() / free, rest.len() % free);
        let heaviest = if r > 0 { q + 1 } else { q } as f64 * len;
        if let Some(&shortest_long) = classes
            .long
            .iter()
            .map(|&j| &jobs[j].ptime)
            .min_by(|a, b| a.total_cmp(b))
        {
            if shortest_long < heaviest * (1.0 - TOL) {
                return Err(Error::Contract(format!(
                    "long job of length {shortest_long} is shorter than a balanced machine load {heaviest}"
                )));
            }
        }
        // c equal jobs of length len on one machine: Σ len·(start + α len)
        let machine = |c: usize| {
            let c = c as f64;
            len * len * (c * (c - 1.0) / 2.0 + alpha * c)
        };
        value += r as f64 * machine(q + 1) + (free - r) as f64 * machine(q);
    }
    Ok(value)
}

/// Prefix family of the Smith order with weights reset to processing times.
/// The largest ratio over the family is at least the ratio of `inst`.
pub fn unit_ratio_family(inst: &DeterministicInstance) -> Vec<DeterministicInstance> {
    let order = inst.smith_order();
    (1..=order.len())
        .map(|k| {
            let jobs = order[..k]
                .iter()
                .map(|&j| {
                    let job = &inst.jobs()[j];
                    Job::new(job.id.clone(), job.ptime, job.ptime)
                })
                .collect();
            DeterministicInstance::new(inst.machines(), jobs).expect("prefix of a valid instance")
        })
        .collect()
}

/// Checks the shape the transformations assume and returns the classification
/// and the common load `p(M ∪ S)/(m − ℓ)` of the machines without a long job.
fn reduced_shape(inst: &DeterministicInstance) -> Result<(JobClassification, f64)> {
    let classes = classify(inst)?;
    let m = inst.machines();
    if classes.ell >= m {
        return Err(Error::Contract("every machine holds a long job".into()));
    }
    let jobs = inst.jobs();
    let schedule = wspt_schedule(inst);
    let min_load = schedule.machine_loads().into_iter().fold(f64::INFINITY, f64::min);
    for &j in &classes.short {
        if schedule.entry(j).completion > min_load * (1.0 + TOL) {
            return Err(Error::Contract(format!(
                "short job `{}` runs past the least WSPT machine load {min_load}",
                jobs[j].id
            )));
        }
    }
    let rest: f64 = classes
        .medium
        .iter()
        .chain(&classes.short)
        .map(|&j| jobs[j].ptime)
        .sum();
    let balanced = rest / (m - classes.ell) as f64;
    for &j in &classes.long {
        if jobs[j].ptime < balanced * (1.0 - TOL) {
            return Err(Error::Contract(format!(
                "long job `{}` is shorter than the balanced load {balanced}",
                jobs[j].id
            )));
        }
    }
    Ok((classes, balanced))
}

/// Replaces the medium jobs by as many jobs of the balanced load `M*_min` as
/// fit into their total length, plus one remainder job (dropped when empty).
/// The replacements take the input position of the first medium job.
pub fn merge_medium(inst: &DeterministicInstance) -> Result<DeterministicInstance> {
    let (classes, balanced) = reduced_shape(inst)?;
    let Some(&first) = classes.medium.iter().min() else {
        return Ok(inst.clone());
    };
    let jobs = inst.jobs();
    let total: f64 = classes.medium.iter().map(|&j| jobs[j].ptime).sum();
    let whole = (total / balanced + TOL).floor();
    let remainder = total - whole * balanced;
    let mut merged: Vec<f64> = vec![balanced; whole as usize];
    if remainder > TOL * balanced {
        merged.push(remainder);
    }
    let base = &jobs[first].id;
    let mut out = Vec::with_capacity(inst.len());
    for (j, job) in jobs.iter().enumerate() {
        if j == first {
            out.extend(
                merged
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| Job::new(format!("{base}~{}", i + 1), p, p)),
            );
        } else if !classes.medium.contains(&j) {
            out.push(job.clone());
        }
    }
    DeterministicInstance::new(inst.machines(), out)
}

/// Replaces every long job by one of the mean long-job length, in place.
pub fn equalize_long(inst: &DeterministicInstance) -> Result<DeterministicInstance> {
    let (classes, _) = reduced_shape(inst)?;
    if classes.medium.len() > 1 {
        return Err(Error::Contract(format!(
            "expected at most one medium job, found {}",
            classes.medium.len()
        )));
    }
    if classes.long.is_empty() {
        return Ok(inst.clone());
    }
    let jobs = inst.jobs();
    let mean = classes.long.iter().map(|&j| jobs[j].ptime).sum::<f64>() / classes.long.len() as f64;
    let out = jobs
        .iter()
        .enumerate()
        .map(|(j, job)| {
            if classes.long.contains(&j) {
                Job::new(job.id.clone(), mean, mean)
            } else {
                job.clone()
            }
        })
        .collect();
    DeterministicInstance::new(inst.machines(), out)
}

/// WSPT ratio of a generated worst-case instance against [`structural_optimum`].
pub fn structural_ratio(inst: &DeterministicInstance, alpha: f64) -> Result<f64> {
    let classes = classify(inst)?;
    let opt = structural_optimum(inst, &classes, alpha)?;
    let wspt = wspt_schedule(inst).weighted_alpha_objective(alpha)?;
    Ok(wspt / opt)
}

/// Tight fixed-`m` ratio used as the reference for [`fixed_m_worst_instance`].
pub fn fixed_m_target(m: usize) -> Result<f64> {
    bounds::wspt_m(Machines::Finite(m))
}
