//! The `schedlab` command line: figure data, instance evaluation, fuzzing and
//! generator output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundId, BoundParams, BoundValue, Machines};
use crate::error::{Error, Result};
use crate::exact::{self, ExactConfig, TieMode};
use crate::instance::{AnyInstance, DeterministicInstance, StochasticInstance};
use crate::report::RatioReport;
use crate::stochastic::{self, EstimateCI, VarianceIdentityReport};
use crate::worst_case;
use crate::wspt_schedule;

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code when fuzzing finds a bound violation.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit code for usage, parse and evaluation errors.
pub const EXIT_ERROR: i32 = 2;

/// Formats a float with 9 significant digits, without trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("float round-trips");
    rounded.to_string()
}

fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.8e}").parse().expect("float round-trips")
    } else {
        x
    }
}

/// Parses `a:b:step` (inclusive) or a comma-separated list of numbers.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Domain(format!("malformed grid `{s}`; use `start:stop:step` or `a,b,c`"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step): (f64, f64, f64) = (
                start.parse().map_err(|_| bad())?,
                stop.parse().map_err(|_| bad())?,
                step.parse().map_err(|_| bad())?,
            );
            if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=count).map(|i| start + i as f64 * step).collect()
        }
        [single] => single
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}

/// Parses machine counts: a comma list whose items are `m`, `a:b` or `inf`.
pub fn parse_machines(s: &str) -> Result<Vec<Machines>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        if let Some((a, b)) = item.split_once(':') {
            let bad = || Error::Domain(format!("malformed machine range `{item}`"));
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || b < a {
                return Err(bad());
            }
            out.extend((a..=b).map(Machines::Finite));
        } else {
            out.push(item.parse()?);
        }
    }
    Ok(out)
}

/// Grid request for [`bound_rows`].
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRequest {
    pub formulas: Vec<BoundId>,
    pub machines: Vec<Machines>,
    pub deltas: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl CurveRequest {
    /// The four WSEPT curves over `Δ ∈ [0, 1.5]` with `m = ∞`.
    pub fn wsept_figure() -> Self {
        Self {
            formulas: vec![
                BoundId::Msu,
                BoundId::WseptRed,
                BoundId::WseptOrange,
                BoundId::WseptGreen,
            ],
            machines: vec![Machines::Infinite],
            deltas: parse_grid("0:1.5:0.05").expect("static grid"),
            alphas: vec![1.0],
        }
    }
}

/// Every formula evaluated over the parameters it uses.
pub fn bound_rows(req: &CurveRequest) -> Result<Vec<BoundValue>> {
    if req.formulas.is_empty() || req.machines.is_empty() || req.deltas.is_empty() || req.alphas.is_empty() {
        return Err(Error::Domain("every grid needs at least one value".into()));
    }
    let mut rows = Vec::new();
    for &id in &req.formulas {
        let ms: Vec<Option<Machines>> = if id.uses_machines() {
            req.machines.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let ds: Vec<Option<f64>> = if id.uses_delta() {
            req.deltas.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let als: Vec<Option<f64>> = if id.uses_alpha() {
            req.alphas.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for &m in &ms {
            for &delta in &ds {
                for &alpha in &als {
                    rows.push(id.evaluate(BoundParams { m, delta, alpha })?);
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WsptCurveRow {
    pub m: usize,
    pub k_m: usize,
    pub x_m: f64,
    pub value: f64,
    pub kk: f64,
}

/// Tight fixed-`m` WSPT ratio for `m ∈ [2, m_max]`, next to the limit `kk()`.
pub fn wspt_curve_rows(m_max: usize) -> Result<Vec<WsptCurveRow>> {
    if m_max < 2 {
        return Err(Error::Domain(format!("m_max must be at least 2, got {m_max}")));
    }
    (2..=m_max)
        .map(|m| {
            let k = bounds::k_m(m)?;
            Ok(WsptCurveRow {
                m,
                k_m: k,
                x_m: bounds::long_job_length(m, k)?,
                value: bounds::wspt_m(Machines::Finite(m))?,
                kk: bounds::kk(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub m: usize,
    pub k: usize,
    pub value: f64,
}

/// Worst ratio with `m` machines and `k` long jobs, `k ∈ [1, m−1]`.
pub fn surface_rows(m_max: usize) -> Result<Vec<SurfaceRow>> {
    if m_max < 2 {
        return Err(Error::Domain(format!("m_max must be at least 2, got {m_max}")));
    }
    Ok((2..=m_max)
        .flat_map(|m| {
            (1..m).map(move |k| SurfaceRow {
                m,
                k,
                value: bounds::long_job_ratio(m, k as f64),
            })
        })
        .collect())
}

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn bound_rows_csv(rows: &[BoundValue]) -> String {
    let mut out = String::from("formula,m,delta,alpha,value\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.formula,
            opt_cell(r.m),
            opt_cell(r.delta.map(fmt_sig)),
            opt_cell(r.alpha.map(fmt_sig)),
            fmt_sig(r.value)
        ));
    }
    out
}

pub fn wspt_curve_csv(rows: &[WsptCurveRow]) -> String {
    let mut out = String::from("m,k_m,x_m,value,kk\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.m,
            r.k_m,
            fmt_sig(r.x_m),
            fmt_sig(r.value),
            fmt_sig(r.kk)
        ));
    }
    out
}

pub fn surface_csv(rows: &[SurfaceRow]) -> String {
    let mut out = String::from("m,k,value\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.m, r.k, fmt_sig(r.value)));
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    /// Branch and bound for deterministic files, the policy MDP for stochastic ones.
    Exact,
    /// Closed-form optimum of a generated worst-case instance.
    Structural,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluateOptions {
    pub alpha: f64,
    pub oracle: Oracle,
    pub samples: usize,
    pub seed: u64,
    /// Also run the variance-identity check on stochastic instances.
    pub identity: bool,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            oracle: Oracle::Exact,
            samples: 10_000,
            seed: 0,
            identity: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterministicReport {
    pub machines: usize,
    pub jobs: usize,
    pub alpha: f64,
    pub wspt_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatioReport>,
}

/// Stochastic experiment: WSEPT estimate, exact values where available, and
/// the composite bound for the instance's `Δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub machines: usize,
    pub jobs: usize,
    pub delta: f64,
    pub alpha: f64,
    pub samples: usize,
    pub seed: u64,
    pub estimate: EstimateCI,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<VarianceIdentityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvaluateReport {
    Deterministic(DeterministicReport),
    Stochastic(ExperimentReport),
}

pub fn evaluate_deterministic(inst: &DeterministicInstance, opts: &EvaluateOptions) -> Result<DeterministicReport> {
    let wspt_value = wspt_schedule(inst).weighted_alpha_objective(opts.alpha)?;
    let ratio = match opts.oracle {
        Oracle::Exact => Some(exact::ratio(inst, opts.alpha, TieMode::Given)?),
        Oracle::Structural => {
            let classes = worst_case::classify(inst)?;
            let opt = worst_case::structural_optimum(inst, &classes, opts.alpha)?;
            Some(RatioReport::new(
                wspt_value,
                opt,
                exact::applicable_bound(inst.machines(), opts.alpha)?,
            ))
        }
        Oracle::None => None,
    };
    Ok(DeterministicReport {
        machines: inst.machines(),
        jobs: inst.len(),
        alpha: opts.alpha,
        wspt_value,
        ratio,
    })
}

pub fn evaluate_stochastic(inst: &StochasticInstance, opts: &EvaluateOptions) -> Result<ExperimentReport> {
    let estimate = stochastic::monte_carlo_wsept(inst, opts.samples, opts.seed, opts.alpha)?;
    let finite = inst.jobs().iter().all(|j| j.dist.support().is_some());
    let exact_value = if finite {
        match stochastic::exact_wsept_alpha_value(inst, opts.alpha) {
            Ok(v) => Some(v),
            Err(Error::Size(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let identity = if opts.identity {
        Some(stochastic::variance_identity_check(
            inst,
            opts.samples,
            opts.seed,
            opts.alpha,
        )?)
    } else {
        None
    };
    let delta = inst.delta();
    let mut report = ExperimentReport {
        machines: inst.machines(),
        jobs: inst.len(),
        delta,
        alpha: opts.alpha,
        samples: opts.samples,
        seed: opts.seed,
        estimate,
        exact_value,
        oracle_value: None,
        bound: None,
        ratio: None,
        margin: None,
        identity,
    };
    match opts.oracle {
        Oracle::None => {}
        Oracle::Structural => {
            return Err(Error::Domain(
                "the structural oracle only applies to deterministic instances".into(),
            ))
        }
        Oracle::Exact => {
            if opts.alpha != 1.0 {
                return Err(Error::Domain(
                    "the policy oracle optimizes completion times; use --alpha 1".into(),
                ));
            }
            let oracle = stochastic::mdp_optimal(inst)?.value;
            let bound = BoundId::Composite.evaluate(BoundParams {
                m: Some(Machines::Finite(inst.machines())),
                delta: Some(delta),
                alpha: None,
            })?;
            let ratio = exact_value.unwrap_or(estimate.mean) / oracle;
            report.oracle_value = Some(oracle);
            report.bound = Some(bound);
            report.ratio = Some(ratio);
            report.margin = Some(bound.value - ratio);
        }
    }
    Ok(report)
}

/// Evaluates an instance file; point-mass stochastic files take the deterministic path.
pub fn evaluate(inst: &AnyInstance, opts: &EvaluateOptions) -> Result<EvaluateReport> {
    match inst {
        AnyInstance::Deterministic(d) => Ok(EvaluateReport::Deterministic(evaluate_deterministic(d, opts)?)),
        AnyInstance::Stochastic(s) => match s.as_deterministic() {
            Some(d) => Ok(EvaluateReport::Deterministic(evaluate_deterministic(&d, opts)?)),
            None => Ok(EvaluateReport::Stochastic(evaluate_stochastic(s, opts)?)),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzRequest {
    pub count: usize,
    pub n_max: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
    pub ties: TieMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzViolation {
    pub index: usize,
    pub formula: BoundId,
    pub ratio: f64,
    pub bound: f64,
    pub instance: DeterministicInstance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub count: usize,
    pub n_max: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
    pub bounds: Vec<BoundValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<f64>,
    pub violations: Vec<FuzzViolation>,
}

/// Absolute slack allowed on every fuzzed ratio.
pub const FUZZ_TOL: f64 = 1e-9;

/// Tie-order enumeration limits used while fuzzing.
pub const FUZZ_EXACT: ExactConfig = ExactConfig {
    max_jobs: 12,
    max_machines: 4,
    max_tie_class: 8,
    max_tie_orders: 100_000,
};

/// Random instance with `1..=n_max` jobs and integer weights and processing
/// times in `[1, 10]`. Draws are repeated until every tie class fits [`FUZZ_EXACT`].
pub fn random_instance(seed: u64, n_max: usize, m: usize) -> Result<DeterministicInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.random_range(1..=n_max);
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(1..=10) as f64, rng.random_range(1..=10) as f64))
            .collect();
        let inst = DeterministicInstance::from_pairs(m, &pairs)?;
        let orders = inst
            .tie_classes()
            .iter()
            .try_fold(1usize, |acc, c| (1..=c.len()).try_fold(acc, |a, k| a.checked_mul(k)));
        let fits = inst.tie_classes().iter().all(|c| c.len() <= FUZZ_EXACT.max_tie_class)
            && orders.is_some_and(|o| o <= FUZZ_EXACT.max_tie_orders);
        if fits {
            return Ok(inst);
        }
    }
}

/// Bounds a fuzzed WSPT ratio must respect for `m` machines and `α`.
pub fn fuzz_bounds(m: usize, alpha: f64) -> Result<Vec<BoundValue>> {
    let params = BoundParams {
        m: Some(Machines::Finite(m)),
        delta: None,
        alpha: Some(alpha),
    };
    let mut out = Vec::new();
    if (0.5..=1.0).contains(&alpha) {
        out.push(BoundId::KkAlpha.evaluate(params)?);
    } else if alpha > 0.0 && alpha < 0.5 {
        out.push(BoundId::EeiAlpha.evaluate(params)?);
    }
    if alpha == 1.0 {
        out.push(BoundId::WsptM.evaluate(params)?);
    }
    if out.is_empty() {
        return Err(Error::Domain(format!("no WSPT bound is known for alpha = {alpha}")));
    }
    Ok(out)
}

/// Random WSPT/OPT ratios checked against [`fuzz_bounds`].
pub fn fuzz(req: &FuzzRequest) -> Result<FuzzReport> {
    if req.m < 2 || req.m > FUZZ_EXACT.max_machines {
        return Err(Error::Domain(format!(
            "m must lie in [2, {}], got {}",
            FUZZ_EXACT.max_machines, req.m
        )));
    }
    if req.n_max == 0 || req.n_max > FUZZ_EXACT.max_jobs {
        return Err(Error::Domain(format!(
            "n_max must lie in [1, {}], got {}",
            FUZZ_EXACT.max_jobs, req.n_max
        )));
    }
    let bounds = fuzz_bounds(req.m, req.alpha)?;
    let results: Vec<(f64, DeterministicInstance)> = (0..req.count as u64)
        .into_par_iter()
        .map(|i| {
            let inst = random_instance(stochastic::sample_seed(req.seed, i), req.n_max, req.m)?;
            let report = exact::ratio_with(&inst, req.alpha, req.ties, &FUZZ_EXACT)?;
            Ok((report.ratio, inst))
        })
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    for (index, (ratio, inst)) in results.iter().enumerate() {
        for b in &bounds {
            if *ratio > b.value + FUZZ_TOL {
                violations.push(FuzzViolation {
                    index,
                    formula: b.formula,
                    ratio: *ratio,
                    bound: b.value,
                    instance: inst.clone(),
                });
            }
        }
    }
    Ok(FuzzReport {
        count: req.count,
        n_max: req.n_max,
        m: req.m,
        alpha: req.alpha,
        seed: req.seed,
        bounds,
        max_ratio: results.iter().map(|r| r.0).reduce(f64::max),
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `k_m` long jobs of the tight fixed-`m` family.
    FixedM,
    /// The family that is worst for the weighted sum of α-points.
    KkAlpha,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSummary {
    pub family: String,
    pub m: usize,
    pub eps: f64,
    pub alpha: f64,
    pub jobs: usize,
    pub wspt_value: f64,
    pub structural_optimum: f64,
    pub ratio: f64,
    pub target: f64,
}

/// Builds a worst-case instance and reports its WSPT ratio against the structural optimum.
pub fn generate(family: Family, m: usize, eps: f64, alpha: f64) -> Result<(DeterministicInstance, GeneratorSummary)> {
    let (inst, target, alpha, name) = match family {
        Family::FixedM => (
            worst_case::fixed_m_worst_instance(m, eps)?,
            worst_case::fixed_m_target(m)?,
            1.0,
            "fixed-m",
        ),
        Family::KkAlpha => (
            worst_case::kk_alpha_instance(m, alpha, eps)?,
            bounds::kk_alpha(alpha)?,
            alpha,
            "kk-alpha",
        ),
    };
    let classes = worst_case::classify(&inst)?;
    let opt = worst_case::structural_optimum(&inst, &classes, alpha)?;
    let wspt_value = wspt_schedule(&inst).weighted_alpha_objective(alpha)?;
    let summary = GeneratorSummary {
        family: name.into(),
        m,
        eps,
        alpha,
        jobs: inst.len(),
        wspt_value,
        structural_optimum: opt,
        ratio: wspt_value / opt,
        target,
    };
    Ok((inst, summary))
}

/// Writes `content` to `path` through a temporary file in the same directory,
/// or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, content: &str) -> anyhow::Result<()> {
    let Some(path) = path else {
        std::io::stdout().write_all(content.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(content.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ties {
    /// Input order within equal Smith ratios.
    Given,
    /// The worst order within equal Smith ratios.
    Worst,
}

#[derive(Debug, Parser)]
#[command(
    name = "schedlab",
    version,
    about = "WSPT and WSEPT scheduling bounds, oracles and worst cases"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate bound formulas over parameter grids.
    Bounds {
        /// Comma-separated formula ids.
        #[arg(long, default_value = "msu,wsept-red,wsept-orange,wsept-green")]
        formula: String,
        /// Machine counts: `m`, `a:b` or `inf`, comma-separated.
        #[arg(long, default_value = "inf")]
        m: String,
        #[arg(long, default_value = "0:1.5:0.05")]
        delta_grid: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Tight WSPT ratio for each machine count up to `--m`.
    WsptCurve {
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Worst ratio over machine count and number of long jobs.
    Surface {
        #[arg(long, default_value_t = 25)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate WSPT or WSEPT on an instance file.
    Evaluate {
        instance: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Oracle::Exact)]
        oracle: Oracle,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the WSPT schedule of a deterministic instance as CSV.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check random instances against the WSPT bounds.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Ties::Worst)]
        ties: Ties,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a worst-case instance file and print its ratio.
    Worstcase {
        #[arg(long, value_enum, default_value_t = Family::FixedM)]
        family: Family,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Instance file; the summary goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo and policy-oracle experiment on a stochastic instance file.
    Stochastic {
        instance: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Oracle::Exact)]
        oracle: Oracle,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check the variance identities.
        #[arg(long)]
        identity: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_instance(path: &Path) -> anyhow::Result<AnyInstance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    AnyInstance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn render<T: Serialize>(rows: &[T], format: Format, csv: impl Fn(&[T]) -> String) -> String {
    match format {
        Format::Csv => csv(rows),
        Format::Json => to_json(&rows),
    }
}

fn rounded_bound_rows(rows: &[BoundValue]) -> Vec<BoundValue> {
    rows.iter()
        .map(|r| BoundValue {
            value: round_sig(r.value),
            ..*r
        })
        .collect()
}

/// Runs one parsed command and returns its exit code.
pub fn execute(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Bounds {
            formula,
            m,
            delta_grid,
            alpha,
            out,
            format,
        } => {
            let formulas = formula
                .split(',')
                .map(|f| f.trim().parse())
                .collect::<Result<Vec<BoundId>>>()?;
            let req = CurveRequest {
                formulas,
                machines: parse_machines(&m)?,
                deltas: parse_grid(&delta_grid)?,
                alphas: parse_grid(&alpha)?,
            };
            let rows = bound_rows(&req)?;
            let text = match format {
                Format::Csv => bound_rows_csv(&rows),
                Format::Json => to_json(&rounded_bound_rows(&rows)),
            };
            write_output(out.as_deref(), &text)?;
        }
        Command::WsptCurve { m, out, format } => {
            let rows = wspt_curve_rows(m)?;
            write_output(out.as_deref(), &render(&rows, format, wspt_curve_csv))?;
        }
        Command::Surface { m, out, format } => {
            let rows = surface_rows(m)?;
            write_output(out.as_deref(), &render(&rows, format, surface_csv))?;
        }
        Command::Evaluate {
            instance,
            alpha,
            oracle,
            samples,
            seed,
            schedule_out,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let opts = EvaluateOptions {
                alpha,
                oracle,
                samples,
                seed,
                identity: false,
            };
            let report = evaluate(&inst, &opts)?;
            if let Some(path) = schedule_out {
                let det = match &inst {
                    AnyInstance::Deterministic(d) => Some(d.clone()),
                    AnyInstance::Stochastic(s) => s.as_deterministic(),
                };
                let Some(det) = det else {
                    bail!("--schedule-out needs a deterministic instance");
                };
                write_output(Some(&path), &wspt_schedule(&det).to_csv())?;
            }
            write_output(out.as_deref(), &to_json(&report))?;
        }
        Command::Fuzz {
            count,
            n_max,
            m,
            alpha,
            seed,
            ties,
            out,
        } => {
            let ties = match ties {
                Ties::Given => TieMode::Given,
                Ties::Worst => TieMode::Worst,
            };
            let report = fuzz(&FuzzRequest {
                count,
                n_max,
                m,
                alpha,
                seed,
                ties,
            })?;
            write_output(out.as_deref(), &to_json(&report))?;
            if !report.violations.is_empty() {
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Worstcase {
            family,
            m,
            eps,
            alpha,
            out,
        } => {
            let (inst, summary) = generate(family, m, eps, alpha)?;
            match out {
                Some(path) => {
                    write_output(Some(&path), &(inst.to_json() + "\n"))?;
                    write_output(None, &to_json(&summary))?;
                }
                None => write_output(None, &(inst.to_json() + "\n"))?,
            }
        }
        Command::Stochastic {
            instance,
            alpha,
            oracle,
            samples,
            seed,
            identity,
            out,
        } => {
            let inst = match read_instance(&instance)? {
                AnyInstance::Deterministic(d) => StochasticInstance::from_deterministic(&d),
                AnyInstance::Stochastic(s) => s,
            };
            let opts = EvaluateOptions {
                alpha,
                oracle,
                samples,
                seed,
                identity,
            };
            let report = evaluate_stochastic(&inst, &opts)?;
            write_output(out.as_deref(), &to_json(&report))?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses arguments, runs the command and maps failures to exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
