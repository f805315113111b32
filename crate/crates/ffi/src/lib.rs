//! C ABI over `schedlab`.
//!
//! Every fallible function returns a [`SchedlabStatus`] and writes its result
//! through an out-pointer. After a non-`OK` status,
//! [`schedlab_last_error_message`] describes the failure on the calling thread.
//! Instances are opaque handles owned by the caller and released with the
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use schedlab::bounds::{self, BoundId, BoundParams, Machines};
use schedlab::exact::{self, TieMode};
use schedlab::stochastic;
use schedlab::{AnyInstance, DeterministicInstance, Error, StochasticInstance};

/// Pass as a machine count to mean `m = ∞`.
pub const SCHEDLAB_INFINITE_MACHINES: usize = 0;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Size = 4,
    Domain = 5,
    Internal = 6,
}

/// Deterministic instance handle.
pub struct SchedlabInstance(DeterministicInstance);

/// Stochastic instance handle.
pub struct SchedlabStochastic(StochasticInstance);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: SchedlabStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => SchedlabStatus::Parse,
            Error::Size(_) => SchedlabStatus::Size,
            Error::Domain(_) => SchedlabStatus::Domain,
            Error::Io(_) => SchedlabStatus::Internal,
            _ => SchedlabStatus::InvalidArgument,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure {
        status: SchedlabStatus::NullPointer,
        message: format!("`{what}` is null"),
    }
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SchedlabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SchedlabStatus::Ok,
        Ok(Err(failure)) => {
            set_error(failure.message);
            failure.status
        }
        Err(_) => {
            set_error("internal panic".into());
            SchedlabStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure {
        status: SchedlabStatus::InvalidArgument,
        message: format!("`{what}` is not valid UTF-8"),
    })
}

fn machines(m: usize) -> Machines {
    if m == SCHEDLAB_INFINITE_MACHINES {
        Machines::Infinite
    } else {
        Machines::Finite(m)
    }
}

/// Message describing the last failure on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn schedlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn schedlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds an instance from `n` weights and processing times. Job ids are `j1..jn`.
///
/// # Safety
/// `weights` and `ptimes` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_instance_new(
    machines: usize,
    weights: *const f64,
    ptimes: *const f64,
    n: usize,
    out: *mut *mut SchedlabInstance,
) -> SchedlabStatus {
    guard(|| {
        if n > 0 && (weights.is_null() || ptimes.is_null()) {
            return Err(null("weights/ptimes"));
        }
        let pairs: Vec<(f64, f64)> = if n == 0 {
            Vec::new()
        } else {
            let w = std::slice::from_raw_parts(weights, n);
            let p = std::slice::from_raw_parts(ptimes, n);
            w.iter().copied().zip(p.iter().copied()).collect()
        };
        let inst = DeterministicInstance::from_pairs(machines, &pairs)?;
        write(out, Box::into_raw(Box::new(SchedlabInstance(inst))), "out")
    })
}

/// Parses a deterministic instance file.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_instance_from_json(
    json: *const c_char,
    out: *mut *mut SchedlabInstance,
) -> SchedlabStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let inst = match AnyInstance::from_json(text)? {
            AnyInstance::Deterministic(d) => d,
            AnyInstance::Stochastic(s) => s.as_deterministic().ok_or_else(|| Failure {
                status: SchedlabStatus::InvalidArgument,
                message: "instance has random processing times".into(),
            })?,
        };
        write(out, Box::into_raw(Box::new(SchedlabInstance(inst))), "out")
    })
}

/// # Safety
/// `inst` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn schedlab_instance_free(inst: *mut SchedlabInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_instance_len(inst: *const SchedlabInstance, out: *mut usize) -> SchedlabStatus {
    guard(|| write(out, deref(inst, "inst")?.0.len(), "out"))
}

/// `Σ w_j C_j(α)` of the WSPT schedule, ties in input order.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_wspt_objective(
    inst: *const SchedlabInstance,
    alpha: f64,
    out: *mut f64,
) -> SchedlabStatus {
    guard(|| {
        let v = schedlab::wspt_schedule(&deref(inst, "inst")?.0).weighted_alpha_objective(alpha)?;
        write(out, v, "out")
    })
}

/// Exact optimum of `Σ w_j C_j(α)`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_optimal_objective(
    inst: *const SchedlabInstance,
    alpha: f64,
    out: *mut f64,
) -> SchedlabStatus {
    guard(|| write(out, exact::optimal(&deref(inst, "inst")?.0, alpha)?.value, "out"))
}

/// WSPT/OPT ratio and the applicable bound. `worst_ties` takes the worst order
/// within equal Smith ratios.
///
/// # Safety
/// `inst` must be a live handle; `out_ratio` and `out_bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_wspt_ratio(
    inst: *const SchedlabInstance,
    alpha: f64,
    worst_ties: bool,
    out_ratio: *mut f64,
    out_bound: *mut f64,
) -> SchedlabStatus {
    guard(|| {
        let mode = if worst_ties { TieMode::Worst } else { TieMode::Given };
        let r = exact::ratio(&deref(inst, "inst")?.0, alpha, mode)?;
        write(out_ratio, r.ratio, "out_ratio")?;
        write(out_bound, r.bound.value, "out_bound")
    })
}

/// Evaluates a bound formula by id (`kk`, `msu`, `wsept-red`, ...). Parameters
/// the formula does not use are ignored.
///
/// # Safety
/// `formula` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_bound(
    formula: *const c_char,
    m: usize,
    delta: f64,
    alpha: f64,
    out: *mut f64,
) -> SchedlabStatus {
    guard(|| {
        let id: BoundId = read_str(formula, "formula")?.parse()?;
        let params = BoundParams {
            m: Some(machines(m)),
            delta: Some(delta),
            alpha: Some(alpha),
        };
        write(out, id.evaluate(params)?.value, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_wspt_m(m: usize, out: *mut f64) -> SchedlabStatus {
    guard(|| write(out, bounds::wspt_m(machines(m))?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_k_m(m: usize, out: *mut usize) -> SchedlabStatus {
    guard(|| write(out, bounds::k_m(m)?, "out"))
}

/// Parses an instance file; deterministic files become point masses.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_stochastic_from_json(
    json: *const c_char,
    out: *mut *mut SchedlabStochastic,
) -> SchedlabStatus {
    guard(|| {
        let inst = match AnyInstance::from_json(read_str(json, "json")?)? {
            AnyInstance::Deterministic(d) => StochasticInstance::from_deterministic(&d),
            AnyInstance::Stochastic(s) => s,
        };
        write(out, Box::into_raw(Box::new(SchedlabStochastic(inst))), "out")
    })
}

/// # Safety
/// `inst` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn schedlab_stochastic_free(inst: *mut SchedlabStochastic) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Largest squared coefficient of variation over the jobs.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_stochastic_delta(inst: *const SchedlabStochastic, out: *mut f64) -> SchedlabStatus {
    guard(|| write(out, deref(inst, "inst")?.0.delta(), "out"))
}

/// Exact expected WSEPT objective for finite-support laws.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_exact_wsept_value(inst: *const SchedlabStochastic, out: *mut f64) -> SchedlabStatus {
    guard(|| write(out, stochastic::exact_wsept_value(&deref(inst, "inst")?.0)?, "out"))
}

/// Optimal expected objective over non-anticipative policies.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_mdp_optimal(inst: *const SchedlabStochastic, out: *mut f64) -> SchedlabStatus {
    guard(|| write(out, stochastic::mdp_optimal(&deref(inst, "inst")?.0)?.value, "out"))
}

/// Monte Carlo estimate of the expected WSEPT `α`-point objective with its 95% half-width.
///
/// # Safety
/// `inst` must be a live handle; `out_mean` and `out_half_width` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_monte_carlo(
    inst: *const SchedlabStochastic,
    samples: usize,
    seed: u64,
    alpha: f64,
    out_mean: *mut f64,
    out_half_width: *mut f64,
) -> SchedlabStatus {
    guard(|| {
        let est = stochastic::monte_carlo_wsept(&deref(inst, "inst")?.0, samples, seed, alpha)?;
        write(out_mean, est.mean, "out_mean")?;
        write(out_half_width, est.half_width, "out_half_width")
    })
}

/// Evaluates an instance file with the exact oracle and returns the JSON report.
/// Free the string with [`schedlab_string_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schedlab_evaluate_json(
    json: *const c_char,
    alpha: f64,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> SchedlabStatus {
    guard(|| {
        let inst = AnyInstance::from_json(read_str(json, "json")?)?;
        let opts = schedlab::cli::EvaluateOptions {
            alpha,
            samples,
            seed,
            ..Default::default()
        };
        let report = schedlab::cli::evaluate(&inst, &opts)?;
        let text = serde_json::to_string(&report).map_err(Error::from)?;
        let c = CString::new(text).expect("json has no nul bytes");
        write(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn schedlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
