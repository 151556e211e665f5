//! C ABI for the scheduling solver: opaque handles, status codes, and a
//! thread-local last-error message.
//!
//! Ownership rules: every `*_parse`/`*_generate`/`*_solve` out-pointer
//! hands the caller an owned handle that must go back through the
//! matching `*_free`; strings returned as `char*` must be released with
//! `sched_string_free`. All functions are panic-safe: a caught panic
//! turns into `SCHED_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sched_core::error::Error;
use sched_core::exact;
use sched_core::instance::{self, GenParams};
use sched_core::pipeline::{self, AlphaMode, SolveOptions};
use sched_core::report::Report;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchedStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The instance text did not parse.
    ParseError = 3,
    /// The instance violates a model invariant (cycle, bad value, size).
    InvalidInstance = 4,
    /// The LP or scheduling stage failed numerically.
    SolverFailure = 5,
    /// An internal panic was caught; state may be inconsistent.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_for(err: &Error) -> SchedStatus {
    match err {
        Error::Parse { .. } => SchedStatus::ParseError,
        Error::Cycle(_)
        | Error::Value(_)
        | Error::TooLarge { .. }
        | Error::OrderViolatesPrecedence { .. } => SchedStatus::InvalidInstance,
        Error::IterationLimit(_)
        | Error::Numerical(_)
        | Error::InfeasibleLp
        | Error::PrecedenceViolation { .. } => SchedStatus::SolverFailure,
    }
}

fn fail(err: &Error) -> SchedStatus {
    set_last_error(err.to_string());
    status_for(err)
}

fn guarded(f: impl FnOnce() -> SchedStatus) -> SchedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic".into());
            SchedStatus::Panic
        }
    }
}

/// Opaque scheduling instance.
pub struct SchedInstance(instance::Instance);

/// Opaque solve report (LP bound, schedules, ratios).
pub struct SchedReport(Report);

fn string_out(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sched_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent error on this thread, or null. The caller
/// owns the returned string.
#[no_mangle]
pub extern "C" fn sched_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by a `sched_*` function that
/// documents string ownership, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sched_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an instance from its text form.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn sched_instance_parse(
    text: *const c_char,
    out: *mut *mut SchedInstance,
) -> SchedStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            set_last_error("null argument".into());
            return SchedStatus::NullArgument;
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_last_error("instance text is not valid UTF-8".into());
            return SchedStatus::InvalidUtf8;
        };
        let inst = match instance::parse(text) {
            Ok(i) => i,
            Err(e) => return fail(&e),
        };
        if let Err(e) = instance::validate(&inst) {
            return fail(&e);
        }
        clear_last_error();
        *out = Box::into_raw(Box::new(SchedInstance(inst)));
        SchedStatus::Ok
    })
}

/// Generates a seeded random instance (see the CLI `gen` command).
///
/// # Safety
/// `out` must point to writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn sched_instance_generate(
    n: usize,
    p_max: u64,
    r_max: u64,
    w_max: u64,
    edge_prob: f64,
    seed: u64,
    out: *mut *mut SchedInstance,
) -> SchedStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("null argument".into());
            return SchedStatus::NullArgument;
        }
        if n == 0 || !(0.0..=1.0).contains(&edge_prob) {
            set_last_error("need n >= 1 and edge_prob in [0, 1]".into());
            return SchedStatus::InvalidInstance;
        }
        let inst = instance::generate_random(GenParams {
            n,
            p_max,
            r_max,
            w_max,
            edge_prob,
            seed,
        });
        clear_last_error();
        *out = Box::into_raw(Box::new(SchedInstance(inst)));
        SchedStatus::Ok
    })
}

/// Canonical text form of the instance; the caller owns the string.
/// Returns null on a null handle.
///
/// # Safety
/// `inst` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn sched_instance_serialize(inst: *const SchedInstance) -> *mut c_char {
    if inst.is_null() {
        return ptr::null_mut();
    }
    string_out(instance::serialize(&(*inst).0))
}

/// Number of jobs, or 0 on a null handle.
///
/// # Safety
/// `inst` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn sched_instance_job_count(inst: *const SchedInstance) -> usize {
    if inst.is_null() {
        0
    } else {
        (*inst).0.n()
    }
}

/// Releases an instance handle.
///
/// # Safety
/// `inst` must be a handle from this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn sched_instance_free(inst: *mut SchedInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs the full pipeline (LP bound, double-speed preemptive schedule,
/// derandomized alpha conversion) with the given separation tolerance;
/// pass `tol_sep <= 0` for the default.
///
/// # Safety
/// `inst` must be a live instance handle and `out` writable storage.
#[no_mangle]
pub unsafe extern "C" fn sched_solve(
    inst: *const SchedInstance,
    tol_sep: f64,
    out: *mut *mut SchedReport,
) -> SchedStatus {
    guarded(|| {
        if inst.is_null() || out.is_null() {
            set_last_error("null argument".into());
            return SchedStatus::NullArgument;
        }
        let opts = SolveOptions {
            tol_sep: if tol_sep > 0.0 {
                tol_sep
            } else {
                sched_core::lp::DEFAULT_TOL_SEP
            },
            alpha: AlphaMode::Best,
            ..SolveOptions::default()
        };
        match pipeline::solve_pipeline(&(*inst).0, &opts) {
            Ok(report) => {
                clear_last_error();
                *out = Box::into_raw(Box::new(SchedReport(report)));
                SchedStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Optimal total weighted completion time by brute force; fails with
/// `INVALID_INSTANCE` beyond `n_limit` jobs (pass 0 for the default 10).
///
/// # Safety
/// `inst` must be a live instance handle and `out_cost` writable.
#[no_mangle]
pub unsafe extern "C" fn sched_exact_optimum(
    inst: *const SchedInstance,
    n_limit: usize,
    out_cost: *mut f64,
) -> SchedStatus {
    guarded(|| {
        if inst.is_null() || out_cost.is_null() {
            set_last_error("null argument".into());
            return SchedStatus::NullArgument;
        }
        let limit = if n_limit == 0 {
            exact::DEFAULT_OPT_LIMIT
        } else {
            n_limit
        };
        let normalized = match instance::normalize_release_dates(&(*inst).0) {
            Ok(i) => i,
            Err(e) => return fail(&e),
        };
        match exact::brute_force_optimum(&normalized, limit) {
            Ok(res) => {
                clear_last_error();
                *out_cost = res.cost;
                SchedStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// LP lower bound of the solved instance, or NaN on a null handle.
///
/// # Safety
/// `report` must be a live report handle or null.
#[no_mangle]
pub unsafe extern "C" fn sched_report_lp_bound(report: *const SchedReport) -> f64 {
    if report.is_null() {
        f64::NAN
    } else {
        (*report).0.lp.objective
    }
}

/// Cost of the double-speed preemptive list schedule, or NaN.
///
/// # Safety
/// `report` must be a live report handle or null.
#[no_mangle]
pub unsafe extern "C" fn sched_report_pmtn_cost(report: *const SchedReport) -> f64 {
    if report.is_null() {
        f64::NAN
    } else {
        (*report).0.pmtn.cost
    }
}

/// Cost of the derandomized nonpreemptive schedule, or NaN.
///
/// # Safety
/// `report` must be a live report handle or null.
#[no_mangle]
pub unsafe extern "C" fn sched_report_alg_cost(report: *const SchedReport) -> f64 {
    if report.is_null() {
        f64::NAN
    } else {
        (*report).0.alpha.cost
    }
}

/// Exact expected cost of the randomized conversion, or NaN.
///
/// # Safety
/// `report` must be a live report handle or null.
#[no_mangle]
pub unsafe extern "C" fn sched_report_expected_cost(report: *const SchedReport) -> f64 {
    if report.is_null() {
        f64::NAN
    } else {
        (*report).0.alpha.expected_cost
    }
}

/// Alpha value the derandomized search settled on, or NaN.
///
/// # Safety
/// `report` must be a live report handle or null.
#[no_mangle]
pub unsafe extern "C" fn sched_report_best_alpha(report: *const SchedReport) -> f64 {
    if report.is_null() {
        f64::NAN
    } else {
        (*report).0.alpha.best_alpha
    }
}

/// Full report as a JSON document; the caller owns the string. Returns
/// null on a null handle.
///
/// # Safety
/// `report` must be a live report handle or null.
#[no_mangle]
pub unsafe extern "C" fn sched_report_to_json(report: *const SchedReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    string_out((*report).0.to_json_pretty())
}

/// Releases a report handle.
///
/// # Safety
/// `report` must be a handle from this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn sched_report_free(report: *mut SchedReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
