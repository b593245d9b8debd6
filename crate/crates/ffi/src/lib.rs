//! C ABI over the `maxavg` library.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Every function returns a [`MaxavgStatus`]
//! (or a sentinel for plain accessors) and never unwinds across the boundary.
//! After a non-OK status, [`maxavg_last_error`] describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use maxavg::reduced::{minimize_chain, OptimizerConfig, ReducedSolution};
use maxavg::structure::{full_maximal_start, m_interval};
use maxavg::sums::{max_avg_sum, sum_with_radii};
use maxavg::{BigRational, Error, PeriodicTuple, RadiusTuple, Scalar};
use num_bigint::BigInt;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxavgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    /// A window average in a denominator is zero.
    Inadmissible = 3,
    /// The optimizer stopped short of its tolerance; the best point is still returned.
    NonConvergence = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

enum Values {
    Float(PeriodicTuple<f64>),
    Exact(PeriodicTuple<BigRational>),
}

/// A periodic tuple in floating-point or exact rational arithmetic.
pub struct MaxavgTuple {
    values: Values,
}

/// Result of a chain minimization.
pub struct MaxavgSolution {
    inner: ReducedSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: MaxavgStatus, msg: &str) -> MaxavgStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> MaxavgStatus {
    let status = match e {
        Error::InadmissiblePair { .. } => MaxavgStatus::Inadmissible,
        Error::NonConvergence { .. } => MaxavgStatus::NonConvergence,
        Error::InvalidInput(_) | Error::Json(_) => MaxavgStatus::InvalidInput,
        _ => MaxavgStatus::Internal,
    };
    fail(status, &e.to_string())
}

fn guard(f: impl FnOnce() -> MaxavgStatus + UnwindSafe) -> MaxavgStatus {
    catch_unwind(f).unwrap_or_else(|_| fail(MaxavgStatus::Internal, "panic inside maxavg"))
}

/// Description of the last failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn maxavg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn maxavg_status_name(status: MaxavgStatus) -> *const c_char {
    let s: &'static std::ffi::CStr = match status {
        MaxavgStatus::Ok => c"ok",
        MaxavgStatus::NullPointer => c"null pointer",
        MaxavgStatus::InvalidInput => c"invalid input",
        MaxavgStatus::Inadmissible => c"inadmissible pair",
        MaxavgStatus::NonConvergence => c"non-convergence",
        MaxavgStatus::BufferTooSmall => c"buffer too small",
        MaxavgStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

unsafe fn slice<'a, T>(data: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        Some(&[])
    } else if data.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(data, len))
    }
}

fn store<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Creates a tuple from `len` doubles.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maxavg_tuple_new(values: *const f64, len: usize, out: *mut *mut MaxavgTuple) -> MaxavgStatus {
    guard(|| {
        if out.is_null() {
            return fail(MaxavgStatus::NullPointer, "out is null");
        }
        let Some(v) = slice(values, len) else { return fail(MaxavgStatus::NullPointer, "values is null") };
        match PeriodicTuple::new(v.to_vec()) {
            Ok(t) => {
                store(out, MaxavgTuple { values: Values::Float(t) });
                MaxavgStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Creates an exact tuple with entries `num[k] / den[k]`.
///
/// # Safety
/// `num` and `den` must point to `len` readable integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maxavg_tuple_new_rational(
    num: *const i64,
    den: *const i64,
    len: usize,
    out: *mut *mut MaxavgTuple,
) -> MaxavgStatus {
    guard(|| {
        if out.is_null() {
            return fail(MaxavgStatus::NullPointer, "out is null");
        }
        let (Some(n), Some(d)) = (slice(num, len), slice(den, len)) else {
            return fail(MaxavgStatus::NullPointer, "num or den is null");
        };
        if let Some(k) = d.iter().position(|&v| v == 0) {
            return fail(MaxavgStatus::InvalidInput, &format!("denominator {} is zero", k + 1));
        }
        let values = n.iter().zip(d).map(|(&a, &b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect();
        match PeriodicTuple::new(values) {
            Ok(t) => {
                store(out, MaxavgTuple { values: Values::Exact(t) });
                MaxavgStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `tuple` must be null or a handle from `maxavg_tuple_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn maxavg_tuple_free(tuple: *mut MaxavgTuple) {
    if !tuple.is_null() {
        drop(Box::from_raw(tuple));
    }
}

/// Period length, or 0 for a null handle.
///
/// # Safety
/// `tuple` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxavg_tuple_len(tuple: *const MaxavgTuple) -> usize {
    match tuple.as_ref().map(|t| &t.values) {
        Some(Values::Float(x)) => x.len(),
        Some(Values::Exact(x)) => x.len(),
        None => 0,
    }
}

fn right_maximal_impl<T: Scalar>(x: &PeriodicTuple<T>, i: i64) -> (f64, usize) {
    let (m, len) = x.right_maximal_arg(i);
    (m.to_f64(), len)
}

/// `M^r x(i)` and the smallest window length attaining it. `length` may be null.
///
/// # Safety
/// `tuple` must be a live handle; `value` writable; `length` null or writable.
#[no_mangle]
pub unsafe extern "C" fn maxavg_right_maximal(
    tuple: *const MaxavgTuple,
    i: i64,
    value: *mut f64,
    length: *mut usize,
) -> MaxavgStatus {
    guard(|| {
        let (Some(t), false) = (tuple.as_ref(), value.is_null()) else {
            return fail(MaxavgStatus::NullPointer, "tuple or value is null");
        };
        let (m, len) = match &t.values {
            Values::Float(x) => right_maximal_impl(x, i),
            Values::Exact(x) => right_maximal_impl(x, i),
        };
        *value = m;
        if !length.is_null() {
            *length = len;
        }
        MaxavgStatus::Ok
    })
}

/// M-interval `[start : start + kappa]` at index `i`, with its average.
///
/// # Safety
/// `tuple` must be a live handle; the three outputs writable.
#[no_mangle]
pub unsafe extern "C" fn maxavg_m_interval(
    tuple: *const MaxavgTuple,
    i: i64,
    start: *mut usize,
    kappa: *mut usize,
    average: *mut f64,
) -> MaxavgStatus {
    guard(|| {
        let Some(t) = tuple.as_ref() else { return fail(MaxavgStatus::NullPointer, "tuple is null") };
        if start.is_null() || kappa.is_null() || average.is_null() {
            return fail(MaxavgStatus::NullPointer, "output is null");
        }
        let (s, k, a) = match &t.values {
            Values::Float(x) => {
                let m = m_interval(x, i);
                (m.start, m.kappa, m.average)
            }
            Values::Exact(x) => {
                let m = m_interval(x, i);
                (m.start, m.kappa, m.average.to_f64())
            }
        };
        *start = s;
        *kappa = k;
        *average = a;
        MaxavgStatus::Ok
    })
}

/// Start of the full maximal interval, in `1..=n`.
///
/// # Safety
/// `tuple` must be a live handle; `start` writable.
#[no_mangle]
pub unsafe extern "C" fn maxavg_full_maximal_start(tuple: *const MaxavgTuple, start: *mut usize) -> MaxavgStatus {
    guard(|| {
        let (Some(t), false) = (tuple.as_ref(), start.is_null()) else {
            return fail(MaxavgStatus::NullPointer, "tuple or start is null");
        };
        *start = match &t.values {
            Values::Float(x) => full_maximal_start(x),
            Values::Exact(x) => full_maximal_start(x),
        };
        MaxavgStatus::Ok
    })
}

/// `S^max(x)`. If `radii` is non-null it receives the `n` maximizing radii
/// and `radii_len` must be at least `n`.
///
/// # Safety
/// `tuple` must be a live handle; `value` writable; `radii` null or `radii_len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn maxavg_max_avg_sum(
    tuple: *const MaxavgTuple,
    value: *mut f64,
    radii: *mut usize,
    radii_len: usize,
) -> MaxavgStatus {
    guard(|| {
        let (Some(t), false) = (tuple.as_ref(), value.is_null()) else {
            return fail(MaxavgStatus::NullPointer, "tuple or value is null");
        };
        let (v, r) = match &t.values {
            Values::Float(x) => {
                let s = max_avg_sum(x);
                (s.value, s.radii)
            }
            Values::Exact(x) => {
                let s = max_avg_sum(x);
                (s.value.to_f64(), s.radii)
            }
        };
        if !radii.is_null() {
            if radii_len < r.len() {
                return fail(MaxavgStatus::BufferTooSmall, &format!("radii needs {} entries", r.len()));
            }
            ptr::copy_nonoverlapping(r.as_slice().as_ptr(), radii, r.len());
        }
        *value = v;
        MaxavgStatus::Ok
    })
}

/// `S_n(x, r)` for `len == n` positive radii.
///
/// # Safety
/// `tuple` must be a live handle; `radii` readable for `len` entries; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn maxavg_sum_with_radii(
    tuple: *const MaxavgTuple,
    radii: *const usize,
    len: usize,
    value: *mut f64,
) -> MaxavgStatus {
    guard(|| {
        let (Some(t), Some(r), false) = (tuple.as_ref(), slice(radii, len), value.is_null()) else {
            return fail(MaxavgStatus::NullPointer, "tuple, radii or value is null");
        };
        let r = match RadiusTuple::new(r.to_vec()) {
            Ok(r) => r,
            Err(e) => return from_error(&e),
        };
        let result = match &t.values {
            Values::Float(x) => sum_with_radii(x, &r),
            Values::Exact(x) => sum_with_radii(x, &r).map(|v| v.to_f64()),
        };
        match result {
            Ok(v) => {
                *value = v;
                MaxavgStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Minimizes the chain objective over the length-`n` simplex with weight
/// `p`. `tol <= 0` selects the default tolerance. On
/// `MAXAVG_STATUS_NON_CONVERGENCE` the best point found is still stored.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maxavg_minimize_chain(n: usize, p: f64, tol: f64, out: *mut *mut MaxavgSolution) -> MaxavgStatus {
    guard(|| {
        if out.is_null() {
            return fail(MaxavgStatus::NullPointer, "out is null");
        }
        let cfg = if tol > 0.0 {
            match OptimizerConfig::with_tolerance(tol) {
                Ok(c) => c,
                Err(e) => return from_error(&e),
            }
        } else {
            OptimizerConfig::default()
        };
        match minimize_chain(n, p, &cfg) {
            Ok(s) => {
                store(out, MaxavgSolution { inner: s });
                MaxavgStatus::Ok
            }
            Err(Error::NonConvergence { best }) => {
                let status = fail(MaxavgStatus::NonConvergence, &format!("residual {:e}", best.residual));
                store(out, MaxavgSolution { inner: *best });
                status
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `solution` must be null or a handle from `maxavg_minimize_chain` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn maxavg_solution_free(solution: *mut MaxavgSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Minimum value, NaN for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxavg_solution_value(solution: *const MaxavgSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.inner.value)
}

/// Projected-gradient norm at the minimizer, NaN for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxavg_solution_residual(solution: *const MaxavgSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.inner.residual)
}

/// Number of nonzero entries, 0 for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxavg_solution_support(solution: *const MaxavgSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.inner.support)
}

/// Whether the stationarity tolerance was met.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxavg_solution_converged(solution: *const MaxavgSolution) -> bool {
    solution.as_ref().is_some_and(|s| s.inner.converged)
}

/// Copies the nonzero tail `(x_{1-k}, ..., x_0)` of the minimizer into `out`,
/// which must hold at least `maxavg_solution_support` entries.
///
/// # Safety
/// `solution` must be a live handle; `out` writable for `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn maxavg_solution_minimizer(solution: *const MaxavgSolution, out: *mut f64, cap: usize) -> MaxavgStatus {
    guard(|| {
        let (Some(s), false) = (solution.as_ref(), out.is_null()) else {
            return fail(MaxavgStatus::NullPointer, "solution or out is null");
        };
        let tail = s.inner.minimizer.tail();
        if cap < tail.len() {
            return fail(MaxavgStatus::BufferTooSmall, &format!("minimizer needs {} entries", tail.len()));
        }
        ptr::copy_nonoverlapping(tail.as_ptr(), out, tail.len());
        MaxavgStatus::Ok
    })
}
