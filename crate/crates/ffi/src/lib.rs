//! C ABI for the zolo solver.
//!
//! Every fallible function returns a [`ZoloStatus`]. On failure a message is
//! kept per thread and can be read with [`zolo_last_error_message`]. Handles
//! are opaque and owned by the caller, who releases them with the matching
//! `*_free` function. Panics never cross the boundary; they surface as
//! [`ZoloStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use zolo::config::{ResolvedConfig, RunConfig};
use zolo::geometry::SampleSet;
use zolo::report::ResultDocument;
use zolo::zolotarev::{sigma_to_tau, solve, tau_to_sigma, ProblemSpec, Z3Solution, Z4Solution};
use zolo::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZoloStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or malformed (bad UTF-8, bad point data).
    InvalidArgument = 2,
    /// A configuration or preset could not be resolved.
    Config = 3,
    /// The numerical pipeline failed.
    Numerical = 4,
    /// The fit error reached 1, so there is no ratio solution.
    DegreeTooLow = 5,
    /// The caller's buffer is too small; the needed length was written.
    BufferTooSmall = 6,
    /// An internal panic was caught.
    Panic = 7,
}

/// A problem: samples plus solver settings.
pub struct ZoloProblem {
    spec: ProblemSpec,
}

/// The result of [`zolo_solve`].
pub struct ZoloSolution {
    degree: usize,
    z4: Z4Solution,
    z3: Option<Z3Solution>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: ZoloStatus, message: impl Into<String>) -> ZoloStatus {
    set_error(message);
    status
}

fn from_error(err: Error) -> ZoloStatus {
    let status = match err {
        Error::Config(_) => ZoloStatus::Config,
        Error::DegreeTooLow(_) => ZoloStatus::DegreeTooLow,
        Error::EmptySet(_)
        | Error::DegenerateSegment
        | Error::InvalidShape(_)
        | Error::NotDisjoint { .. }
        | Error::TooFewSamples { .. }
        | Error::RepeatedPoint(_)
        | Error::Domain(_) => ZoloStatus::InvalidArgument,
        _ => ZoloStatus::Numerical,
    };
    fail(status, err.to_string())
}

/// Runs `body`, turning panics into [`ZoloStatus::Panic`].
fn guard(body: impl FnOnce() -> ZoloStatus) -> ZoloStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            fail(ZoloStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, ZoloStatus> {
    if s.is_null() {
        return Err(fail(ZoloStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(ZoloStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn read_points(re: *const f64, im: *const f64, len: usize, what: &str) -> Result<Vec<Complex64>, ZoloStatus> {
    if len == 0 {
        return Err(fail(ZoloStatus::InvalidArgument, format!("{what} is empty")));
    }
    if re.is_null() || im.is_null() {
        return Err(fail(ZoloStatus::NullPointer, format!("{what} coordinates are null")));
    }
    let (re, im) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
    Ok(re.iter().zip(im).map(|(x, y)| Complex64::new(*x, *y)).collect())
}

fn store<T>(out: *mut *mut T, value: T) -> ZoloStatus {
    // SAFETY: callers check `out` for null first
    unsafe { *out = Box::into_raw(Box::new(value)) };
    ZoloStatus::Ok
}

fn problem_from_config(config: &RunConfig) -> Result<ZoloProblem, ZoloStatus> {
    let resolved: ResolvedConfig = config.resolve().map_err(from_error)?;
    Ok(ZoloProblem { spec: resolved.problem() })
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn zolo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zolo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a problem from a preset name such as `"fig1a"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_problem_from_preset(name: *const c_char, out: *mut *mut ZoloProblem) -> ZoloStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZoloStatus::NullPointer, "out is null");
        }
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match problem_from_config(&RunConfig::from_preset(name)) {
            Ok(p) => store(out, p),
            Err(status) => status,
        }
    })
}

/// Builds a problem from a JSON run configuration.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_problem_from_json(json: *const c_char, out: *mut *mut ZoloProblem) -> ZoloStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZoloStatus::NullPointer, "out is null");
        }
        let text = match read_str(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match RunConfig::from_json(text).map_err(from_error).and_then(|c| problem_from_config(&c)) {
            Ok(p) => store(out, p),
            Err(status) => status,
        }
    })
}

/// Builds a problem from explicit samples of `E` and `F` with default solver
/// settings at the given degree.
///
/// # Safety
/// Each coordinate pointer must reference `n_e` or `n_f` doubles, and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_problem_from_points(
    e_re: *const f64,
    e_im: *const f64,
    n_e: usize,
    f_re: *const f64,
    f_im: *const f64,
    n_f: usize,
    degree: usize,
    out: *mut *mut ZoloProblem,
) -> ZoloStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZoloStatus::NullPointer, "out is null");
        }
        let built = read_points(e_re, e_im, n_e, "E").and_then(|e| {
            let f = read_points(f_re, f_im, n_f, "F")?;
            SampleSet::from_points(e, f).map_err(from_error)
        });
        match built {
            Ok(samples) => store(out, ZoloProblem { spec: ProblemSpec::new(samples, degree) }),
            Err(status) => status,
        }
    })
}

/// Overrides the degree.
///
/// # Safety
/// `problem` must come from a `zolo_problem_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn zolo_problem_set_degree(problem: *mut ZoloProblem, degree: usize) -> ZoloStatus {
    guard(|| match problem.as_mut() {
        None => fail(ZoloStatus::NullPointer, "problem is null"),
        Some(p) => {
            p.spec.degree = degree;
            p.spec.aaa_opts.degree = degree;
            ZoloStatus::Ok
        }
    })
}

/// Overrides the Lawson step count and damping factor (in `(0, 1]`).
///
/// # Safety
/// `problem` must come from a `zolo_problem_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn zolo_problem_set_lawson(problem: *mut ZoloProblem, steps: usize, damping: f64) -> ZoloStatus {
    guard(|| match problem.as_mut() {
        None => fail(ZoloStatus::NullPointer, "problem is null"),
        Some(_) if !(damping > 0.0 && damping <= 1.0) => {
            fail(ZoloStatus::InvalidArgument, format!("damping must lie in (0, 1], got {damping}"))
        }
        Some(p) => {
            p.spec.lawson_opts.steps = steps;
            p.spec.lawson_opts.delta = damping;
            ZoloStatus::Ok
        }
    })
}

/// Number of samples in `E` and `F`.
///
/// # Safety
/// `problem` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn zolo_problem_sample_counts(
    problem: *const ZoloProblem,
    n_e: *mut usize,
    n_f: *mut usize,
) -> ZoloStatus {
    guard(|| match (problem.as_ref(), n_e.is_null() || n_f.is_null()) {
        (Some(p), false) => {
            *n_e = p.spec.samples.points_e.len();
            *n_f = p.spec.samples.points_f.len();
            ZoloStatus::Ok
        }
        _ => fail(ZoloStatus::NullPointer, "null argument"),
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zolo_problem_free(problem: *mut ZoloProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Solves the sign problem and, when its error is below 1, the ratio problem.
/// A solution with `tau >= 1` is still returned with status `Ok`; ratio
/// queries on it report [`ZoloStatus::DegreeTooLow`].
///
/// # Safety
/// `problem` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_solve(problem: *const ZoloProblem, out: *mut *mut ZoloSolution) -> ZoloStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(ZoloStatus::NullPointer, "problem is null");
        };
        if out.is_null() {
            return fail(ZoloStatus::NullPointer, "out is null");
        }
        match solve(&p.spec) {
            Ok((z4, z3)) => store(out, ZoloSolution { degree: p.spec.degree, z4, z3 }),
            Err(e) => from_error(e),
        }
    })
}

unsafe fn with_solution(
    s: *const ZoloSolution,
    out_ok: bool,
    body: impl FnOnce(&ZoloSolution) -> ZoloStatus,
) -> ZoloStatus {
    guard(|| match s.as_ref() {
        Some(sol) if out_ok => body(sol),
        _ => fail(ZoloStatus::NullPointer, "null argument"),
    })
}

fn ratio(sol: &ZoloSolution) -> Result<&Z3Solution, ZoloStatus> {
    sol.z3
        .as_ref()
        .ok_or_else(|| fail(ZoloStatus::DegreeTooLow, format!("tau = {} >= 1: no ratio solution", sol.z4.tau)))
}

/// Max error `tau` of the sign approximation.
///
/// # Safety
/// `solution` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_tau(solution: *const ZoloSolution, out: *mut f64) -> ZoloStatus {
    with_solution(solution, !out.is_null(), |s| {
        *out = s.z4.tau;
        ZoloStatus::Ok
    })
}

/// The ratio problem's value `sigma`.
///
/// # Safety
/// `solution` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_sigma(solution: *const ZoloSolution, out: *mut f64) -> ZoloStatus {
    with_solution(solution, !out.is_null(), |s| match ratio(s) {
        Ok(z3) => {
            *out = z3.sigma;
            ZoloStatus::Ok
        }
        Err(status) => status,
    })
}

/// Evaluates the sign approximation `r_hat` at `re + i im`.
///
/// # Safety
/// `solution` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_eval_sign(
    solution: *const ZoloSolution,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ZoloStatus {
    with_solution(solution, !(out_re.is_null() || out_im.is_null()), |s| {
        let v = s.z4.r_hat.eval(Complex64::new(re, im));
        (*out_re, *out_im) = (v.re, v.im);
        ZoloStatus::Ok
    })
}

/// Evaluates the ratio function `r_star` at `re + i im`.
///
/// # Safety
/// `solution` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_eval_ratio(
    solution: *const ZoloSolution,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ZoloStatus {
    with_solution(solution, !(out_re.is_null() || out_im.is_null()), |s| match ratio(s) {
        Ok(z3) => {
            let v = z3.eval(Complex64::new(re, im));
            (*out_re, *out_im) = (v.re, v.im);
            ZoloStatus::Ok
        }
        Err(status) => status,
    })
}

unsafe fn copy_points(
    points: &[Complex64],
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> ZoloStatus {
    *len = points.len();
    if points.len() > capacity {
        return fail(ZoloStatus::BufferTooSmall, format!("need room for {} points, got {capacity}", points.len()));
    }
    if points.is_empty() {
        return ZoloStatus::Ok;
    }
    if re.is_null() || im.is_null() {
        return fail(ZoloStatus::NullPointer, "output buffers are null");
    }
    for (k, z) in points.iter().enumerate() {
        *re.add(k) = z.re;
        *im.add(k) = z.im;
    }
    ZoloStatus::Ok
}

/// Copies the poles of `r_star` into `re`/`im` (room for `capacity` each)
/// and writes their count to `len`. With too little room nothing is copied,
/// `len` holds the needed count and the status is `BufferTooSmall`.
///
/// # Safety
/// `solution` must be a live handle, `len` valid, and the buffers must hold
/// `capacity` doubles each.
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_poles(
    solution: *const ZoloSolution,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> ZoloStatus {
    with_solution(solution, !len.is_null(), |s| match ratio(s) {
        Ok(z3) => copy_points(&z3.poles, re, im, capacity, len),
        Err(status) => status,
    })
}

/// Zeros of `r_star`; same buffer contract as [`zolo_solution_poles`].
///
/// # Safety
/// As for [`zolo_solution_poles`].
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_zeros(
    solution: *const ZoloSolution,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> ZoloStatus {
    with_solution(solution, !len.is_null(), |s| match ratio(s) {
        Ok(z3) => copy_points(&z3.zeros, re, im, capacity, len),
        Err(status) => status,
    })
}

/// The full result document as JSON. Release it with [`zolo_string_free`].
///
/// # Safety
/// `solution` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_to_json(solution: *const ZoloSolution, out: *mut *mut c_char) -> ZoloStatus {
    with_solution(solution, !out.is_null(), |s| {
        let text = ResultDocument::new(s.degree, &s.z4, s.z3.as_ref()).and_then(|d| d.to_json());
        match text {
            Ok(t) => match CString::new(t) {
                Ok(c) => {
                    *out = c.into_raw();
                    ZoloStatus::Ok
                }
                Err(_) => fail(ZoloStatus::Numerical, "document contains NUL"),
            },
            Err(e) => from_error(e),
        }
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zolo_solution_free(solution: *mut ZoloSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zolo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `sigma` from `tau`; both must lie in `(0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_tau_to_sigma(tau: f64, out: *mut f64) -> ZoloStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZoloStatus::NullPointer, "out is null");
        }
        match tau_to_sigma(tau) {
            Ok(s) => {
                *out = s;
                ZoloStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `tau` from `sigma`; both must lie in `(0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zolo_sigma_to_tau(sigma: f64, out: *mut f64) -> ZoloStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZoloStatus::NullPointer, "out is null");
        }
        match sigma_to_tau(sigma) {
            Ok(t) => {
                *out = t;
                ZoloStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
