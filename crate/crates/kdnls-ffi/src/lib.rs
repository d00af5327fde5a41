//! C ABI for the kdnls simulation laboratory.
//!
//! The surface is a small opaque-handle API: parse a configuration, run the
//! experiment, then query scalar results, snapshot spectra, or the full JSON
//! summary. Every fallible call returns a [`KdnlsStatus`] code; on failure a
//! thread-local message is retrievable via [`kdnls_last_error_message`].
//!
//! Ownership rules:
//! * handles from `*_parse` / `*_run` calls are freed with the matching
//!   `*_free` function, exactly once;
//! * strings returned as `*mut c_char` are freed with [`kdnls_string_free`];
//! * `kdnls_version` returns a static string that must not be freed.
//!
//! The C header is generated by the build script into `include/kdnls.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};

use kdnls::io::{self, ExperimentConfig, Summary};
use kdnls::solver::Trajectory;
use kdnls::verify::{run_suite, Suite};
use kdnls::Error;

/// Result code returned by every fallible API call.
///
/// The numbering matches the CLI exit codes for the overlapping cases
/// (0 success, 1 verification failure, 2 configuration error, 3 numerical
/// abort).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdnlsStatus {
    /// The call succeeded.
    KdnlsOk = 0,
    /// A verification suite ran to completion but at least one check failed.
    KdnlsVerifyFailed = 1,
    /// The configuration text or an argument value was invalid.
    KdnlsConfigError = 2,
    /// The solver aborted (blow-up heuristic or boundary contamination).
    KdnlsNumericalError = 3,
    /// A required pointer argument was null.
    KdnlsNullPointer = 4,
    /// A string argument was not valid UTF-8.
    KdnlsInvalidUtf8 = 5,
    /// An index was out of range or a buffer was too small.
    KdnlsOutOfRange = 6,
    /// Filesystem or serialization failure while writing run artifacts.
    KdnlsIoError = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> KdnlsStatus {
    match err {
        Error::NumericalAbort { .. } | Error::BoundaryContamination { .. } => {
            KdnlsStatus::KdnlsNumericalError
        }
        Error::Io(_) => KdnlsStatus::KdnlsIoError,
        _ => KdnlsStatus::KdnlsConfigError,
    }
}

fn fail(err: &Error) -> KdnlsStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Opaque handle to a parsed experiment configuration.
pub struct KdnlsConfig {
    inner: ExperimentConfig,
}

/// Opaque handle to a completed run: output location, summary, trajectory.
pub struct KdnlsRun {
    out_dir: PathBuf,
    summary: Summary,
    trajectory: Trajectory,
}

unsafe fn cstr_arg<'a>(ptr: *const c_char) -> Result<&'a str, KdnlsStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(KdnlsStatus::KdnlsNullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        KdnlsStatus::KdnlsInvalidUtf8
    })
}

fn leak_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Returns the library version as a static NUL-terminated string.
/// The pointer is valid for the lifetime of the process; do not free it.
#[no_mangle]
pub extern "C" fn kdnls_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Returns the message for the most recent error on this thread, or null if
/// no error has occurred. Free the result with `kdnls_string_free`.
#[no_mangle]
pub extern "C" fn kdnls_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Frees a string previously returned by this library.
/// Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library's string-returning
/// functions, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kdnls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses experiment configuration text (the same flat `key = value` format
/// the CLI reads from file) into a new handle written to `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdnls_config_parse(
    text: *const c_char,
    out: *mut *mut KdnlsConfig,
) -> KdnlsStatus {
    if out.is_null() {
        set_error("null output pointer");
        return KdnlsStatus::KdnlsNullPointer;
    }
    let text = match unsafe { cstr_arg(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match io::parse_config(text) {
        Ok(cfg) => {
            unsafe { *out = Box::into_raw(Box::new(KdnlsConfig { inner: cfg })) };
            KdnlsStatus::KdnlsOk
        }
        Err(e) => fail(&e),
    }
}

/// Frees a configuration handle. Passing null is a no-op.
///
/// # Safety
/// `cfg` must be null or an unfreed handle from `kdnls_config_parse`.
#[no_mangle]
pub unsafe extern "C" fn kdnls_config_free(cfg: *mut KdnlsConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Returns the SHA-256 hash of the configuration text as a hex string.
/// Free the result with `kdnls_string_free`; returns null if `cfg` is null.
///
/// # Safety
/// `cfg` must be null or a live handle from `kdnls_config_parse`.
#[no_mangle]
pub unsafe extern "C" fn kdnls_config_hash(cfg: *const KdnlsConfig) -> *mut c_char {
    match unsafe { cfg.as_ref() } {
        Some(c) => leak_string(c.inner.sha256()),
        None => std::ptr::null_mut(),
    }
}

/// Runs the configured experiment, writing artifacts under the configured
/// output directory (resolved against `output_root` when that is non-null
/// and the configured directory is relative). On success writes a run handle
/// to `*out`.
///
/// # Safety
/// `cfg` must be a live handle from `kdnls_config_parse`; `output_root` must
/// be null or NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_experiment(
    cfg: *const KdnlsConfig,
    output_root: *const c_char,
    out: *mut *mut KdnlsRun,
) -> KdnlsStatus {
    if out.is_null() {
        set_error("null output pointer");
        return KdnlsStatus::KdnlsNullPointer;
    }
    let cfg = match unsafe { cfg.as_ref() } {
        Some(c) => c,
        None => {
            set_error("null configuration handle");
            return KdnlsStatus::KdnlsNullPointer;
        }
    };
    let root = if output_root.is_null() {
        None
    } else {
        match unsafe { cstr_arg(output_root) } {
            Ok(s) => Some(PathBuf::from(s)),
            Err(s) => return s,
        }
    };
    match io::run_experiment(&cfg.inner, root.as_deref().map(Path::new)) {
        Ok((out_dir, summary, trajectory)) => {
            let run = KdnlsRun {
                out_dir,
                summary,
                trajectory,
            };
            unsafe { *out = Box::into_raw(Box::new(run)) };
            KdnlsStatus::KdnlsOk
        }
        Err(e) => fail(&e),
    }
}

/// Frees a run handle. Passing null is a no-op.
///
/// # Safety
/// `run` must be null or an unfreed handle from `kdnls_run_experiment`.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_free(run: *mut KdnlsRun) {
    if !run.is_null() {
        drop(unsafe { Box::from_raw(run) });
    }
}

/// Returns the output directory the run wrote to.
/// Free the result with `kdnls_string_free`; returns null if `run` is null.
///
/// # Safety
/// `run` must be null or a live handle from `kdnls_run_experiment`.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_output_dir(run: *const KdnlsRun) -> *mut c_char {
    match unsafe { run.as_ref() } {
        Some(r) => leak_string(r.out_dir.display().to_string()),
        None => std::ptr::null_mut(),
    }
}

/// Returns the run summary serialized as JSON.
/// Free the result with `kdnls_string_free`; returns null if `run` is null
/// or serialization fails.
///
/// # Safety
/// `run` must be null or a live handle from `kdnls_run_experiment`.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_summary_json(run: *const KdnlsRun) -> *mut c_char {
    match unsafe { run.as_ref() } {
        Some(r) => match serde_json::to_string_pretty(&r.summary) {
            Ok(s) => leak_string(s),
            Err(e) => {
                set_error(&e.to_string());
                std::ptr::null_mut()
            }
        },
        None => std::ptr::null_mut(),
    }
}

unsafe fn run_scalar(
    run: *const KdnlsRun,
    out: *mut f64,
    get: impl FnOnce(&KdnlsRun) -> f64,
) -> KdnlsStatus {
    if out.is_null() {
        set_error("null output pointer");
        return KdnlsStatus::KdnlsNullPointer;
    }
    match unsafe { run.as_ref() } {
        Some(r) => {
            unsafe { *out = get(r) };
            KdnlsStatus::KdnlsOk
        }
        None => {
            set_error("null run handle");
            KdnlsStatus::KdnlsNullPointer
        }
    }
}

/// Writes the final simulation time to `*out`.
///
/// # Safety
/// `run` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_final_time(run: *const KdnlsRun, out: *mut f64) -> KdnlsStatus {
    unsafe { run_scalar(run, out, |r| r.trajectory.final_state.t) }
}

/// Writes the final spectrum L2 norm to `*out`.
///
/// # Safety
/// `run` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_final_l2(run: *const KdnlsRun, out: *mut f64) -> KdnlsStatus {
    unsafe { run_scalar(run, out, |r| r.trajectory.final_state.f_hat.l2_norm()) }
}

/// Writes the measured initial-data size (weighted Sobolev norm of the
/// initial profile) to `*out`.
///
/// # Safety
/// `run` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_measured_eps(
    run: *const KdnlsRun,
    out: *mut f64,
) -> KdnlsStatus {
    unsafe { run_scalar(run, out, |r| r.trajectory.measured_eps) }
}

/// Writes the number of stored snapshots to `*out`.
///
/// # Safety
/// `run` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_snapshot_count(
    run: *const KdnlsRun,
    out: *mut usize,
) -> KdnlsStatus {
    if out.is_null() {
        set_error("null output pointer");
        return KdnlsStatus::KdnlsNullPointer;
    }
    match unsafe { run.as_ref() } {
        Some(r) => {
            unsafe { *out = r.trajectory.snapshots.len() };
            KdnlsStatus::KdnlsOk
        }
        None => {
            set_error("null run handle");
            KdnlsStatus::KdnlsNullPointer
        }
    }
}

/// Writes the time and spectrum length of snapshot `index` to `*time` and
/// `*len`. `len` is the number of complex coefficients.
///
/// # Safety
/// `run` must be a live handle; `time` and `len` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_snapshot_info(
    run: *const KdnlsRun,
    index: usize,
    time: *mut f64,
    len: *mut usize,
) -> KdnlsStatus {
    if time.is_null() || len.is_null() {
        set_error("null output pointer");
        return KdnlsStatus::KdnlsNullPointer;
    }
    let r = match unsafe { run.as_ref() } {
        Some(r) => r,
        None => {
            set_error("null run handle");
            return KdnlsStatus::KdnlsNullPointer;
        }
    };
    match r.trajectory.snapshots.get(index) {
        Some(s) => {
            unsafe {
                *time = s.t;
                *len = s.f_hat.coeffs.len();
            }
            KdnlsStatus::KdnlsOk
        }
        None => {
            set_error("snapshot index out of range");
            KdnlsStatus::KdnlsOutOfRange
        }
    }
}

/// Copies the spectrum of snapshot `index` into `buf` as interleaved
/// `(re, im)` pairs; `buf_len` is the capacity of `buf` in doubles and must
/// be at least twice the coefficient count reported by
/// `kdnls_run_snapshot_info`. Coefficients are in FFT bin order.
///
/// # Safety
/// `run` must be a live handle; `buf` must point to at least `buf_len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn kdnls_run_snapshot_spectrum(
    run: *const KdnlsRun,
    index: usize,
    buf: *mut f64,
    buf_len: usize,
) -> KdnlsStatus {
    if buf.is_null() {
        set_error("null buffer");
        return KdnlsStatus::KdnlsNullPointer;
    }
    let r = match unsafe { run.as_ref() } {
        Some(r) => r,
        None => {
            set_error("null run handle");
            return KdnlsStatus::KdnlsNullPointer;
        }
    };
    let snap = match r.trajectory.snapshots.get(index) {
        Some(s) => s,
        None => {
            set_error("snapshot index out of range");
            return KdnlsStatus::KdnlsOutOfRange;
        }
    };
    let n = snap.f_hat.coeffs.len();
    if buf_len < 2 * n {
        set_error("buffer too small for snapshot spectrum");
        return KdnlsStatus::KdnlsOutOfRange;
    }
    let out = unsafe { std::slice::from_raw_parts_mut(buf, 2 * n) };
    for (i, c) in snap.f_hat.coeffs.iter().enumerate() {
        out[2 * i] = c.re;
        out[2 * i + 1] = c.im;
    }
    KdnlsStatus::KdnlsOk
}

/// Runs a canned verification suite by name (`operators`, `solver-order`,
/// `identities`, `scattering`, or `dissipation`). Returns `KdnlsOk` when
/// every check passes and `KdnlsVerifyFailed` when at least one fails; in
/// the latter case the error message lists the failing checks. Some suites
/// run multi-minute simulations.
///
/// # Safety
/// `name` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kdnls_verify_suite(name: *const c_char) -> KdnlsStatus {
    let name = match unsafe { cstr_arg(name) } {
        Ok(n) => n,
        Err(s) => return s,
    };
    let suite = match Suite::parse(name) {
        Some(s) => s,
        None => {
            set_error(&format!("unknown suite \"{name}\""));
            return KdnlsStatus::KdnlsConfigError;
        }
    };
    match run_suite(suite) {
        Ok(report) if report.passed() => KdnlsStatus::KdnlsOk,
        Ok(report) => {
            let failing: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            set_error(&format!("failing checks: {}", failing.join(", ")));
            KdnlsStatus::KdnlsVerifyFailed
        }
        Err(e) => fail(&e),
    }
}
