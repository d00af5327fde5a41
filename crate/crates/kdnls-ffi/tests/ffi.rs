//! Exercises the C ABI through the exported extern functions: config
//! parsing, error reporting, a short end-to-end run, scalar and spectrum
//! getters, and handle/string lifecycle.

use std::ffi::{CStr, CString};
use std::ptr;

use kdnls_ffi::*;

fn cstring(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    kdnls_string_free(p);
    s
}

unsafe fn last_error() -> String {
    take_string(kdnls_last_error_message())
}

const SHORT_CONFIG: &str = "\
alpha = 1.0
beta = -0.5
grid_n = 256
grid_length = 120
dt = 0.05
t_end = 1.0
initial_amplitude = 0.3
snapshot_times = 0.5, 1.0
output_dir = run
";

#[test]
fn version_is_static_semver() {
    let v = unsafe { CStr::from_ptr(kdnls_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn config_parse_rejects_bad_text_with_message() {
    unsafe {
        let mut cfg: *mut KdnlsConfig = ptr::null_mut();
        let text = cstring("beta = 1.0\n");
        let status = kdnls_config_parse(text.as_ptr(), &mut cfg);
        assert_eq!(status, KdnlsStatus::KdnlsConfigError);
        assert!(cfg.is_null());
        assert!(last_error().contains("alpha"), "message should name the key");

        let status = kdnls_config_parse(ptr::null(), &mut cfg);
        assert_eq!(status, KdnlsStatus::KdnlsNullPointer);
    }
}

#[test]
fn config_hash_matches_across_handles() {
    unsafe {
        let text = cstring(SHORT_CONFIG);
        let mut a: *mut KdnlsConfig = ptr::null_mut();
        let mut b: *mut KdnlsConfig = ptr::null_mut();
        assert_eq!(kdnls_config_parse(text.as_ptr(), &mut a), KdnlsStatus::KdnlsOk);
        assert_eq!(kdnls_config_parse(text.as_ptr(), &mut b), KdnlsStatus::KdnlsOk);
        let ha = take_string(kdnls_config_hash(a));
        let hb = take_string(kdnls_config_hash(b));
        assert_eq!(ha, hb);
        assert_eq!(ha.len(), 64);
        assert!(ha.chars().all(|c| c.is_ascii_hexdigit()));
        kdnls_config_free(a);
        kdnls_config_free(b);
        kdnls_config_free(ptr::null_mut());
    }
}

#[test]
fn run_and_query_results() {
    let dir = tempfile::tempdir().unwrap();
    let root = cstring(dir.path().to_str().unwrap());
    unsafe {
        let text = cstring(SHORT_CONFIG);
        let mut cfg: *mut KdnlsConfig = ptr::null_mut();
        assert_eq!(kdnls_config_parse(text.as_ptr(), &mut cfg), KdnlsStatus::KdnlsOk);

        let mut run: *mut KdnlsRun = ptr::null_mut();
        let status = kdnls_run_experiment(cfg, root.as_ptr(), &mut run);
        assert_eq!(status, KdnlsStatus::KdnlsOk);

        let out_dir = take_string(kdnls_run_output_dir(run));
        assert!(out_dir.starts_with(dir.path().to_str().unwrap()));
        assert!(std::path::Path::new(&out_dir).join("summary.json").is_file());
        assert!(std::path::Path::new(&out_dir).join("diagnostics.csv").is_file());

        let mut t = f64::NAN;
        assert_eq!(kdnls_run_final_time(run, &mut t), KdnlsStatus::KdnlsOk);
        assert!((t - 1.0).abs() < 1e-12);

        let mut l2 = f64::NAN;
        assert_eq!(kdnls_run_final_l2(run, &mut l2), KdnlsStatus::KdnlsOk);
        assert!(l2 > 0.0 && l2.is_finite());

        let mut eps = f64::NAN;
        assert_eq!(kdnls_run_measured_eps(run, &mut eps), KdnlsStatus::KdnlsOk);
        assert!(eps > 0.0 && eps.is_finite());

        let mut count = 0usize;
        assert_eq!(kdnls_run_snapshot_count(run, &mut count), KdnlsStatus::KdnlsOk);
        assert!(count >= 3, "initial snapshot plus two requested times");

        let (mut time, mut n) = (f64::NAN, 0usize);
        assert_eq!(
            kdnls_run_snapshot_info(run, count - 1, &mut time, &mut n),
            KdnlsStatus::KdnlsOk
        );
        assert!((time - 1.0).abs() < 1e-12);
        assert_eq!(n, 256);

        let mut buf = vec![0.0f64; 2 * n];
        assert_eq!(
            kdnls_run_snapshot_spectrum(run, count - 1, buf.as_mut_ptr(), buf.len()),
            KdnlsStatus::KdnlsOk
        );
        let sum_sq: f64 = buf.iter().map(|x| x * x).sum();
        assert!(sum_sq > 0.0);

        // Undersized buffer and bad index are rejected without writing.
        assert_eq!(
            kdnls_run_snapshot_spectrum(run, count - 1, buf.as_mut_ptr(), n),
            KdnlsStatus::KdnlsOutOfRange
        );
        assert_eq!(
            kdnls_run_snapshot_info(run, count + 7, &mut time, &mut n),
            KdnlsStatus::KdnlsOutOfRange
        );

        let json = take_string(kdnls_run_summary_json(run));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["status"], "ok");

        kdnls_run_free(run);
        kdnls_config_free(cfg);
        kdnls_run_free(ptr::null_mut());
    }
}

#[test]
fn run_reports_null_handles() {
    unsafe {
        let mut run: *mut KdnlsRun = ptr::null_mut();
        assert_eq!(
            kdnls_run_experiment(ptr::null(), ptr::null(), &mut run),
            KdnlsStatus::KdnlsNullPointer
        );
        let mut x = 0.0f64;
        assert_eq!(kdnls_run_final_l2(ptr::null(), &mut x), KdnlsStatus::KdnlsNullPointer);
        assert!(kdnls_run_output_dir(ptr::null()).is_null());
    }
}

#[test]
fn verify_rejects_unknown_suite() {
    unsafe {
        let name = cstring("no-such-suite");
        assert_eq!(kdnls_verify_suite(name.as_ptr()), KdnlsStatus::KdnlsConfigError);
        assert!(last_error().contains("no-such-suite"));
    }
}

#[test]
fn generated_header_is_current() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("kdnls.h");
    let text = std::fs::read_to_string(&header).expect("include/kdnls.h should be generated");
    for symbol in [
        "kdnls_config_parse",
        "kdnls_config_free",
        "kdnls_config_hash",
        "kdnls_run_experiment",
        "kdnls_run_free",
        "kdnls_run_output_dir",
        "kdnls_run_summary_json",
        "kdnls_run_final_time",
        "kdnls_run_final_l2",
        "kdnls_run_measured_eps",
        "kdnls_run_snapshot_count",
        "kdnls_run_snapshot_info",
        "kdnls_run_snapshot_spectrum",
        "kdnls_verify_suite",
        "kdnls_last_error_message",
        "kdnls_string_free",
        "kdnls_version",
        "kdnls_status_t",
        "kdnls_config_t",
        "kdnls_run_t",
    ] {
        assert!(text.contains(symbol), "header missing {symbol}");
    }
}
