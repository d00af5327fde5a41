/* C interface to the kdnls simulation laboratory. Generated by cbindgen; do not edit. */

#ifndef KDNLS_H
#define KDNLS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code returned by every fallible API call.
//
// The numbering matches the CLI exit codes for the overlapping cases
// (0 success, 1 verification failure, 2 configuration error, 3 numerical
// abort).
typedef enum kdnls_status_t {
  // The call succeeded.
  KDNLS_OK = 0,
  // A verification suite ran to completion but at least one check failed.
  KDNLS_VERIFY_FAILED = 1,
  // The configuration text or an argument value was invalid.
  KDNLS_CONFIG_ERROR = 2,
  // The solver aborted (blow-up heuristic or boundary contamination).
  KDNLS_NUMERICAL_ERROR = 3,
  // A required pointer argument was null.
  KDNLS_NULL_POINTER = 4,
  // A string argument was not valid UTF-8.
  KDNLS_INVALID_UTF8 = 5,
  // An index was out of range or a buffer was too small.
  KDNLS_OUT_OF_RANGE = 6,
  // Filesystem or serialization failure while writing run artifacts.
  KDNLS_IO_ERROR = 7,
} kdnls_status_t;

// Opaque handle to a parsed experiment configuration.
typedef struct kdnls_config_t kdnls_config_t;

// Opaque handle to a completed run: output location, summary, trajectory.
typedef struct kdnls_run_t kdnls_run_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the library version as a static NUL-terminated string.
// The pointer is valid for the lifetime of the process; do not free it.
const char *kdnls_version(void);

// Returns the message for the most recent error on this thread, or null if
// no error has occurred. Free the result with `kdnls_string_free`.
char *kdnls_last_error_message(void);

// Frees a string previously returned by this library.
// Passing null is a no-op.
//
// # Safety
// `s` must be null or a pointer obtained from this library's string-returning
// functions, not yet freed.
void kdnls_string_free(char *s);

// Parses experiment configuration text (the same flat `key = value` format
// the CLI reads from file) into a new handle written to `*out`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be a valid pointer.
enum kdnls_status_t kdnls_config_parse(const char *text, struct kdnls_config_t **out);

// Frees a configuration handle. Passing null is a no-op.
//
// # Safety
// `cfg` must be null or an unfreed handle from `kdnls_config_parse`.
void kdnls_config_free(struct kdnls_config_t *cfg);

// Returns the SHA-256 hash of the configuration text as a hex string.
// Free the result with `kdnls_string_free`; returns null if `cfg` is null.
//
// # Safety
// `cfg` must be null or a live handle from `kdnls_config_parse`.
char *kdnls_config_hash(const struct kdnls_config_t *cfg);

// Runs the configured experiment, writing artifacts under the configured
// output directory (resolved against `output_root` when that is non-null
// and the configured directory is relative). On success writes a run handle
// to `*out`.
//
// # Safety
// `cfg` must be a live handle from `kdnls_config_parse`; `output_root` must
// be null or NUL-terminated; `out` must be a valid pointer.
enum kdnls_status_t kdnls_run_experiment(const struct kdnls_config_t *cfg,
                                         const char *output_root,
                                         struct kdnls_run_t **out);

// Frees a run handle. Passing null is a no-op.
//
// # Safety
// `run` must be null or an unfreed handle from `kdnls_run_experiment`.
void kdnls_run_free(struct kdnls_run_t *run);

// Returns the output directory the run wrote to.
// Free the result with `kdnls_string_free`; returns null if `run` is null.
//
// # Safety
// `run` must be null or a live handle from `kdnls_run_experiment`.
char *kdnls_run_output_dir(const struct kdnls_run_t *run);

// Returns the run summary serialized as JSON.
// Free the result with `kdnls_string_free`; returns null if `run` is null
// or serialization fails.
//
// # Safety
// `run` must be null or a live handle from `kdnls_run_experiment`.
char *kdnls_run_summary_json(const struct kdnls_run_t *run);

// Writes the final simulation time to `*out`.
//
// # Safety
// `run` must be a live handle; `out` must be a valid pointer.
enum kdnls_status_t kdnls_run_final_time(const struct kdnls_run_t *run, double *out);

// Writes the final spectrum L2 norm to `*out`.
//
// # Safety
// `run` must be a live handle; `out` must be a valid pointer.
enum kdnls_status_t kdnls_run_final_l2(const struct kdnls_run_t *run, double *out);

// Writes the measured initial-data size (weighted Sobolev norm of the
// initial profile) to `*out`.
//
// # Safety
// `run` must be a live handle; `out` must be a valid pointer.
enum kdnls_status_t kdnls_run_measured_eps(const struct kdnls_run_t *run, double *out);

// Writes the number of stored snapshots to `*out`.
//
// # Safety
// `run` must be a live handle; `out` must be a valid pointer.
enum kdnls_status_t kdnls_run_snapshot_count(const struct kdnls_run_t *run, size_t *out);

// Writes the time and spectrum length of snapshot `index` to `*time` and
// `*len`. `len` is the number of complex coefficients.
//
// # Safety
// `run` must be a live handle; `time` and `len` must be valid pointers.
enum kdnls_status_t kdnls_run_snapshot_info(const struct kdnls_run_t *run,
                                            size_t index,
                                            double *time,
                                            size_t *len);

// Copies the spectrum of snapshot `index` into `buf` as interleaved
// `(re, im)` pairs; `buf_len` is the capacity of `buf` in doubles and must
// be at least twice the coefficient count reported by
// `kdnls_run_snapshot_info`. Coefficients are in FFT bin order.
//
// # Safety
// `run` must be a live handle; `buf` must point to at least `buf_len`
// writable doubles.
enum kdnls_status_t kdnls_run_snapshot_spectrum(const struct kdnls_run_t *run,
                                                size_t index,
                                                double *buf,
                                                size_t buf_len);

// Runs a canned verification suite by name (`operators`, `solver-order`,
// `identities`, `scattering`, or `dissipation`). Returns `KdnlsOk` when
// every check passes and `KdnlsVerifyFailed` when at least one fails; in
// the latter case the error message lists the failing checks. Some suites
// run multi-minute simulations.
//
// # Safety
// `name` must be a NUL-terminated string.
enum kdnls_status_t kdnls_verify_suite(const char *name);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KDNLS_H */
