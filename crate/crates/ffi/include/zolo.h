/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef ZOLO_H
#define ZOLO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum ZoloStatus {
  ZOLO_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  ZOLO_STATUS_NULL_POINTER = 1,
  /*
   An argument was out of range or malformed (bad UTF-8, bad point data).
   */
  ZOLO_STATUS_INVALID_ARGUMENT = 2,
  /*
   A configuration or preset could not be resolved.
   */
  ZOLO_STATUS_CONFIG = 3,
  /*
   The numerical pipeline failed.
   */
  ZOLO_STATUS_NUMERICAL = 4,
  /*
   The fit error reached 1, so there is no ratio solution.
   */
  ZOLO_STATUS_DEGREE_TOO_LOW = 5,
  /*
   The caller's buffer is too small; the needed length was written.
   */
  ZOLO_STATUS_BUFFER_TOO_SMALL = 6,
  /*
   An internal panic was caught.
   */
  ZOLO_STATUS_PANIC = 7,
} ZoloStatus;

/*
 A problem: samples plus solver settings.
 */
typedef struct ZoloProblem ZoloProblem;

/*
 The result of [`zolo_solve`].
 */
typedef struct ZoloSolution ZoloSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The message of the last failed call on this thread, or null. The pointer
 stays valid until the next call into this library on the same thread.
 */
const char *zolo_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *zolo_version(void);

/*
 Builds a problem from a preset name such as `"fig1a"`.

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ZoloStatus zolo_problem_from_preset(const char *name, struct ZoloProblem **out);

/*
 Builds a problem from a JSON run configuration.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ZoloStatus zolo_problem_from_json(const char *json, struct ZoloProblem **out);

/*
 Builds a problem from explicit samples of `E` and `F` with default solver
 settings at the given degree.

 # Safety
 Each coordinate pointer must reference `n_e` or `n_f` doubles, and `out`
 must be a valid pointer.
 */
enum ZoloStatus zolo_problem_from_points(const double *e_re,
                                         const double *e_im,
                                         size_t n_e,
                                         const double *f_re,
                                         const double *f_im,
                                         size_t n_f,
                                         size_t degree,
                                         struct ZoloProblem **out);

/*
 Overrides the degree.

 # Safety
 `problem` must come from a `zolo_problem_*` constructor.
 */
enum ZoloStatus zolo_problem_set_degree(struct ZoloProblem *problem, size_t degree);

/*
 Overrides the Lawson step count and damping factor (in `(0, 1]`).

 # Safety
 `problem` must come from a `zolo_problem_*` constructor.
 */
enum ZoloStatus zolo_problem_set_lawson(struct ZoloProblem *problem, size_t steps, double damping);

/*
 Number of samples in `E` and `F`.

 # Safety
 `problem` must be a live handle; the out pointers must be valid.
 */
enum ZoloStatus zolo_problem_sample_counts(const struct ZoloProblem *problem,
                                           size_t *n_e,
                                           size_t *n_f);

/*
 Releases a problem. Null is ignored.

 # Safety
 `problem` must be null or a live handle not used afterwards.
 */
void zolo_problem_free(struct ZoloProblem *problem);

/*
 Solves the sign problem and, when its error is below 1, the ratio problem.
 A solution with `tau >= 1` is still returned with status `Ok`; ratio
 queries on it report [`ZoloStatus::DegreeTooLow`].

 # Safety
 `problem` must be a live handle and `out` a valid pointer.
 */
enum ZoloStatus zolo_solve(const struct ZoloProblem *problem, struct ZoloSolution **out);

/*
 Max error `tau` of the sign approximation.

 # Safety
 `solution` must be a live handle and `out` a valid pointer.
 */
enum ZoloStatus zolo_solution_tau(const struct ZoloSolution *solution, double *out);

/*
 The ratio problem's value `sigma`.

 # Safety
 `solution` must be a live handle and `out` a valid pointer.
 */
enum ZoloStatus zolo_solution_sigma(const struct ZoloSolution *solution, double *out);

/*
 Evaluates the sign approximation `r_hat` at `re + i im`.

 # Safety
 `solution` must be a live handle; the out pointers must be valid.
 */
enum ZoloStatus zolo_solution_eval_sign(const struct ZoloSolution *solution,
                                        double re,
                                        double im,
                                        double *out_re,
                                        double *out_im);

/*
 Evaluates the ratio function `r_star` at `re + i im`.

 # Safety
 `solution` must be a live handle; the out pointers must be valid.
 */
enum ZoloStatus zolo_solution_eval_ratio(const struct ZoloSolution *solution,
                                         double re,
                                         double im,
                                         double *out_re,
                                         double *out_im);

/*
 Copies the poles of `r_star` into `re`/`im` (room for `capacity` each)
 and writes their count to `len`. With too little room nothing is copied,
 `len` holds the needed count and the status is `BufferTooSmall`.

 # Safety
 `solution` must be a live handle, `len` valid, and the buffers must hold
 `capacity` doubles each.
 */
enum ZoloStatus zolo_solution_poles(const struct ZoloSolution *solution,
                                    double *re,
                                    double *im,
                                    size_t capacity,
                                    size_t *len);

/*
 Zeros of `r_star`; same buffer contract as [`zolo_solution_poles`].

 # Safety
 As for [`zolo_solution_poles`].
 */
enum ZoloStatus zolo_solution_zeros(const struct ZoloSolution *solution,
                                    double *re,
                                    double *im,
                                    size_t capacity,
                                    size_t *len);

/*
 The full result document as JSON. Release it with [`zolo_string_free`].

 # Safety
 `solution` must be a live handle and `out` a valid pointer.
 */
enum ZoloStatus zolo_solution_to_json(const struct ZoloSolution *solution, char **out);

/*
 Releases a solution. Null is ignored.

 # Safety
 `solution` must be null or a live handle not used afterwards.
 */
void zolo_solution_free(struct ZoloSolution *solution);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a string from this library not used afterwards.
 */
void zolo_string_free(char *s);

/*
 `sigma` from `tau`; both must lie in `(0, 1]`.

 # Safety
 `out` must be a valid pointer.
 */
enum ZoloStatus zolo_tau_to_sigma(double tau, double *out);

/*
 `tau` from `sigma`; both must lie in `(0, 1]`.

 # Safety
 `out` must be a valid pointer.
 */
enum ZoloStatus zolo_sigma_to_tau(double sigma, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZOLO_H */
