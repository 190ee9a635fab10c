#ifndef SOLTI_H
#define SOLTI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SoltiStatus {
  SOLTI_STATUS_OK = 0,
  SOLTI_STATUS_NULL_POINTER = 1,
  SOLTI_STATUS_PARSE = 2,
  SOLTI_STATUS_DIMENSION = 3,
  SOLTI_STATUS_NON_FINITE = 4,
  SOLTI_STATUS_PARAMETER = 5,
  SOLTI_STATUS_NO_INPUT = 6,
  SOLTI_STATUS_UNOBSERVABLE = 7,
  SOLTI_STATUS_INCONSISTENT_DATA = 8,
  SOLTI_STATUS_UNCONTROLLABLE_TARGET = 9,
  SOLTI_STATUS_UNSUPPORTED = 10,
  SOLTI_STATUS_NUMERICAL = 11,
  SOLTI_STATUS_BUFFER_TOO_SMALL = 12,
  SOLTI_STATUS_PANIC = 13,
} SoltiStatus;

typedef enum SoltiKind {
  SOLTI_KIND_DISCRETE = 0,
  SOLTI_KIND_CONTINUOUS = 1,
} SoltiKind;

// Opaque second-order system.
typedef struct SoltiSystem SoltiSystem;

// Opaque rational transfer matrix `H(s)`.
typedef struct SoltiTransfer SoltiTransfer;

// Outcome of one rank criterion.
typedef struct SoltiRankReport {
  size_t rank;
  size_t required_rank;
  bool verdict;
} SoltiRankReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or "" after a success.
// The pointer stays valid until the next call into this library on the same thread.
const char *solti_last_error_message(void);

// Parses a system JSON document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum SoltiStatus solti_system_from_json(const char *json, struct SoltiSystem **out);

// Builds a system from row-major arrays: `a0`, `a1` are n x n, `b` is n x r
// (may be NULL when r = 0), `c` is p x n. `kind` is a `SoltiKind` value.
//
// # Safety
// Each array must hold the stated number of doubles; `out` must be writable.
enum SoltiStatus solti_system_new(uint32_t kind,
                                  size_t n,
                                  size_t r,
                                  size_t p,
                                  const double *a0,
                                  const double *a1,
                                  const double *b,
                                  const double *c,
                                  struct SoltiSystem **out);

// # Safety
// `sys` must come from this library and not be used afterwards. NULL is ignored.
void solti_system_free(struct SoltiSystem *sys);

// # Safety
// `sys` must be a live handle; any of the outputs may be NULL.
enum SoltiStatus solti_system_dims(const struct SoltiSystem *sys,
                                   enum SoltiKind *kind,
                                   size_t *n,
                                   size_t *r,
                                   size_t *p);

// Serializes a system; release the string with [`solti_string_free`].
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum SoltiStatus solti_system_to_json(const struct SoltiSystem *sys, char **out);

// # Safety
// `s` must come from this library and not be used afterwards. NULL is ignored.
void solti_string_free(char *s);

// Dual system `(A0ᵀ, -A1ᵀ, Cᵀ, Bᵀ)`.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum SoltiStatus solti_system_dual(const struct SoltiSystem *sys, struct SoltiSystem **out);

// Observability rank test over the 2n-block matrix.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum SoltiStatus solti_is_observable(const struct SoltiSystem *sys,
                                     double rank_tol,
                                     struct SoltiRankReport *out);

// Controllability rank test over `[M0 | ... | M(n-1)]`.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum SoltiStatus solti_is_controllable(const struct SoltiSystem *sys,
                                       double rank_tol,
                                       struct SoltiRankReport *out);

// Observability matrix with `block_rows` block rows (2n for the criterion).
//
// # Safety
// `sys` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
enum SoltiStatus solti_observability_matrix(const struct SoltiSystem *sys,
                                            size_t block_rows,
                                            double *buf,
                                            size_t capacity,
                                            size_t *rows,
                                            size_t *cols);

// Controllability matrix with `blocks` column blocks (n for the criterion).
//
// # Safety
// `sys` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
enum SoltiStatus solti_controllability_matrix(const struct SoltiSystem *sys,
                                              size_t blocks,
                                              double *buf,
                                              size_t capacity,
                                              size_t *rows,
                                              size_t *cols);

// `H(s)`, using the position-only resolvent when A1 = 0 and the companion
// lift otherwise.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum SoltiStatus solti_transfer_function(const struct SoltiSystem *sys, struct SoltiTransfer **out);

// # Safety
// `h` must come from this library and not be used afterwards. NULL is ignored.
void solti_transfer_free(struct SoltiTransfer *h);

// # Safety
// `h` must be a live handle; outputs may be NULL.
enum SoltiStatus solti_transfer_dims(const struct SoltiTransfer *h,
                                     size_t *outputs,
                                     size_t *inputs);

// Denominator coefficients, ascending powers of s.
//
// # Safety
// `h` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
enum SoltiStatus solti_transfer_denominator(const struct SoltiTransfer *h,
                                            double *buf,
                                            size_t capacity,
                                            size_t *len);

// Numerator of entry (i, j), ascending powers of s. A zero entry has length 0.
//
// # Safety
// `h` must be a live handle; `buf` must hold `capacity` doubles or be NULL.
enum SoltiStatus solti_transfer_numerator(const struct SoltiTransfer *h,
                                          size_t i,
                                          size_t j,
                                          double *buf,
                                          size_t capacity,
                                          size_t *len);

// `H(s)` at `s = re + i·im`, written row-major into `out_re` / `out_im`
// (outputs x inputs values each).
//
// # Safety
// `h` must be a live handle; both buffers must hold `capacity` doubles.
enum SoltiStatus solti_transfer_evaluate(const struct SoltiTransfer *h,
                                         double re,
                                         double im,
                                         double *out_re,
                                         double *out_im,
                                         size_t capacity);

// Runs the discrete recursion for `steps` steps. `inputs` holds
// `(steps - 1) x r` values (NULL means zero input); `states` receives
// `(steps + 1) x n` values.
//
// # Safety
// Arrays must hold the stated number of doubles.
enum SoltiStatus solti_simulate(const struct SoltiSystem *sys,
                                const double *x0,
                                const double *x1,
                                const double *inputs,
                                size_t steps,
                                double *states,
                                size_t capacity);

// Recovers `(x0, x1)` from `2n x p` output samples and `(2n - 2) x r` input
// samples (NULL means zero input). `x0`, `x1` receive n values each;
// `residual` may be NULL.
//
// # Safety
// Arrays must hold the stated number of doubles.
enum SoltiStatus solti_reconstruct(const struct SoltiSystem *sys,
                                   const double *outputs,
                                   const double *inputs,
                                   double rank_tol,
                                   double *x0,
                                   double *x1,
                                   double *residual);

// Minimum-norm inputs `u0..u(n-1)` putting `x(n+1)` at `target`; `inputs`
// receives `n x r` values in time order.
//
// # Safety
// Arrays must hold the stated number of doubles.
enum SoltiStatus solti_steer(const struct SoltiSystem *sys,
                             const double *x0,
                             const double *x1,
                             const double *target,
                             double rank_tol,
                             double *inputs,
                             size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOLTI_H */
