#ifndef CHAINPAIR_H
#define CHAINPAIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  // No simplification pair meets the tolerances.
  CP_STATUS_NO_SOLUTION = 1,
  // The hop cap was too small to decide optimality.
  CP_STATUS_R_CAP_INCONCLUSIVE = 2,
  // Reconstruction would exceed the cell budget.
  CP_STATUS_MEMORY_GUARD = 3,
  CP_STATUS_INVALID_ARGUMENT = 4,
  CP_STATUS_TOO_LARGE = 5,
  CP_STATUS_WEIGHT_OVERFLOW = 6,
  CP_STATUS_TIMEOUT = 7,
  // Bad coordinates, weights or mismatched dimensions.
  CP_STATUS_GEOMETRY = 8,
  CP_STATUS_NULL_POINTER = 9,
  // A Rust panic was caught at the boundary.
  CP_STATUS_PANIC = 10,
} CpStatus;

typedef enum CpEndpointMode {
  CP_ENDPOINT_MODE_FREE_DOGS = 0,
  CP_ENDPOINT_MODE_ANCHORED = 1,
} CpEndpointMode;

// Opaque chain handle.
typedef struct CpChain CpChain;

// Opaque solution handle.
typedef struct CpSolution CpSolution;

// Tolerances and options for the two-chain solvers.
typedef struct CpParams {
  double delta1;
  double delta2;
  double delta3;
  enum CpEndpointMode endpoint_mode;
  // Hop cap; 0 means none.
  size_t r_cap;
  // Wall-clock limit in seconds; 0 or less means none.
  double timeout_seconds;
} CpParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Description of the last failure on this thread, or null after a
// success. The pointer stays valid until the next call on the same thread.
const char *cp_last_error_message(void);

// Library version as a static nul-terminated string.
const char *cp_version(void);

// Builds a chain from `len * dim` row-major coordinates (`dim` 2 or 3).
// `weights` may be null, otherwise it holds `len` nonnegative weights.
//
// # Safety
// `coords` must point to `len * dim` doubles and `weights`, when not null,
// to `len` doubles. `out` must be writable.
enum CpStatus cp_chain_new(const double *coords,
                           size_t len,
                           size_t dim,
                           const double *weights,
                           struct CpChain **out);

// Releases a chain. Null is ignored.
//
// # Safety
// `chain` must come from [`cp_chain_new`] and not be used afterwards.
void cp_chain_free(struct CpChain *chain);

// Number of vertices, or 0 for null.
//
// # Safety
// `chain` must be null or a live handle.
size_t cp_chain_len(const struct CpChain *chain);

// Discrete Fréchet distance between two chains.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum CpStatus cp_discrete_frechet(const struct CpChain *a, const struct CpChain *b, double *out);

// Whether the discrete Fréchet distance is at most `delta`.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum CpStatus cp_frechet_decision(const struct CpChain *a,
                                  const struct CpChain *b,
                                  double delta,
                                  bool *out);

// Minimum of `max(|A'|, |B'|)`. With `reconstruct` the solution carries
// both index lists.
//
// # Safety
// `a`, `b` and `params` must be valid and `out` writable. The solution
// must be released with [`cp_solution_free`].
enum CpStatus cp_cps3f_min(const struct CpChain *a,
                           const struct CpChain *b,
                           const struct CpParams *params,
                           bool reconstruct,
                           struct CpSolution **out);

// Whether both simplifications fit in `k` vertices.
//
// # Safety
// `a`, `b` and `params` must be valid and `out` writable.
enum CpStatus cp_cps3f_decision(const struct CpChain *a,
                                const struct CpChain *b,
                                const struct CpParams *params,
                                size_t k,
                                bool *out);

// Minimum of `max(C(A'), C(B'))` with the chains' vertex weights. The
// weight is read with [`cp_solution_weight`]. `params->r_cap` must be 0.
//
// # Safety
// As for [`cp_cps3f_min`].
enum CpStatus cp_wcps3f_min(const struct CpChain *a,
                            const struct CpChain *b,
                            const struct CpParams *params,
                            bool reconstruct,
                            struct CpSolution **out);

// Whether both weighted simplifications weigh at most `k`.
//
// # Safety
// As for [`cp_cps3f_decision`].
enum CpStatus cp_wcps3f_decision(const struct CpChain *a,
                                 const struct CpChain *b,
                                 const struct CpParams *params,
                                 double k,
                                 bool *out);

// Shortest `A'` within `delta1` of `A` and `delta3` of `B`. The solution
// holds only A-side indices.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum CpStatus cp_one_sided_min(const struct CpChain *a,
                               const struct CpChain *b,
                               double delta1,
                               double delta3,
                               struct CpSolution **out);

// Shortest subchain of `A` within `delta` of `B`.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum CpStatus cp_simplify_min_k(const struct CpChain *a,
                                const struct CpChain *b,
                                double delta,
                                struct CpSolution **out);

// Smallest distance to `B` reachable by a subchain of `A` with at most `k`
// vertices, written to `out_delta`, and that subchain.
//
// # Safety
// `a` and `b` must be live handles; `out_delta` and `out` writable.
enum CpStatus cp_simplify_min_delta(const struct CpChain *a,
                                    const struct CpChain *b,
                                    size_t k,
                                    double *out_delta,
                                    struct CpSolution **out);

// Optimal vertex count: `max(|A'|, |B'|)`, or `|A'|` for the one-sided
// solvers. For weighted solutions, the larger index list length (0 without
// reconstruction).
//
// # Safety
// `solution` must be null or a live handle.
size_t cp_solution_k_star(const struct CpSolution *solution);

// Optimal weight for weighted solutions; the vertex count otherwise.
//
// # Safety
// `solution` must be null or a live handle.
double cp_solution_weight(const struct CpSolution *solution);

// Largest number of DP cells alive during the solve.
//
// # Safety
// `solution` must be null or a live handle.
uint64_t cp_solution_peak_cells(const struct CpSolution *solution);

// Copies up to `cap` indices of `A'` into `buf` and returns the full count
// (0 when not reconstructed). Pass a null `buf` to query the count.
//
// # Safety
// `solution` must be null or a live handle; `buf`, when not null, must
// hold `cap` elements.
size_t cp_solution_a_indices(const struct CpSolution *solution, size_t *buf, size_t cap);

// As [`cp_solution_a_indices`] for `B'`.
//
// # Safety
// As for [`cp_solution_a_indices`].
size_t cp_solution_b_indices(const struct CpSolution *solution, size_t *buf, size_t cap);

// Releases a solution. Null is ignored.
//
// # Safety
// `solution` must come from this library and not be used afterwards.
void cp_solution_free(struct CpSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAINPAIR_H */
