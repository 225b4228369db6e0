/* C ABI for the qpure library. */

#ifndef QPURE_H
#define QPURE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum QpureStatus {
  QPURE_STATUS_OK = 0,
  QPURE_STATUS_NULL_POINTER = 1,
  QPURE_STATUS_INVALID_ARGUMENT = 2,
  QPURE_STATUS_DIMENSION_MISMATCH = 3,
  QPURE_STATUS_BUFFER_TOO_SMALL = 4,
  QPURE_STATUS_INTERNAL = 5,
} QpureStatus;

// Opaque handle to a Kraus channel.
typedef struct QpureChannel QpureChannel;

// Opaque handle to a density operator.
typedef struct QpureState QpureState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a state from `2 * dim * dim` interleaved doubles (row-major
// `re, im` pairs). Fails unless the matrix is a valid density operator.
//
// # Safety
// `entries` must point to `2 * dim * dim` readable doubles and `out` must
// be a valid location for a handle pointer.
enum QpureStatus qpure_state_new(uintptr_t dim, const double *entries, struct QpureState **out);

// Seeded random density operator of the given rank (Ginibre recipe).
//
// # Safety
// `out` must be a valid location for a handle pointer.
enum QpureStatus qpure_state_random(uintptr_t dim,
                                    uintptr_t rank,
                                    uint64_t seed,
                                    struct QpureState **out);

// Reference counter-example pair on dimension 4 for `0 < p < 1/2`.
//
// # Safety
// `out1` and `out2` must be valid locations for handle pointers.
enum QpureStatus qpure_counter_example(double p,
                                       struct QpureState **out1,
                                       struct QpureState **out2);

// Releases a state handle. Null is ignored.
//
// # Safety
// `state` must be a pointer previously returned by this library and not
// yet freed.
void qpure_state_free(struct QpureState *state);

// Dimension of the state's space; 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle from this library.
uintptr_t qpure_state_dim(const struct QpureState *state);

// Copies the density matrix into `2 * dim * dim` interleaved doubles.
//
// # Safety
// `buf` must have room for `2 * dim * dim` doubles.
enum QpureStatus qpure_state_entries(const struct QpureState *state,
                                     double *buf,
                                     uintptr_t buf_len);

// Purity `tr(rho^2)`.
//
// # Safety
// `out` must be writable; `state` must be a live handle.
enum QpureStatus qpure_purity(const struct QpureState *state, double *out);

// Trace distance of two states.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum QpureStatus qpure_trace_distance(const struct QpureState *a,
                                      const struct QpureState *b,
                                      double *out);

// Worst-case distinguishability of two states.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum QpureStatus qpure_wcd(const struct QpureState *a, const struct QpureState *b, double *out);

// Minimum-error discrimination probability `(1 + D) / 2`.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum QpureStatus qpure_p_med(const struct QpureState *a, const struct QpureState *b, double *out);

// Worst-case discrimination probability `(1 + wcd) / 2`.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum QpureStatus qpure_p_wcd(const struct QpureState *a, const struct QpureState *b, double *out);

// Jordan angles between the supports, ascending. Writes at most `buf_len`
// angles and reports the total count.
//
// # Safety
// `buf` must have room for `buf_len` doubles; `written` must be writable.
enum QpureStatus qpure_jordan_angles(const struct QpureState *a,
                                     const struct QpureState *b,
                                     double *buf,
                                     uintptr_t buf_len,
                                     uintptr_t *written);

// Exact two-state criterion: writes true when the pair is essentially pure
// or orthogonal (`wcd == D`).
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum QpureStatus qpure_two_state_criterion(const struct QpureState *a,
                                           const struct QpureState *b,
                                           bool *out);

// Both sides of the product-state trace distance bound.
//
// # Safety
// All state arguments must be live handles; `lhs` and `rhs` writable.
enum QpureStatus qpure_product_bound(const struct QpureState *rho1,
                                     const struct QpureState *rho2,
                                     const struct QpureState *sigma1,
                                     const struct QpureState *sigma2,
                                     double *lhs,
                                     double *rhs);

// Feasibility of unambiguous discrimination for an array of state handles.
//
// # Safety
// `states` must point to `n` live handles; `out` must be writable.
enum QpureStatus qpure_usd_feasible(const struct QpureState *const *states_ptr,
                                    uintptr_t n,
                                    bool *out);

// Builds the optimal purifying channel of two states, returning the full
// composite channel and the achieved output distance.
//
// # Safety
// `a` and `b` must be live handles; `channel` and `achieved` writable.
enum QpureStatus qpure_optimal_purifier(const struct QpureState *a,
                                        const struct QpureState *b,
                                        struct QpureChannel **channel,
                                        double *achieved);

// Releases a channel handle. Null is ignored.
//
// # Safety
// `channel` must be a pointer previously returned by this library and not
// yet freed.
void qpure_channel_free(struct QpureChannel *channel);

// Input dimension; 0 for a null handle.
//
// # Safety
// `channel` must be null or a live handle.
uintptr_t qpure_channel_dim_in(const struct QpureChannel *channel);

// Output dimension; 0 for a null handle.
//
// # Safety
// `channel` must be null or a live handle.
uintptr_t qpure_channel_dim_out(const struct QpureChannel *channel);

// Number of Kraus operators; 0 for a null handle.
//
// # Safety
// `channel` must be null or a live handle.
uintptr_t qpure_channel_kraus_count(const struct QpureChannel *channel);

// Copies Kraus operator `index` into `2 * dim_out * dim_in` interleaved
// doubles.
//
// # Safety
// `buf` must have room for `buf_len` doubles.
enum QpureStatus qpure_channel_kraus_entries(const struct QpureChannel *channel,
                                             uintptr_t index,
                                             double *buf,
                                             uintptr_t buf_len);

// Completeness check of the channel against its trace-preservation flag.
//
// # Safety
// `ok` and `max_deviation` must be writable.
enum QpureStatus qpure_channel_validate(const struct QpureChannel *channel,
                                        bool *ok,
                                        double *max_deviation);

// Applies a trace-preserving channel to a state, producing a new state
// handle.
//
// # Safety
// `channel` and `state` must be live handles; `out` writable.
enum QpureStatus qpure_channel_apply(const struct QpureChannel *channel,
                                     const struct QpureState *state,
                                     struct QpureState **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPURE_H */
