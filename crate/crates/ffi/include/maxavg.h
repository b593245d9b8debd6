#ifndef MAXAVG_H
#define MAXAVG_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MaxavgStatus {
  MAXAVG_STATUS_OK = 0,
  MAXAVG_STATUS_NULL_POINTER = 1,
  MAXAVG_STATUS_INVALID_INPUT = 2,
  /*
   A window average in a denominator is zero.
   */
  MAXAVG_STATUS_INADMISSIBLE = 3,
  /*
   The optimizer stopped short of its tolerance; the best point is still returned.
   */
  MAXAVG_STATUS_NON_CONVERGENCE = 4,
  MAXAVG_STATUS_BUFFER_TOO_SMALL = 5,
  MAXAVG_STATUS_INTERNAL = 6,
} MaxavgStatus;

/*
 Result of a chain minimization.
 */
typedef struct MaxavgSolution MaxavgSolution;

/*
 A periodic tuple in floating-point or exact rational arithmetic.
 */
typedef struct MaxavgTuple MaxavgTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Description of the last failure on this thread; empty if none. The
 pointer stays valid until the next failing call on the same thread.
 */
const char *maxavg_last_error(void);

/*
 Static name of a status code.
 */
const char *maxavg_status_name(enum MaxavgStatus status);

/*
 Creates a tuple from `len` doubles.

 # Safety
 `values` must point to `len` readable doubles; `out` must be writable.
 */
enum MaxavgStatus maxavg_tuple_new(const double *values, size_t len, struct MaxavgTuple **out);

/*
 Creates an exact tuple with entries `num[k] / den[k]`.

 # Safety
 `num` and `den` must point to `len` readable integers; `out` must be writable.
 */
enum MaxavgStatus maxavg_tuple_new_rational(const int64_t *num,
                                            const int64_t *den,
                                            size_t len,
                                            struct MaxavgTuple **out);

/*
 # Safety
 `tuple` must be null or a handle from `maxavg_tuple_new*` not yet freed.
 */
void maxavg_tuple_free(struct MaxavgTuple *tuple);

/*
 Period length, or 0 for a null handle.

 # Safety
 `tuple` must be null or a live handle.
 */
size_t maxavg_tuple_len(const struct MaxavgTuple *tuple);

/*
 `M^r x(i)` and the smallest window length attaining it. `length` may be null.

 # Safety
 `tuple` must be a live handle; `value` writable; `length` null or writable.
 */
enum MaxavgStatus maxavg_right_maximal(const struct MaxavgTuple *tuple,
                                       int64_t i,
                                       double *value,
                                       size_t *length);

/*
 M-interval `[start : start + kappa]` at index `i`, with its average.

 # Safety
 `tuple` must be a live handle; the three outputs writable.
 */
enum MaxavgStatus maxavg_m_interval(const struct MaxavgTuple *tuple,
                                    int64_t i,
                                    size_t *start,
                                    size_t *kappa,
                                    double *average);

/*
 Start of the full maximal interval, in `1..=n`.

 # Safety
 `tuple` must be a live handle; `start` writable.
 */
enum MaxavgStatus maxavg_full_maximal_start(const struct MaxavgTuple *tuple, size_t *start);

/*
 `S^max(x)`. If `radii` is non-null it receives the `n` maximizing radii
 and `radii_len` must be at least `n`.

 # Safety
 `tuple` must be a live handle; `value` writable; `radii` null or `radii_len` writable entries.
 */
enum MaxavgStatus maxavg_max_avg_sum(const struct MaxavgTuple *tuple,
                                     double *value,
                                     size_t *radii,
                                     size_t radii_len);

/*
 `S_n(x, r)` for `len == n` positive radii.

 # Safety
 `tuple` must be a live handle; `radii` readable for `len` entries; `value` writable.
 */
enum MaxavgStatus maxavg_sum_with_radii(const struct MaxavgTuple *tuple,
                                        const size_t *radii,
                                        size_t len,
                                        double *value);

/*
 Minimizes the chain objective over the length-`n` simplex with weight
 `p`. `tol <= 0` selects the default tolerance. On
 `MAXAVG_STATUS_NON_CONVERGENCE` the best point found is still stored.

 # Safety
 `out` must be writable.
 */
enum MaxavgStatus maxavg_minimize_chain(size_t n,
                                        double p,
                                        double tol,
                                        struct MaxavgSolution **out);

/*
 # Safety
 `solution` must be null or a handle from `maxavg_minimize_chain` not yet freed.
 */
void maxavg_solution_free(struct MaxavgSolution *solution);

/*
 Minimum value, NaN for a null handle.

 # Safety
 `solution` must be null or a live handle.
 */
double maxavg_solution_value(const struct MaxavgSolution *solution);

/*
 Projected-gradient norm at the minimizer, NaN for a null handle.

 # Safety
 `solution` must be null or a live handle.
 */
double maxavg_solution_residual(const struct MaxavgSolution *solution);

/*
 Number of nonzero entries, 0 for a null handle.

 # Safety
 `solution` must be null or a live handle.
 */
size_t maxavg_solution_support(const struct MaxavgSolution *solution);

/*
 Whether the stationarity tolerance was met.

 # Safety
 `solution` must be null or a live handle.
 */
bool maxavg_solution_converged(const struct MaxavgSolution *solution);

/*
 Copies the nonzero tail `(x_{1-k}, ..., x_0)` of the minimizer into `out`,
 which must hold at least `maxavg_solution_support` entries.

 # Safety
 `solution` must be a live handle; `out` writable for `cap` entries.
 */
enum MaxavgStatus maxavg_solution_minimizer(const struct MaxavgSolution *solution,
                                            double *out,
                                            size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXAVG_H */
