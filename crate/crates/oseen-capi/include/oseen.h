#ifndef OSEEN_H
#define OSEEN_H

/* Generated by cbindgen from the oseen-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Field selector for solution rows.
 */
typedef enum {
  /*
   Tangential velocity component.
   */
  OSEEN_FIELD_U1 = 0,
  /*
   Wall-normal velocity component.
   */
  OSEEN_FIELD_U2 = 1,
  /*
   Pressure.
   */
  OSEEN_FIELD_PRESSURE = 2,
} OseenField;

/*
 Status code returned by every fallible call.
 */
typedef enum {
  /*
   The call succeeded.
   */
  OSEEN_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  OSEEN_STATUS_NULL_POINTER = 1,
  /*
   An argument failed validation; see `oseen_last_error_message`.
   */
  OSEEN_STATUS_INVALID_ARGUMENT = 2,
  /*
   A buffer length or grid size disagrees with the handle.
   */
  OSEEN_STATUS_GRID_MISMATCH = 3,
  /*
   The requested quantity is not defined in this drift regime.
   */
  OSEEN_STATUS_REGIME_VIOLATION = 4,
  /*
   A computation failed to converge or left the valid range.
   */
  OSEEN_STATUS_NUMERICAL_FAILURE = 5,
  /*
   Configuration text could not be parsed.
   */
  OSEEN_STATUS_CONFIG_ERROR = 6,
  /*
   CSV input could not be parsed.
   */
  OSEEN_STATUS_CSV_FORMAT_ERROR = 7,
  /*
   An operating-system I/O call failed.
   */
  OSEEN_STATUS_IO_ERROR = 8,
  /*
   An internal invariant was violated; please report this.
   */
  OSEEN_STATUS_PANIC = 9,
} OseenStatus;

/*
 A fixed problem setup: drift, friction, boundary grid, and the ladder
 of heights on which solutions are evaluated.
 */
typedef struct OseenProblem OseenProblem;

/*
 A solved flow: velocity and pressure rows on the problem's grid at
 each of its heights.
 */
typedef struct OseenSolution OseenSolution;

/*
 Sup-norm residuals of a solved flow, one per defining equation.
 */
typedef struct {
  /*
   Interior momentum-equation residual.
   */
  double pde;
  /*
   Velocity-divergence residual.
   */
  double divergence;
  /*
   Tangential (slip) boundary-condition residual.
   */
  double bc_slip;
  /*
   Wall-normal boundary-condition residual.
   */
  double bc_normal;
} OseenResiduals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static, nul-terminated string.
 */
const char *oseen_version(void);

/*
 Message describing the most recent failure on the calling thread.

 The pointer stays valid until the next failing call on this thread.
 Before any failure it is the empty string.
 */
const char *oseen_last_error_message(void);

/*
 Creates a problem handle.

 `a1`, `a2` set the drift (must not both be zero), `friction` the slip
 coefficient (positive), `half_width` the boundary-grid half-width
 (positive), `n` the number of grid nodes (even, at least 8), and
 `level_count` the number of evaluation heights (at least 5). On
 success `*out` owns the handle; release it with `oseen_problem_free`.

 # Safety

 `out` must be null or valid for writing one pointer.
 */
OseenStatus oseen_problem_new(double a1,
                              double a2,
                              double friction,
                              double half_width,
                              size_t n,
                              size_t level_count,
                              OseenProblem **out);

/*
 Releases a problem handle. Passing null is a no-op.

 # Safety

 `problem` must be null or a handle from `oseen_problem_new` that has
 not been freed.
 */
void oseen_problem_free(OseenProblem *problem);

/*
 Number of boundary-grid nodes, or 0 if the handle is null.

 # Safety

 `problem` must be null or a live handle from `oseen_problem_new`.
 */
size_t oseen_problem_grid_size(const OseenProblem *problem);

/*
 Number of evaluation heights, or 0 if the handle is null.

 # Safety

 `problem` must be null or a live handle from `oseen_problem_new`.
 */
size_t oseen_problem_level_count(const OseenProblem *problem);

/*
 Copies the boundary-grid nodes into `out[0..len]`; `len` must equal
 `oseen_problem_grid_size`.

 # Safety

 `problem` must be null or a live handle from `oseen_problem_new`, and
 `out` null or valid for writing `len` doubles.
 */
OseenStatus oseen_problem_nodes(const OseenProblem *problem, double *out, size_t len);

/*
 Copies the evaluation heights into `out[0..len]`; `len` must equal
 `oseen_problem_level_count`.

 # Safety

 `problem` must be null or a live handle from `oseen_problem_new`, and
 `out` null or valid for writing `len` doubles.
 */
OseenStatus oseen_problem_heights(const OseenProblem *problem, double *out, size_t len);

/*
 Solves the slip problem for boundary data sampled on the problem grid.

 `b[0..len]` is the tangential (slip) datum and `d[0..len]` the normal
 datum; `len` must equal `oseen_problem_grid_size`. On success `*out`
 owns the solution; release it with `oseen_solution_free`.

 # Safety

 `problem` must be null or a live handle from `oseen_problem_new`;
 `b` and `d` null or valid for reading `len` doubles; `out` null or
 valid for writing one pointer.
 */
OseenStatus oseen_solve_slip(const OseenProblem *problem,
                             const double *b,
                             const double *d,
                             size_t len,
                             OseenSolution **out);

/*
 Releases a solution handle. Passing null is a no-op.

 # Safety

 `solution` must be null or a handle from `oseen_solve_slip` that has
 not been freed.
 */
void oseen_solution_free(OseenSolution *solution);

/*
 Number of nodes per solution row, or 0 if the handle is null.

 # Safety

 `solution` must be null or a live handle from `oseen_solve_slip`.
 */
size_t oseen_solution_grid_size(const OseenSolution *solution);

/*
 Number of solved heights, or 0 if the handle is null.

 # Safety

 `solution` must be null or a live handle from `oseen_solve_slip`.
 */
size_t oseen_solution_level_count(const OseenSolution *solution);

/*
 Copies one field row at height index `level` into `out[0..len]`;
 `len` must equal `oseen_solution_grid_size`.

 # Safety

 `solution` must be null or a live handle from `oseen_solve_slip`, and
 `out` null or valid for writing `len` doubles.
 */
OseenStatus oseen_solution_row(const OseenSolution *solution,
                               OseenField field,
                               size_t level,
                               double *out,
                               size_t len);

/*
 Evaluates the defining-equation residuals of a solution.

 # Safety

 `solution` must be null or a live handle from `oseen_solve_slip`, and
 `out` null or valid for writing one `Residuals` value.
 */
OseenStatus oseen_solution_residuals(const OseenSolution *solution, OseenResiduals *out);

/*
 Evaluates the whole-plane fundamental solution for drift `(a1, a2)`
 at the point `(x1, x2)`; the drift must be nonzero and finite.

 # Safety

 `out` must be null or valid for writing one double.
 */
OseenStatus oseen_fundamental_solution(double a1, double a2, double x1, double x2, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* OSEEN_H */
