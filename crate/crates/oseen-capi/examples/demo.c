/* Minimal C consumer of the oseen C ABI.
 *
 * Build (from the repository root):
 *   cargo build --release -p oseen-capi
 *   cc crates/oseen-capi/examples/demo.c \
 *      -Icrates/oseen-capi/include \
 *      target/release/liboseen_capi.a -lpthread -ldl -lm -o demo
 */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "oseen.h"

static void check(OseenStatus status, const char *what) {
    if (status != OSEEN_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)status,
                oseen_last_error_message());
        exit(1);
    }
}

int main(void) {
    printf("oseen %s\n", oseen_version());

    OseenProblem *problem = NULL;
    check(oseen_problem_new(1.0, -1.0, 1.0, 20.0, 256, 16, &problem),
          "problem_new");

    size_t n = oseen_problem_grid_size(problem);
    double *nodes = malloc(n * sizeof(double));
    double *b = malloc(n * sizeof(double));
    double *d = calloc(n, sizeof(double));
    check(oseen_problem_nodes(problem, nodes, n), "problem_nodes");
    for (size_t i = 0; i < n; i++) {
        b[i] = exp(-nodes[i] * nodes[i]);
    }

    OseenSolution *solution = NULL;
    check(oseen_solve_slip(problem, b, d, n, &solution), "solve_slip");

    OseenResiduals residuals;
    check(oseen_solution_residuals(solution, &residuals), "residuals");
    printf("residuals: pde %.3e  div %.3e  slip %.3e  normal %.3e\n",
           residuals.pde, residuals.divergence, residuals.bc_slip,
           residuals.bc_normal);

    double *row = malloc(n * sizeof(double));
    check(oseen_solution_row(solution, OSEEN_FIELD_U1, 0, row, n),
          "solution_row");
    double sup = 0.0;
    for (size_t i = 0; i < n; i++) {
        sup = fmax(sup, fabs(row[i]));
    }
    printf("boundary |u1| sup: %.6f\n", sup);

    int ok = residuals.pde < 1e-6 && residuals.divergence < 1e-10 &&
             residuals.bc_slip < 1e-8 && residuals.bc_normal < 1e-8 &&
             sup > 0.0;

    free(row);
    free(d);
    free(b);
    free(nodes);
    oseen_solution_free(solution);
    oseen_problem_free(problem);
    puts(ok ? "demo: PASS" : "demo: FAIL");
    return ok ? 0 : 1;
}
