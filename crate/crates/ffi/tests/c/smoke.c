#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "zolo.h"

#define CHECK(call)                                                                  \
    do {                                                                             \
        ZoloStatus s_ = (call);                                                      \
        if (s_ != ZOLO_STATUS_OK) {                                                  \
            const char *m_ = zolo_last_error_message();                              \
            fprintf(stderr, "%s failed: %d %s\n", #call, (int)s_, m_ ? m_ : "");     \
            return 1;                                                                \
        }                                                                            \
    } while (0)

int main(void) {
    ZoloProblem *problem = NULL;
    ZoloSolution *solution = NULL;
    double tau = 0.0, sigma = 0.0, re = 0.0, im = 0.0;
    double poles_re[16], poles_im[16];
    size_t n_poles = 0;
    char *json = NULL;

    CHECK(zolo_problem_from_preset("fig1b", &problem));
    CHECK(zolo_problem_set_degree(problem, 6));
    CHECK(zolo_problem_set_lawson(problem, 60, 0.95));
    CHECK(zolo_solve(problem, &solution));
    CHECK(zolo_solution_tau(solution, &tau));
    CHECK(zolo_solution_sigma(solution, &sigma));
    CHECK(zolo_solution_eval_ratio(solution, -1.0, 0.0, &re, &im));
    CHECK(zolo_solution_poles(solution, poles_re, poles_im, 16, &n_poles));
    CHECK(zolo_solution_to_json(solution, &json));

    if (zolo_problem_from_preset("nope", &problem) != ZOLO_STATUS_CONFIG) return 2;
    if (strstr(zolo_last_error_message(), "nope") == NULL) return 3;
    if (strncmp(json, "{\"degree\":6", 11) != 0) return 4;

    printf("tau=%.6e sigma=%.6e |r(-1)|=%.3e poles=%zu\n", tau, sigma, hypot(re, im), n_poles);
    zolo_string_free(json);
    zolo_solution_free(solution);
    zolo_problem_free(problem);
    return 0;
}
