/* horolab: verification workbench for number-ring tree actions, mapping-torus
 * metrics and finite-quotient analysis.  C API over the C++ core: opaque
 * handles, status codes, caller-owned strings. */

#ifndef HOROLAB_H
#define HOROLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lab_status {
  LAB_OK = 0,
  LAB_ERR_ARGUMENT = 1,        /* null pointer or malformed argument */
  LAB_ERR_CONFIG = 2,          /* config JSON invalid */
  LAB_ERR_FIELD_REJECTED = 3,  /* polynomial rejected (reducible, |a0| <= 1,
                                  or not maximal at a prime dividing d) */
  LAB_ERR_BUDGET = 4,          /* a configured budget was exceeded */
  LAB_ERR_NOT_ACHIEVED = 5,    /* a probe or search hit its cap */
  LAB_ERR_DOMAIN = 6,          /* other domain error (see lab_last_error) */
  LAB_ERR_INTERNAL = 7
} lab_status;

typedef struct lab_workbench lab_workbench;

const char* lab_version(void);
const char* lab_status_name(lab_status status);

/* Message for the most recent failure on this thread. */
const char* lab_last_error(void);

/* config_json: {"m": [a0, ..., a_{n-1}], ...} with the monic leading
 * coefficient implicit; see the README for the full schema. */
lab_status lab_workbench_create(const char* config_json, lab_workbench** out);
void lab_workbench_free(lab_workbench* wb);

lab_status lab_workbench_set_seed(lab_workbench* wb, uint64_t seed);

/* Run the named suites (suites = NULL or count = 0 runs all).  On success
 * *json_out is the deterministic report; *all_passed (optional) is 1 iff
 * every executed check passed.  Free *json_out with lab_string_free. */
lab_status lab_run_json(lab_workbench* wb, const char* const* suites, size_t count,
                        char** json_out, int* all_passed);

/* DOT digraph of the tree ball (edges parent -> child). */
lab_status lab_tree_dot(lab_workbench* wb, long radius, char** dot_out);

/* CSV table m,lattice_solutions,total for m = 1..max_m. */
lab_status lab_periodic_csv(lab_workbench* wb, long max_m, char** csv_out);

/* CSV trichotomy table for the finite quotient (s, r) at level n_required. */
lab_status lab_trichotomy_csv(lab_workbench* wb, long s, long r, long n_required,
                              char** csv_out);

void lab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* HOROLAB_H */
