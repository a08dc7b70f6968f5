/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the melnikov shared library.  The CLI and any foreign
 * bindings talk to the C++ core exclusively through this surface: opaque
 * handles, status codes, and JSON/CSV strings allocated by the library
 * (release them with mlk_string_free).
 */
#ifndef MELNIKOV_C_API_H
#define MELNIKOV_C_API_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mlk_spec mlk_spec; /* opaque PerturbationSpec */

typedef enum {
  MLK_OK = 0,
  MLK_ERR_DOMAIN = 1,   /* bad argument / precondition violated */
  MLK_ERR_FINDING = 2,  /* computation contradicts a documented claim */
  MLK_ERR_PARSE = 3,    /* malformed input document */
  MLK_ERR_INTERNAL = 4  /* unexpected failure */
} mlk_status;

const char* mlk_version(void);
const char* mlk_status_name(mlk_status s);
/* Detail message for the most recent failure on this thread. */
const char* mlk_last_error(void);
void mlk_string_free(char* s);

/* --- problem instances ------------------------------------------------- */
mlk_status mlk_spec_parse_json(const char* json, mlk_spec** out);
mlk_status mlk_spec_to_json(const mlk_spec* spec, char** json_out);
mlk_status mlk_spec_get(const mlk_spec* spec, int* m, int* n);
void mlk_spec_free(mlk_spec* spec);

/* --- geometry ----------------------------------------------------------- */
mlk_status mlk_u_from_h(double h, int m, double* u_out);

/* --- closed-form engine -------------------------------------------------- */
/* side: +1 for J_{i,j}, -1 for I_{i,j}. */
mlk_status mlk_reduce_integral_json(int i, int j, int m, int side, char** expr_json);
mlk_status mlk_assemble_json(const mlk_spec* spec, char** expansion_json);
mlk_status mlk_reduced_coefficients_json(const mlk_spec* spec, char** json_out);
mlk_status mlk_expand_series_json(const mlk_spec* spec, int max_exponent,
                                  char** json_out);
mlk_status mlk_generating_basis_json(int m, int n, char** json_out);
mlk_status mlk_independence_jacobian_json(int m, int n, char** json_out);

/* --- zero counting and bounds -------------------------------------------- */
mlk_status mlk_count_zeros_json(const mlk_spec* spec, char** report_json);
/* region receives "D1".."D6" (merged label for shared-formula regions);
 * finding is set to 1 when the formulas are internally inconsistent. */
mlk_status mlk_bounds(int m, int n, long* lower, long* upper,
                      char region[16], int* finding);
mlk_status mlk_bounds_table_csv(int m_max, int n_max, char** csv_out);
/* targets may be NULL: n_targets geometric defaults in (0.3, 3) are used. */
mlk_status mlk_construct_json(int m, int n, const double* targets, int n_targets,
                              char** spec_json, char** report_json);

/* --- quadrature oracle ---------------------------------------------------- */
mlk_status mlk_oracle_integral(int i, int j, double u, int m, int side,
                               double* value, double* error_estimate,
                               long* evaluations);
mlk_status mlk_oracle_melnikov(const mlk_spec* spec, double u, double* value,
                               double* error_estimate, long* evaluations);
/* Closed-form vs quadrature over i+j <= degree_sum_max, m <= m_max, at the
 * given u grid; CSV of relative errors. */
mlk_status mlk_verify_grid_csv(int degree_sum_max, int m_max, const double* us,
                               int n_us, char** csv_out);

/* --- direct simulation ----------------------------------------------------- */
mlk_status mlk_displacement(const mlk_spec* spec, double epsilon, double u0,
                            double* delta);
mlk_status mlk_find_cycles_json(const mlk_spec* spec, double epsilon, double u_lo,
                                double u_hi, int samples, char** json_out);
/* Trajectory CSV (t,x,y,zone) from (x0, y0). */
mlk_status mlk_flow_csv(const mlk_spec* spec, double epsilon, double x0, double y0,
                        double max_time, char** csv_out);
/* Per-revolution (u, delta) pairs for external plotting. */
mlk_status mlk_displacement_scan_csv(const mlk_spec* spec, double epsilon,
                                     double u_lo, double u_hi, int samples,
                                     char** csv_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MELNIKOV_C_API_H */
