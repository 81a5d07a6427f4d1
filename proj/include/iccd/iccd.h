/* Copyright 2026 The iccd Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the iccd library.
 *
 * Every fallible call returns an iccd_status. On failure the message and the
 * point/line index of the last error on the calling thread are available
 * through iccd_last_error() and iccd_last_error_index(). Handles are opaque,
 * owned by the caller and released with the matching *_destroy function.
 * Points are passed as double[3], matrices as row-major double[9].
 */

#ifndef ICCD_ICCD_H
#define ICCD_ICCD_H

#include <stddef.h>

#if defined(_WIN32)
#define ICCD_API __declspec(dllexport)
#else
#define ICCD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iccd_status {
  ICCD_OK = 0,
  ICCD_INVALID_ARGUMENT = 1,
  ICCD_DIVERGENCE = 2,
  ICCD_DEFECTIVE_MATRIX = 3,
  ICCD_ORBIT_MISMATCH = 4,
  ICCD_NO_CONVERGENCE = 5,
  ICCD_SINGULAR_NEWTON_STEP = 6,
  ICCD_SADDLE_NOT_FOUND = 7,
  ICCD_AMBIGUOUS_DIRECTIONS = 8,
  ICCD_BUDGET_EXHAUSTED = 9,
  ICCD_NON_CLOSING_CURVE = 10,
  ICCD_DEGENERATE_CLOUD = 11,
  ICCD_PROJECTION_FOLD = 12,
  ICCD_SELF_INTERSECTING_PROJECTION = 13,
  ICCD_NO_DOUBLING_EIGENVALUE = 14,
  ICCD_DENSITY_VIOLATION = 15,
  ICCD_ORTHOGONAL_STEP = 16,
  ICCD_EVEN_PERIOD_CYLINDER = 17,
  ICCD_NO_CROSSING = 18,
  ICCD_CYCLE_LOST = 19,
  ICCD_PARSE_ERROR = 20,
  ICCD_VALIDATION_ERROR = 21,
  ICCD_RANK_DEFICIENT = 22,
  ICCD_IO = 23,
  ICCD_INTERNAL = 99
} iccd_status;

typedef enum iccd_topology { ICCD_CYLINDER = 0, ICCD_MOEBIUS = 1 } iccd_topology;
typedef enum iccd_prediction { ICCD_LOOP_DOUBLING = 0, ICCD_LENGTH_DOUBLING = 1 } iccd_prediction;
typedef enum iccd_doubling_outcome {
  ICCD_TWO_LOOPS = 0,
  ICCD_DOUBLE_LENGTH = 1,
  ICCD_INCONCLUSIVE = 2
} iccd_doubling_outcome;

typedef struct iccd_map iccd_map;
typedef struct iccd_cycle iccd_cycle;
typedef struct iccd_icc iccd_icc;
typedef struct iccd_ribbon iccd_ribbon;
typedef struct iccd_config iccd_config;

/* Eigenvalues sorted by modulus, largest first. */
typedef struct iccd_spectrum {
  double re[3];
  double im[3];
  double trace;
  double second_trace;
  double determinant;
  double condition;
  int ill_conditioned;
} iccd_spectrum;

typedef struct iccd_third_sign {
  char sign; /* '+', '-' or 'c' for a complex pair */
  double doubling;
  int has_tangential;
  double tangential;
  int has_third;
  double third;
  int has_complex_pair;
  double complex_re;
  double complex_im;
} iccd_third_sign;

typedef struct iccd_verdict {
  iccd_topology topology;
  iccd_prediction prediction;
  int holonomy_sign;
  double twist_total;
  double confidence;
  int p;
  /* Third-eigenvalue sign of the period-p cycle, 0 when not available. */
  char third_sign;
} iccd_verdict;

typedef struct iccd_post_doubling {
  iccd_doubling_outcome outcome;
  int quasiperiodic_route;
  int attractor_period;
  int components;
  double swap_fraction;
  double length_ratio;
} iccd_post_doubling;

ICCD_API const char* iccd_version(void);
ICCD_API const char* iccd_status_name(iccd_status status);
ICCD_API const char* iccd_last_error(void);
ICCD_API long iccd_last_error_index(void);
/* Process exit code for a status: 0, 2 parse, 3 validation, 4 numerical, 5 I/O. */
ICCD_API int iccd_exit_code(iccd_status status);
ICCD_API void iccd_string_free(char* s);

/* Maps. name is "mira", "kamiyama-a" or "kamiyama-b". */
ICCD_API iccd_status iccd_map_create(const char* name, const double* params, size_t n_params, iccd_map** out);
ICCD_API void iccd_map_destroy(iccd_map* map);
ICCD_API size_t iccd_map_param_count(const iccd_map* map);
ICCD_API const char* iccd_map_param_name(const iccd_map* map, size_t i);
ICCD_API iccd_status iccd_map_eval(const iccd_map* map, const double x[3], double out[3]);
ICCD_API iccd_status iccd_map_jacobian(const iccd_map* map, const double x[3], double out[9]);
ICCD_API iccd_status iccd_map_iterate(const iccd_map* map, const double x[3], long n, double out[3]);
ICCD_API double iccd_ns_locus_mira(double a, double b);
ICCD_API iccd_status iccd_eig3(const double m[9], iccd_spectrum* out);

/* Cycles. iccd_cycle_attractor sets *out to NULL when the attractor is not
 * periodic up to p_max. */
ICCD_API iccd_status iccd_cycle_attractor(const iccd_map* map, const double seed[3], long transient, int p_max,
                                          iccd_cycle** out);
ICCD_API iccd_status iccd_cycle_newton(const iccd_map* map, int p, const double seed[3], iccd_cycle** out);
ICCD_API iccd_status iccd_cycle_find_saddle(const iccd_map* map, const iccd_cycle* node, iccd_cycle** out);
ICCD_API void iccd_cycle_destroy(iccd_cycle* cycle);
ICCD_API int iccd_cycle_period(const iccd_cycle* cycle);
ICCD_API iccd_status iccd_cycle_point(const iccd_cycle* cycle, size_t i, double out[3]);
ICCD_API iccd_status iccd_cycle_spectrum(const iccd_cycle* cycle, iccd_spectrum* out);
/* 's'/'u' per multiplier; valid while the handle lives. */
ICCD_API const char* iccd_cycle_signature(const iccd_cycle* cycle);
ICCD_API const char* iccd_cycle_kind(const iccd_cycle* cycle);
ICCD_API iccd_status iccd_cycle_third_sign(const iccd_cycle* cycle, iccd_third_sign* out);

/* Invariant closed curves. */
ICCD_API iccd_status iccd_icc_resonant(const iccd_map* map, const iccd_cycle* node, const iccd_cycle* saddle,
                                       iccd_icc** out);
ICCD_API iccd_status iccd_icc_quasi(const iccd_map* map, const double seed[3], long samples, long transient,
                                    long p_max, iccd_icc** out);
ICCD_API void iccd_icc_destroy(iccd_icc* icc);
ICCD_API int iccd_icc_is_resonant(const iccd_icc* icc);
/* Number of loop points, including the closing duplicate. */
ICCD_API size_t iccd_icc_size(const iccd_icc* icc);
ICCD_API iccd_status iccd_icc_point(const iccd_icc* icc, size_t i, double out[3]);
ICCD_API int iccd_icc_period_hint(const iccd_icc* icc);
ICCD_API double iccd_icc_rotation_number(const iccd_icc* icc);
ICCD_API iccd_status iccd_rational_approx(double rho, long p_max, long* q, long* p);

/* Doubling ribbons and classification. window <= 0 selects the default. */
ICCD_API iccd_status iccd_ribbon_build(const iccd_icc* icc, const iccd_map* map, int p, double window,
                                       iccd_ribbon** out);
/* Ribbon over n open-loop points stored as 3n doubles. */
ICCD_API iccd_status iccd_ribbon_from_points(const double* points, size_t n, const iccd_map* map, int p,
                                             double window, iccd_ribbon** out);
ICCD_API void iccd_ribbon_destroy(iccd_ribbon* ribbon);
ICCD_API size_t iccd_ribbon_size(const iccd_ribbon* ribbon);
ICCD_API iccd_status iccd_ribbon_element(const iccd_ribbon* ribbon, size_t i, double base[3], double* eigenvalue,
                                         double direction[3]);
ICCD_API iccd_status iccd_ribbon_classify(const iccd_ribbon* ribbon, iccd_verdict* out);
ICCD_API iccd_status iccd_predict(const iccd_icc* icc, const iccd_map* map, iccd_verdict* out);
ICCD_API iccd_status iccd_predict_from_cycle_points(const iccd_cycle* node, const iccd_map* map, iccd_verdict* out);

/* after: the map at the post-bifurcation parameters. */
ICCD_API iccd_status iccd_verify_post_doubling(const iccd_map* after, const iccd_icc* before, int p,
                                               iccd_post_doubling* out);
/* Flip of `cycle` along the straight path start -> end (n_params values each)
 * of the map's parameters. *t receives the path parameter in [0, 1]. */
ICCD_API iccd_status iccd_locate_flip(const iccd_map* map, const double* start, const double* end, size_t n_params,
                                      const iccd_cycle* cycle, int steps, double* t);

/* Configuration and runs. */
ICCD_API iccd_status iccd_config_parse(const char* text, iccd_config** out);
ICCD_API iccd_status iccd_config_load(const char* path, iccd_config** out);
ICCD_API void iccd_config_destroy(iccd_config* cfg);
ICCD_API const char* iccd_config_command(const iccd_config* cfg);
/* section "" addresses the top level. */
ICCD_API iccd_status iccd_config_set(iccd_config* cfg, const char* section, const char* key, const char* value);
ICCD_API iccd_status iccd_config_emit(const iccd_config* cfg, char** text);
/* Runs the configured command. The status reflects the first failure, if
 * any; *exit_code and *summary_json (free with iccd_string_free) are filled
 * in either case. output_dir may be NULL. */
ICCD_API iccd_status iccd_run(const iccd_config* cfg, const char* output_dir, int* exit_code, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* ICCD_ICCD_H */
