/* Copyright 2026 The eitk Authors.
 *
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

/* C interface to libeitk. Handles are opaque; every function returns an
 * eitk_status and reports failures through eitk_last_error(), which is
 * thread-local. Strings returned through `char**` are owned by the caller and
 * released with eitk_string_free. */

#ifndef EITK_EITK_H_
#define EITK_EITK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(EITK_BUILDING_LIBRARY)
#define EITK_API __attribute__((visibility("default")))
#else
#define EITK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eitk_status {
  EITK_OK = 0,
  EITK_VERDICT_FAIL = 1,
  EITK_INVALID_ARGUMENT = 2,
  EITK_INTERNAL_ERROR = 3,
} eitk_status;

typedef struct eitk_params eitk_params;
typedef struct eitk_path eitk_path;
typedef struct eitk_report eitk_report;

typedef struct eitk_classification {
  int infinite_variation;
  int um;
  int npl;
  /* 0 none, 1 positive, 2 negative, 3 two-sided. */
  int spectral;
} eitk_classification;

typedef struct eitk_jump {
  double location;
  double size;
} eitk_jump;

typedef struct eitk_face {
  double start_time;
  double end_time;
  double start_value;
  double end_value;
  double slope;
} eitk_face;

EITK_API const char* eitk_version(void);
EITK_API const char* eitk_last_error(void);
EITK_API void eitk_string_free(char* s);

/* Parameters. */
EITK_API eitk_status eitk_params_from_json(const char* json, eitk_params** out);
EITK_API eitk_status eitk_params_from_file(const char* path, eitk_params** out);
EITK_API void eitk_params_free(eitk_params* p);
EITK_API eitk_status eitk_params_classify(const eitk_params* p,
                                          eitk_classification* out);
EITK_API eitk_status eitk_params_to_json(const eitk_params* p, char** out);
EITK_API eitk_status eitk_params_jump_count(const eitk_params* p,
                                            size_t* out);

/* Paths. */
EITK_API eitk_status eitk_path_simulate(const eitk_params* p, int grid_level,
                                        uint64_t seed, eitk_path** out);
EITK_API void eitk_path_free(eitk_path* path);
EITK_API eitk_status eitk_path_eval(const eitk_path* path, double t,
                                    double* out);
EITK_API eitk_status eitk_path_eval_left(const eitk_path* path, double t,
                                         double* out);
/* Minimum over the skeleton, its first location, and X at and before it. */
EITK_API eitk_status eitk_path_min(const eitk_path* path, double* min_value,
                                   double* rho, double* value_at_rho,
                                   double* left_at_rho);
EITK_API eitk_status eitk_path_reverse(const eitk_path* path,
                                       eitk_path** out);
/* Writes up to `cap` jumps sorted by location; *count gets the total. */
EITK_API eitk_status eitk_path_jumps(const eitk_path* path, eitk_jump* buf,
                                     size_t cap, size_t* count);
/* Faces of the convex minorant of the skeleton; same buffer protocol. */
EITK_API eitk_status eitk_path_minorant(const eitk_path* path, eitk_face* buf,
                                        size_t cap, size_t* count);

/* Tilting. */
EITK_API eitk_status eitk_mgf(const eitk_params* p, double t, double theta,
                              double* out);
EITK_API eitk_status eitk_log_mgf(const eitk_params* p, double t,
                                  double theta, double* out);
EITK_API eitk_status eitk_tilt_probabilities(const eitk_params* p,
                                             double theta, double T,
                                             double* buf, size_t cap,
                                             size_t* count);
EITK_API eitk_status eitk_mean_alpha_theta(const eitk_params* p, double theta,
                                           double T, double* out);

/* Experiments. `config_json` follows the runner schema: command, kind,
 * params_file or params, seed, n, grid_level, workers, out_dir, knobs.
 * Returns EITK_OK on a passing verdict and EITK_VERDICT_FAIL otherwise; the
 * report is produced in both cases. */
EITK_API eitk_status eitk_run(const char* config_json, eitk_report** out);
EITK_API void eitk_report_free(eitk_report* r);
EITK_API eitk_status eitk_report_json(const eitk_report* r, char** out);
EITK_API eitk_status eitk_report_csv(const eitk_report* r, char** out);
EITK_API eitk_status eitk_report_passed(const eitk_report* r, int* out);
EITK_API eitk_status eitk_report_statistic(const eitk_report* r,
                                           const char* key, double* out);

/* Summarizes every report.json under `dir` as CSV. Returns EITK_OK when all
 * verdicts pass and EITK_VERDICT_FAIL otherwise. */
EITK_API eitk_status eitk_aggregate_reports(const char* dir, char** csv_out,
                                            char** warnings_out);

#ifdef __cplusplus
}
#endif

#endif /* EITK_EITK_H_ */
