// wbanemu - body-area channel emulator and adaptive network simulator
// Copyright (C) 2026 The wbanemu authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


/* C interface to the wbanemu library. Every fallible call returns a
 * wban_status; on failure wban_last_error() describes the problem for the
 * calling thread. Handles are opaque and owned by the caller, who releases
 * them with the matching *_free function. Strings returned through `char **`
 * are released with wban_string_free. */

#ifndef WBAN_WBAN_H
#define WBAN_WBAN_H

#include <stddef.h>

#if defined(_WIN32)
#define WBAN_API __declspec(dllexport)
#else
#define WBAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wban_status {
    WBAN_OK = 0,
    WBAN_ERR_IO = 1,
    WBAN_ERR_PARSE = 2,
    WBAN_ERR_GEOMETRY = 3,
    WBAN_ERR_CONFIG = 4,
    WBAN_ERR_DOMAIN = 5,
    WBAN_ERR_DATA = 6,
    WBAN_ERR_COMPARE = 7,
    WBAN_ERR_INVALID_ARG = 8,
    WBAN_ERR_INTERNAL = 9
} wban_status;

typedef struct wban_config wban_config;
typedef struct wban_trace wban_trace;
typedef struct wban_report wban_report;

WBAN_API const char *wban_version(void);
WBAN_API const char *wban_status_name(wban_status status);
/* Message of the last failed call on this thread ("" if none). */
WBAN_API const char *wban_last_error(void);
WBAN_API void wban_string_free(char *s);

/* ---- configuration ---------------------------------------------------- */

WBAN_API wban_status wban_config_load(const char *path, wban_config **out);
/* `base_dir` anchors relative paths; NULL means the working directory. */
WBAN_API wban_status wban_config_from_string(const char *json, const char *base_dir, wban_config **out);
/* Sets a dotted key (e.g. "policy.kind"). The value is parsed as JSON when
 * possible, otherwise taken as a string. The whole configuration is
 * revalidated; on failure the handle is left unchanged. */
WBAN_API wban_status wban_config_set(wban_config *cfg, const char *key, const char *value);
WBAN_API wban_status wban_config_output_dir(const wban_config *cfg, char **out);
WBAN_API void wban_config_free(wban_config *cfg);

/* ---- channel ---------------------------------------------------------- */

WBAN_API wban_status wban_pl_fs(double d_m, double *out_db);
WBAN_API wban_status wban_pl_bs(double d_m, double n_db, double *out_db);
WBAN_API double wban_rssi(double p_tx_dbm, double pl_db);

WBAN_API wban_status wban_emulate(const wban_config *cfg, wban_trace **out);
WBAN_API wban_status wban_trace_load_csv(const char *path, wban_trace **out);
WBAN_API size_t wban_trace_size(const wban_trace *trace);
WBAN_API double wban_trace_frame_time(const wban_trace *trace);
/* Copies min(n, size) path-loss samples into `buf`. */
WBAN_API size_t wban_trace_copy(const wban_trace *trace, double *buf, size_t n);
WBAN_API wban_status wban_trace_write_csv(const wban_trace *trace, const char *path);
WBAN_API wban_status wban_trace_write_json(const wban_trace *trace, const char *path);
/* Tx accelerometer series (`t_s,value`); only for traces from wban_emulate. */
WBAN_API wban_status wban_trace_write_imu_csv(const wban_trace *trace, const char *path);
WBAN_API void wban_trace_free(wban_trace *trace);

/* ---- analysis --------------------------------------------------------- */

/* Stability analysis of a path-loss trace CSV or a `t_s,value` RSS CSV.
 * `cfg` may be NULL for default analysis settings. */
WBAN_API wban_status wban_analyze(const char *csv_path, const wban_config *cfg, char **json_out);
/* Writes analysis.json, autocorr.csv and cvf_cdf.csv into `out_dir`. */
WBAN_API wban_status wban_analyze_to_dir(const char *csv_path, const wban_config *cfg, const char *out_dir);

/* ---- simulation ------------------------------------------------------- */

/* `power_dbm` may be NULL; otherwise it replaces the configured level. */
WBAN_API wban_status wban_simulate(const wban_config *cfg, const double *power_dbm, wban_report **out);
WBAN_API double wban_report_pdr(const wban_report *report);
WBAN_API size_t wban_report_generated(const wban_report *report);
WBAN_API size_t wban_report_delivered(const wban_report *report);
WBAN_API double wban_report_mean_rss(const wban_report *report);
WBAN_API wban_status wban_report_write_json(const wban_report *report, const char *path);
WBAN_API wban_status wban_report_write_packets_csv(const wban_report *report, const char *path);
WBAN_API wban_status wban_report_write_commands_csv(const wban_report *report, const char *path);
WBAN_API void wban_report_free(wban_report *report);

/* Compares report JSON files against the first one. `csv` selects CSV
 * output instead of an aligned text table. */
WBAN_API wban_status wban_compare_reports(const char *const *paths, size_t n, int csv, char **out);

#ifdef __cplusplus
}
#endif

#endif /* WBAN_WBAN_H */
