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

// Exercises the public C interface from plain C.

#define _POSIX_C_SOURCE 200809L

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "wban/wban.h"

#ifndef WBAN_TESTDATA
#error "WBAN_TESTDATA must point at the generated test data directory"
#endif

static int failures = 0;
static int checks = 0;

#define CHECK(cond)                                                                                                    \
    do {                                                                                                               \
        ++checks;                                                                                                      \
        if (!(cond)) {                                                                                                 \
            ++failures;                                                                                                \
            fprintf(stderr, "%s:%d: CHECK(%s) failed; last error: %s\n", __FILE__, __LINE__, #cond,                  \
                    wban_last_error());                                                                                \
        }                                                                                                              \
    } while (0)

static const char *kConfig =
    "{\"seed\": 7,"
    " \"motion\": {\"bvh\": \"walk.bvh\", \"unit_scale\": 0.01},"
    " \"link\": {\"tx\": {\"joint\": \"LeftHand\", \"offset_m\": [0,0,0]},"
    "            \"rx\": {\"joint\": \"RightUpLeg\", \"offset_m\": [0,-0.12,0.08]}},"
    " \"duration_s\": 20}";

static char tmpdir[256];

static const char *tmp_path(const char *name) {
    static char buf[4][512];
    static int slot = 0;
    slot = (slot + 1) % 4;
    snprintf(buf[slot], sizeof buf[slot], "%s/%s", tmpdir, name);
    return buf[slot];
}

static void test_basics(void) {
    CHECK(strlen(wban_version()) > 0);
    CHECK(strcmp(wban_status_name(WBAN_OK), "ok") == 0);
    CHECK(strcmp(wban_status_name(WBAN_ERR_GEOMETRY), "geometry") == 0);

    double v = 0.0;
    CHECK(wban_pl_fs(1.0, &v) == WBAN_OK && fabs(v - 40.0542) < 1e-9);
    CHECK(wban_pl_bs(1.0, 0.0, &v) == WBAN_OK && fabs(v - 36.1) < 1e-9);
    CHECK(wban_pl_fs(0.0, &v) == WBAN_ERR_DOMAIN);
    CHECK(strstr(wban_last_error(), "distance") != NULL);
    CHECK(wban_pl_fs(1.0, NULL) == WBAN_ERR_INVALID_ARG);
    CHECK(wban_rssi(-8.0, 70.0) == -78.0);
}

static void test_config(void) {
    wban_config *cfg = NULL;
    CHECK(wban_config_from_string("{ \"seed\": ", WBAN_TESTDATA, &cfg) == WBAN_ERR_PARSE);
    CHECK(cfg == NULL);
    CHECK(wban_config_from_string("{\"mystery\": 1}", WBAN_TESTDATA, &cfg) == WBAN_ERR_CONFIG);
    CHECK(wban_config_from_string(kConfig, "/nonexistent", &cfg) == WBAN_ERR_IO);
    CHECK(strstr(wban_last_error(), "walk.bvh") != NULL);
    CHECK(wban_config_load("/nonexistent/x.json", &cfg) == WBAN_ERR_IO);
    CHECK(wban_config_from_string(NULL, WBAN_TESTDATA, &cfg) == WBAN_ERR_INVALID_ARG);

    CHECK(wban_config_from_string(kConfig, WBAN_TESTDATA, &cfg) == WBAN_OK);
    CHECK(wban_config_set(cfg, "policy.kind", "imu") == WBAN_OK);
    CHECK(wban_config_set(cfg, "policy.kind", "teleport") == WBAN_ERR_CONFIG);
    CHECK(wban_config_set(cfg, "nope.key", "1") == WBAN_ERR_CONFIG);
    CHECK(wban_config_set(cfg, "output.dir", tmpdir) == WBAN_OK);
    char *dir = NULL;
    CHECK(wban_config_output_dir(cfg, &dir) == WBAN_OK);
    CHECK(dir != NULL && strcmp(dir, tmpdir) == 0);
    wban_string_free(dir);
    wban_config_free(cfg);
    wban_config_free(NULL);
}

static void test_trace_and_analysis(void) {
    wban_config *cfg = NULL;
    CHECK(wban_config_from_string(kConfig, WBAN_TESTDATA, &cfg) == WBAN_OK);
    wban_trace *trace = NULL;
    CHECK(wban_emulate(cfg, &trace) == WBAN_OK);
    const size_t n = wban_trace_size(trace);
    CHECK(n == 7200);
    CHECK(fabs(wban_trace_frame_time(trace) - 1.0 / 120.0) < 1e-12);
    double *buf = malloc(n * sizeof *buf);
    CHECK(wban_trace_copy(trace, buf, n) == n);
    CHECK(buf[0] > 20.0 && buf[0] < 120.0);
    CHECK(wban_trace_write_csv(trace, tmp_path("trace.csv")) == WBAN_OK);
    CHECK(wban_trace_write_json(trace, tmp_path("trace.json")) == WBAN_OK);
    CHECK(wban_trace_write_imu_csv(trace, tmp_path("imu.csv")) == WBAN_OK);

    wban_trace *back = NULL;
    CHECK(wban_trace_load_csv(tmp_path("trace.csv"), &back) == WBAN_OK);
    CHECK(wban_trace_size(back) == n);
    CHECK(fabs(wban_trace_frame_time(back) - 1.0 / 120.0) < 1e-12);
    double first = 0.0;
    CHECK(wban_trace_copy(back, &first, 1) == 1);
    CHECK(fabs(first - buf[0]) < 1e-6);
    CHECK(wban_trace_write_imu_csv(back, tmp_path("none.csv")) == WBAN_ERR_DATA);
    wban_trace_free(back);
    free(buf);

    char *json = NULL;
    CHECK(wban_analyze(tmp_path("trace.csv"), cfg, &json) == WBAN_OK);
    CHECK(json != NULL && strstr(json, "\"coherence_time_s\"") != NULL);
    wban_string_free(json);
    CHECK(wban_analyze(tmp_path("trace.csv"), NULL, &json) == WBAN_OK);
    wban_string_free(json);
    CHECK(wban_analyze(tmp_path("missing.csv"), NULL, &json) == WBAN_ERR_IO);
    CHECK(wban_analyze(tmp_path("trace.json"), NULL, &json) == WBAN_ERR_PARSE);
    CHECK(wban_analyze_to_dir(tmp_path("trace.csv"), cfg, tmp_path("analysis")) == WBAN_OK);
    CHECK(access(tmp_path("analysis/analysis.json"), F_OK) == 0);
    CHECK(access(tmp_path("analysis/autocorr.csv"), F_OK) == 0);
    CHECK(access(tmp_path("analysis/cvf_cdf.csv"), F_OK) == 0);

    wban_trace_free(trace);
    wban_config_free(cfg);
}

static void test_simulation(void) {
    wban_config *cfg = NULL;
    CHECK(wban_config_from_string(kConfig, WBAN_TESTDATA, &cfg) == WBAN_OK);
    const double low = -8.0;
    wban_report *a = NULL;
    wban_report *b = NULL;
    CHECK(wban_simulate(cfg, NULL, &a) == WBAN_OK);
    CHECK(wban_simulate(cfg, &low, &b) == WBAN_OK);
    CHECK(wban_report_generated(a) == 200);
    CHECK(wban_report_delivered(a) <= wban_report_generated(a));
    CHECK(wban_report_pdr(a) >= wban_report_pdr(b));
    CHECK(wban_report_mean_rss(a) > wban_report_mean_rss(b));
    CHECK(wban_report_write_json(a, tmp_path("a.json")) == WBAN_OK);
    CHECK(wban_report_write_json(b, tmp_path("b.json")) == WBAN_OK);
    CHECK(wban_report_write_packets_csv(a, tmp_path("a_packets.csv")) == WBAN_OK);
    CHECK(wban_report_write_commands_csv(a, tmp_path("a_commands.csv")) == WBAN_OK);

    const double bogus = -3.0;
    wban_report *c = NULL;
    CHECK(wban_simulate(cfg, &bogus, &c) == WBAN_ERR_CONFIG);
    CHECK(c == NULL);

    const char *paths[] = {tmp_path("a.json"), tmp_path("b.json")};
    char *table = NULL;
    CHECK(wban_compare_reports(paths, 2, 0, &table) == WBAN_OK);
    CHECK(table != NULL && strstr(table, "d_pdr_pp") != NULL);
    wban_string_free(table);
    CHECK(wban_compare_reports(paths, 2, 1, &table) == WBAN_OK);
    CHECK(strncmp(table, "baseline,candidate,", 19) == 0);
    wban_string_free(table);
    CHECK(wban_compare_reports(paths, 1, 0, &table) == WBAN_ERR_COMPARE);

    CHECK(wban_config_set(cfg, "radio.sensitivity_dbm", "-90") == WBAN_OK);
    CHECK(wban_simulate(cfg, NULL, &c) == WBAN_OK);
    CHECK(wban_report_write_json(c, tmp_path("c.json")) == WBAN_OK);
    const char *mixed[] = {tmp_path("a.json"), tmp_path("c.json")};
    CHECK(wban_compare_reports(mixed, 2, 0, &table) == WBAN_ERR_COMPARE);

    wban_report_free(a);
    wban_report_free(b);
    wban_report_free(c);
    wban_config_free(cfg);
}

int main(void) {
    snprintf(tmpdir, sizeof tmpdir, "/tmp/wban-capi-XXXXXX");
    if (mkdtemp(tmpdir) == NULL) {
        perror("mkdtemp");
        return 1;
    }
    test_basics();
    test_config();
    test_trace_and_analysis();
    test_simulation();
    char cmd[600];
    snprintf(cmd, sizeof cmd, "rm -rf '%s'", tmpdir);
    if (system(cmd) != 0)
        fprintf(stderr, "could not remove %s\n", tmpdir);
    printf("%d checks, %d failures\n", checks, failures);
    return failures == 0 ? 0 : 1;
}
