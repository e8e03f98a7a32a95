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


#include "wban/wban.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "text_io.hpp"
#include "wban/error.hpp"
#include "wban/scenario.hpp"

struct wban_config {
    std::string text;
    std::filesystem::path base_dir;
    wban::Overrides overrides;
    wban::Scenario scenario;
};

struct wban_trace {
    wban::PathLossTrace trace;
    std::optional<wban::BiosignalTrace> imu;
};

struct wban_report {
    wban::SimReport report;
};

namespace {

thread_local std::string g_last_error;

wban_status status_of(wban::ErrorKind kind) {
    using wban::ErrorKind;
    switch (kind) {
    case ErrorKind::io: return WBAN_ERR_IO;
    case ErrorKind::parse:
    case ErrorKind::structural: return WBAN_ERR_PARSE;
    case ErrorKind::geometry: return WBAN_ERR_GEOMETRY;
    case ErrorKind::config: return WBAN_ERR_CONFIG;
    case ErrorKind::domain:
    case ErrorKind::undefined_correlation:
    case ErrorKind::lookup:
    case ErrorKind::bounds: return WBAN_ERR_DOMAIN;
    case ErrorKind::insufficient_data:
    case ErrorKind::calibration: return WBAN_ERR_DATA;
    case ErrorKind::comparison: return WBAN_ERR_COMPARE;
    }
    return WBAN_ERR_INTERNAL;
}

wban_status fail(wban_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <class F> wban_status guarded(F &&f) {
    try {
        g_last_error.clear();
        f();
        return WBAN_OK;
    } catch (const wban::Error &e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc &) {
        return fail(WBAN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(WBAN_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(WBAN_ERR_INTERNAL, "unknown failure");
    }
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

#define WBAN_REQUIRE(cond, what)                                                                                       \
    do {                                                                                                               \
        if (!(cond))                                                                                                   \
            return fail(WBAN_ERR_INVALID_ARG, what);                                                                   \
    } while (0)

wban::AnalysisConfig analysis_of(const wban_config *cfg) {
    return cfg != nullptr ? cfg->scenario.analysis : wban::AnalysisConfig{};
}

} // namespace

extern "C" {

const char *wban_version(void) { return "1.0.0"; }

const char *wban_status_name(wban_status status) {
    switch (status) {
    case WBAN_OK: return "ok";
    case WBAN_ERR_IO: return "io";
    case WBAN_ERR_PARSE: return "parse";
    case WBAN_ERR_GEOMETRY: return "geometry";
    case WBAN_ERR_CONFIG: return "config";
    case WBAN_ERR_DOMAIN: return "domain";
    case WBAN_ERR_DATA: return "data";
    case WBAN_ERR_COMPARE: return "comparison";
    case WBAN_ERR_INVALID_ARG: return "invalid_argument";
    case WBAN_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char *wban_last_error(void) { return g_last_error.c_str(); }

void wban_string_free(char *s) { std::free(s); }

wban_status wban_config_load(const char *path, wban_config **out) {
    WBAN_REQUIRE(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto cfg = std::make_unique<wban_config>();
        const std::filesystem::path file(path);
        cfg->text = wban::detail::read_text_file(file);
        cfg->base_dir = file.parent_path().empty() ? std::filesystem::path(".") : file.parent_path();
        cfg->scenario = wban::parse_scenario(cfg->text, cfg->base_dir);
        *out = cfg.release();
    });
}

wban_status wban_config_from_string(const char *json, const char *base_dir, wban_config **out) {
    WBAN_REQUIRE(json != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto cfg = std::make_unique<wban_config>();
        cfg->text = json;
        cfg->base_dir = base_dir != nullptr ? std::filesystem::path(base_dir) : std::filesystem::path(".");
        cfg->scenario = wban::parse_scenario(cfg->text, cfg->base_dir);
        *out = cfg.release();
    });
}

wban_status wban_config_set(wban_config *cfg, const char *key, const char *value) {
    WBAN_REQUIRE(cfg != nullptr && key != nullptr && value != nullptr, "null argument");
    return guarded([&] {
        wban::Overrides next = cfg->overrides;
        next.emplace_back(key, value);
        cfg->scenario = wban::parse_scenario(cfg->text, cfg->base_dir, next);
        cfg->overrides = std::move(next);
    });
}

wban_status wban_config_output_dir(const wban_config *cfg, char **out) {
    WBAN_REQUIRE(cfg != nullptr && out != nullptr, "null argument");
    return guarded([&] { *out = dup_string(cfg->scenario.output_dir.string()); });
}

void wban_config_free(wban_config *cfg) { delete cfg; }

wban_status wban_pl_fs(double d_m, double *out_db) {
    WBAN_REQUIRE(out_db != nullptr, "null argument");
    return guarded([&] { *out_db = wban::pl_fs(d_m); });
}

wban_status wban_pl_bs(double d_m, double n_db, double *out_db) {
    WBAN_REQUIRE(out_db != nullptr, "null argument");
    return guarded([&] { *out_db = wban::pl_bs(d_m, n_db); });
}

double wban_rssi(double p_tx_dbm, double pl_db) { return wban::rssi(p_tx_dbm, pl_db); }

wban_status wban_emulate(const wban_config *cfg, wban_trace **out) {
    WBAN_REQUIRE(cfg != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    return guarded([&] {
        wban::Emulation e = wban::emulate(cfg->scenario);
        *out = new wban_trace{std::move(e.trace), std::move(e.imu)};
    });
}

wban_status wban_trace_load_csv(const char *path, wban_trace **out) {
    WBAN_REQUIRE(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new wban_trace{wban::read_trace_csv(path), std::nullopt}; });
}

size_t wban_trace_size(const wban_trace *trace) { return trace != nullptr ? trace->trace.size() : 0; }

double wban_trace_frame_time(const wban_trace *trace) { return trace != nullptr ? trace->trace.frame_time : 0.0; }

size_t wban_trace_copy(const wban_trace *trace, double *buf, size_t n) {
    if (trace == nullptr || buf == nullptr)
        return 0;
    const size_t m = std::min(n, trace->trace.samples.size());
    std::copy_n(trace->trace.samples.begin(), m, buf);
    return m;
}

wban_status wban_trace_write_csv(const wban_trace *trace, const char *path) {
    WBAN_REQUIRE(trace != nullptr && path != nullptr, "null argument");
    return guarded([&] { wban::write_trace_csv(trace->trace, path); });
}

wban_status wban_trace_write_json(const wban_trace *trace, const char *path) {
    WBAN_REQUIRE(trace != nullptr && path != nullptr, "null argument");
    return guarded([&] { wban::write_trace_json(trace->trace, path); });
}

wban_status wban_trace_write_imu_csv(const wban_trace *trace, const char *path) {
    WBAN_REQUIRE(trace != nullptr && path != nullptr, "null argument");
    if (!trace->imu)
        return fail(WBAN_ERR_DATA, "trace carries no IMU series");
    return guarded([&] { wban::write_signal_csv(*trace->imu, path); });
}

void wban_trace_free(wban_trace *trace) { delete trace; }

wban_status wban_analyze(const char *csv_path, const wban_config *cfg, char **json_out) {
    WBAN_REQUIRE(csv_path != nullptr && json_out != nullptr, "null argument");
    return guarded([&] {
        const wban::StabilityReport rep =
            wban::analyze_csv(wban::detail::read_text_file(csv_path), analysis_of(cfg));
        *json_out = dup_string(wban::stability_to_json(rep));
    });
}

wban_status wban_analyze_to_dir(const char *csv_path, const wban_config *cfg, const char *out_dir) {
    WBAN_REQUIRE(csv_path != nullptr && out_dir != nullptr, "null argument");
    return guarded([&] {
        const wban::StabilityReport rep =
            wban::analyze_csv(wban::detail::read_text_file(csv_path), analysis_of(cfg));
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        wban::detail::write_text_file(dir / "analysis.json", wban::stability_to_json(rep));
        wban::detail::write_text_file(dir / "autocorr.csv", wban::autocorr_to_csv(rep));
        wban::detail::write_text_file(dir / "cvf_cdf.csv", wban::cdf_to_csv(rep));
    });
}

wban_status wban_simulate(const wban_config *cfg, const double *power_dbm, wban_report **out) {
    WBAN_REQUIRE(cfg != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    return guarded([&] {
        std::optional<double> power;
        if (power_dbm != nullptr)
            power = *power_dbm;
        *out = new wban_report{wban::simulate(cfg->scenario, power)};
    });
}

double wban_report_pdr(const wban_report *report) { return report != nullptr ? report->report.pdr() : 0.0; }

size_t wban_report_generated(const wban_report *report) {
    return report != nullptr ? report->report.generated() : 0;
}

size_t wban_report_delivered(const wban_report *report) {
    return report != nullptr ? report->report.delivered() : 0;
}

double wban_report_mean_rss(const wban_report *report) {
    return report != nullptr ? report->report.mean_rss_dbm() : 0.0;
}

wban_status wban_report_write_json(const wban_report *report, const char *path) {
    WBAN_REQUIRE(report != nullptr && path != nullptr, "null argument");
    return guarded([&] { wban::detail::write_text_file(path, wban::report_to_json(report->report)); });
}

wban_status wban_report_write_packets_csv(const wban_report *report, const char *path) {
    WBAN_REQUIRE(report != nullptr && path != nullptr, "null argument");
    return guarded([&] { wban::detail::write_text_file(path, wban::packets_to_csv(report->report)); });
}

wban_status wban_report_write_commands_csv(const wban_report *report, const char *path) {
    WBAN_REQUIRE(report != nullptr && path != nullptr, "null argument");
    return guarded([&] { wban::detail::write_text_file(path, wban::commands_to_csv(report->report.commands)); });
}

void wban_report_free(wban_report *report) { delete report; }

wban_status wban_compare_reports(const char *const *paths, size_t n, int csv, char **out) {
    WBAN_REQUIRE(paths != nullptr && out != nullptr, "null argument");
    return guarded([&] {
        std::vector<wban::ReportSummary> summaries;
        for (size_t i = 0; i < n; ++i) {
            if (paths[i] == nullptr)
                throw wban::Error(wban::ErrorKind::io, "null report path");
            summaries.push_back(wban::load_summary(paths[i]));
        }
        const auto rows = wban::compare_reports(summaries);
        *out = dup_string(csv != 0 ? wban::comparison_to_csv(rows) : wban::comparison_to_text(rows));
    });
}

} // extern "C"
