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


// wbanemu: command-line driver over the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wban/wban.h"

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, internal = 1, usage = 2, io = 3, parse = 4, geometry = 5, config = 6, data = 7, compare = 8 };

int exit_code(wban_status s) {
    switch (s) {
    case WBAN_OK: return ok;
    case WBAN_ERR_IO: return io;
    case WBAN_ERR_PARSE: return parse;
    case WBAN_ERR_GEOMETRY: return geometry;
    case WBAN_ERR_CONFIG: return config;
    case WBAN_ERR_DOMAIN:
    case WBAN_ERR_DATA: return data;
    case WBAN_ERR_COMPARE: return compare;
    case WBAN_ERR_INVALID_ARG: return usage;
    case WBAN_ERR_INTERNAL: return internal;
    }
    return internal;
}

/// Thrown to unwind with a library status and its message.
struct Failure {
    wban_status status;
    std::string message;
};

void check(wban_status s) {
    if (s != WBAN_OK)
        throw Failure{s, wban_last_error()};
}

struct ConfigDeleter {
    void operator()(wban_config *c) const { wban_config_free(c); }
};
struct TraceDeleter {
    void operator()(wban_trace *t) const { wban_trace_free(t); }
};
struct ReportDeleter {
    void operator()(wban_report *r) const { wban_report_free(r); }
};
struct StringDeleter {
    void operator()(char *s) const { wban_string_free(s); }
};
using ConfigPtr = std::unique_ptr<wban_config, ConfigDeleter>;
using TracePtr = std::unique_ptr<wban_trace, TraceDeleter>;
using ReportPtr = std::unique_ptr<wban_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void log(const std::string &msg) { std::cerr << "wbanemu: " << msg << "\n"; }

ConfigPtr load_config(const Common &c, const std::vector<std::pair<std::string, std::string>> &extra = {}) {
    wban_config *raw = nullptr;
    check(wban_config_load(c.config.c_str(), &raw));
    ConfigPtr cfg(raw);
    for (const std::string &kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Failure{WBAN_ERR_INVALID_ARG, "--set expects key=value, got '" + kv + "'"};
        check(wban_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (c.seed)
        check(wban_config_set(cfg.get(), "seed", std::to_string(*c.seed).c_str()));
    for (const auto &[k, v] : extra)
        check(wban_config_set(cfg.get(), k.c_str(), v.c_str()));
    if (!c.out.empty()) {
        // Flag paths are relative to the working directory, not the config.
        const std::string dir = fs::absolute(c.out).lexically_normal().string();
        std::string quoted;
        for (char ch : dir) {
            if (ch == '"' || ch == '\\')
                quoted += '\\';
            quoted += ch;
        }
        check(wban_config_set(cfg.get(), "output.dir", ("\"" + quoted + "\"").c_str()));
    }
    return cfg;
}

fs::path output_dir(const wban_config *cfg) {
    char *raw = nullptr;
    check(wban_config_output_dir(cfg, &raw));
    StringPtr s(raw);
    fs::path dir(s.get());
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Failure{WBAN_ERR_IO, "cannot create output directory " + dir.string() + ": " + ec.message()};
    return dir;
}

std::string level_tag(double dbm) {
    std::ostringstream os;
    os << "p" << dbm;
    return os.str();
}

int cmd_emulate(const Common &c) {
    ConfigPtr cfg = load_config(c);
    wban_trace *raw = nullptr;
    check(wban_emulate(cfg.get(), &raw));
    TracePtr trace(raw);
    const fs::path dir = output_dir(cfg.get());
    check(wban_trace_write_csv(trace.get(), (dir / "trace.csv").string().c_str()));
    check(wban_trace_write_json(trace.get(), (dir / "trace.json").string().c_str()));
    check(wban_trace_write_imu_csv(trace.get(), (dir / "imu.csv").string().c_str()));

    std::vector<double> pl(wban_trace_size(trace.get()));
    wban_trace_copy(trace.get(), pl.data(), pl.size());
    double mean = 0.0;
    for (double v : pl)
        mean += v;
    mean /= static_cast<double>(pl.size());
    double var = 0.0;
    for (double v : pl)
        var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(pl.size()));
    std::printf("frames %zu\nframe_time_s %.9f\nmean_pl_db %.4f\nstd_pl_db %.4f\n", pl.size(),
                wban_trace_frame_time(trace.get()), mean, sd);
    log("wrote " + (dir / "trace.csv").string());
    return ok;
}

int cmd_analyze(const Common &c, const std::string &input) {
    ConfigPtr cfg;
    if (!c.config.empty())
        cfg = load_config(c);
    if (!c.out.empty()) {
        check(wban_analyze_to_dir(input.c_str(), cfg.get(), c.out.c_str()));
        log("wrote analysis to " + c.out);
        return ok;
    }
    char *raw = nullptr;
    check(wban_analyze(input.c_str(), cfg.get(), &raw));
    StringPtr json(raw);
    std::fputs(json.get(), stdout);
    return ok;
}

struct SweepResult {
    double level = 0.0;
    ReportPtr report;
    wban_status status = WBAN_OK;
    std::string error;
};

int cmd_simulate(const Common &c, const std::string &policy, const std::optional<double> &power,
                 const std::string &sweep) {
    std::vector<std::pair<std::string, std::string>> extra;
    if (!policy.empty())
        extra.emplace_back("policy.kind", policy);
    if (power) {
        std::ostringstream os;
        os << *power;
        extra.emplace_back("policy.power_dbm", os.str());
    }
    ConfigPtr cfg = load_config(c, extra);
    const fs::path dir = output_dir(cfg.get());

    if (sweep.empty()) {
        wban_report *raw = nullptr;
        check(wban_simulate(cfg.get(), nullptr, &raw));
        ReportPtr rep(raw);
        check(wban_report_write_json(rep.get(), (dir / "report.json").string().c_str()));
        check(wban_report_write_packets_csv(rep.get(), (dir / "packets.csv").string().c_str()));
        check(wban_report_write_commands_csv(rep.get(), (dir / "commands.csv").string().c_str()));
        std::printf("pdr %.6f\ngenerated %zu\ndelivered %zu\n", wban_report_pdr(rep.get()),
                    wban_report_generated(rep.get()), wban_report_delivered(rep.get()));
        log("wrote " + (dir / "report.json").string());
        return ok;
    }

    const std::string prefix = "powers=";
    if (sweep.rfind(prefix, 0) != 0)
        throw Failure{WBAN_ERR_INVALID_ARG, "--sweep expects powers=<dBm>,<dBm>,..."};
    std::vector<double> levels;
    std::stringstream list(sweep.substr(prefix.size()));
    for (std::string item; std::getline(list, item, ',');) {
        try {
            std::size_t used = 0;
            levels.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw Failure{WBAN_ERR_INVALID_ARG, "bad sweep level '" + item + "'"};
        }
    }
    if (levels.empty())
        throw Failure{WBAN_ERR_INVALID_ARG, "--sweep lists no levels"};

    // Sweep points are independent simulations; run them concurrently.
    std::vector<std::future<SweepResult>> jobs;
    for (double level : levels)
        jobs.push_back(std::async(std::launch::async, [&cfg, level] {
            SweepResult r;
            r.level = level;
            wban_report *raw = nullptr;
            r.status = wban_simulate(cfg.get(), &level, &raw);
            r.report.reset(raw);
            if (r.status != WBAN_OK)
                r.error = wban_last_error();
            return r;
        }));
    std::vector<SweepResult> results;
    for (auto &job : jobs)
        results.push_back(job.get());
    for (const SweepResult &r : results)
        if (r.status != WBAN_OK)
            throw Failure{r.status, r.error};
    for (const SweepResult &r : results) {
        const std::string tag = level_tag(r.level);
        check(wban_report_write_json(r.report.get(), (dir / ("report_" + tag + ".json")).string().c_str()));
        check(wban_report_write_packets_csv(r.report.get(), (dir / ("packets_" + tag + ".csv")).string().c_str()));
        std::printf("power_dbm %g pdr %.6f\n", r.level, wban_report_pdr(r.report.get()));
    }
    log("wrote " + std::to_string(results.size()) + " sweep reports to " + dir.string());
    return ok;
}

int cmd_report(const std::vector<std::string> &inputs, bool csv, const std::string &out) {
    std::vector<const char *> paths;
    for (const std::string &p : inputs)
        paths.push_back(p.c_str());
    char *raw = nullptr;
    check(wban_compare_reports(paths.data(), paths.size(), csv ? 1 : 0, &raw));
    StringPtr text(raw);
    if (out.empty()) {
        std::fputs(text.get(), stdout);
        return ok;
    }
    std::FILE *f = std::fopen(out.c_str(), "wb");
    if (f == nullptr)
        throw Failure{WBAN_ERR_IO, "cannot open " + out + " for writing"};
    const std::size_t n = std::char_traits<char>::length(text.get());
    const bool written = std::fwrite(text.get(), 1, n, f) == n;
    if (std::fclose(f) != 0 || !written)
        throw Failure{WBAN_ERR_IO, "failed writing " + out};
    log("wrote " + out);
    return ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Body-area channel emulator and adaptive network simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", wban_version());

    Common common;
    auto add_common = [&](CLI::App *sub, bool config_required) {
        auto *opt = sub->add_option("--config,-c", common.config, "scenario JSON file");
        if (config_required)
            opt->required();
        sub->add_option("--set", common.sets, "override a config key: key=value (repeatable)");
        sub->add_option("--out,-o", common.out, "output directory");
        sub->add_option("--seed", common.seed, "RNG seed (overrides the config)");
    };

    auto *emulate = app.add_subcommand("emulate", "path loss from a BVH clip");
    add_common(emulate, true);

    std::string input;
    auto *analyze = app.add_subcommand("analyze", "channel stability of a trace or RSS CSV");
    analyze->add_option("input", input, "path-loss trace CSV or t_s,value CSV")->required();
    add_common(analyze, false);

    std::string policy;
    std::optional<double> power;
    std::string sweep;
    auto *simulate = app.add_subcommand("simulate", "packet-level network simulation");
    add_common(simulate, true);
    simulate->add_option("--policy", policy, "fixed, imu, emg or hr")
        ->check(CLI::IsMember({"fixed", "imu", "emg", "hr"}));
    simulate->add_option("--power", power, "transmit level for fixed/imu, dBm");
    simulate->add_option("--sweep", sweep, "powers=<dBm>,<dBm>,... one report per level");

    std::vector<std::string> reports;
    bool csv = false;
    std::string report_out;
    auto *report = app.add_subcommand("report", "compare simulation reports against the first");
    report->add_option("reports", reports, "report JSON files")->required()->expected(2, -1);
    report->add_flag("--csv", csv, "CSV instead of a text table");
    report->add_option("--out,-o", report_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return usage;
    }

    try {
        if (emulate->parsed())
            return cmd_emulate(common);
        if (analyze->parsed())
            return cmd_analyze(common, input);
        if (simulate->parsed())
            return cmd_simulate(common, policy, power, sweep);
        if (report->parsed())
            return cmd_report(reports, csv, report_out);
    } catch (const Failure &f) {
        log(std::string(wban_status_name(f.status)) + " error: " + f.message);
        return exit_code(f.status);
    } catch (const std::exception &e) {
        log(std::string("internal error: ") + e.what());
        return internal;
    }
    return usage;
}
