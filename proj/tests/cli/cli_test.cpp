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


// Runs the wbanemu binary and checks exit codes and outputs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#ifndef WBAN_CLI
#error "WBAN_CLI must name the wbanemu executable"
#endif
#ifndef WBAN_TESTDATA
#error "WBAN_TESTDATA must point at the generated test data directory"
#endif

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("wban-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    fs::path operator/(const std::string &n) const { return dir / n; }
};

int run(const std::string &args, const fs::path &log) {
    const std::string cmd = std::string("'") + WBAN_CLI + "' " + args + " >'" + log.string() + "' 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kWalk = std::string(WBAN_TESTDATA) + "/walking.json";

} // namespace

TEST_CASE("usage errors exit with 2") {
    Scratch s;
    CHECK(run("", s / "log") == 2);
    CHECK(run("teleport", s / "log") == 2);
    CHECK(run("emulate", s / "log") == 2);
    CHECK(run("simulate -c '" + kWalk + "' --policy psychic", s / "log") == 2);
    CHECK(run("report only_one.json", s / "log") == 2);
    CHECK(run("--help", s / "log") == 0);
    CHECK(slurp(s / "log").find("emulate") != std::string::npos);
}

TEST_CASE("error classes map to distinct exit codes") {
    Scratch s;
    CHECK(run("emulate -c '" + (s / "missing.json").string() + "'", s / "log") == 3);
    CHECK(slurp(s / "log").find("missing.json") != std::string::npos);

    std::ofstream(s / "bad.csv") << "frame,time_s,pl_db,d_fs_m,d_bs_m,n_db\n0,0,x,0,0,0\n";
    CHECK(run("analyze '" + (s / "bad.csv").string() + "'", s / "log") == 4);
    CHECK(slurp(s / "log").find("line 2") != std::string::npos);

    CHECK(run("emulate -c '" + kWalk + "' --set 'link.tx.joint=\"Spine1\"' --out '" + (s / "g").string() + "'",
              s / "log") == 5);

    CHECK(run("emulate -c '" + kWalk + "' --set 'link.colour=1'", s / "log") == 6);
    CHECK(run("simulate -c '" + kWalk + "' --power -3 --out '" + (s / "c").string() + "'", s / "log") == 6);

    std::ofstream(s / "short.csv") << "t_s,value\n0,1\n0.01,2\n0.02,1\n";
    CHECK(run("analyze '" + (s / "short.csv").string() + "'", s / "log") == 7);
}

TEST_CASE("simulate sweep and report") {
    Scratch s;
    const std::string out = (s / "sweep").string();
    REQUIRE(run("simulate -c '" + kWalk + "' --set duration_s=10 --sweep powers=-8,-4,0 --out '" + out + "'",
                s / "log") == 0);
    for (const char *lvl : {"-8", "-4", "0"}) {
        CHECK(fs::exists(fs::path(out) / ("report_p" + std::string(lvl) + ".json")));
        CHECK(fs::exists(fs::path(out) / ("packets_p" + std::string(lvl) + ".csv")));
    }
    const std::string a = (fs::path(out) / "report_p0.json").string();
    const std::string b = (fs::path(out) / "report_p-8.json").string();
    CHECK(run("report '" + a + "' '" + b + "'", s / "table") == 0);
    CHECK(slurp(s / "table").find("report_p-8") != std::string::npos);
    CHECK(run("report --csv '" + a + "' '" + b + "' --out '" + (s / "cmp.csv").string() + "'", s / "log") == 0);
    CHECK(slurp(s / "cmp.csv").rfind("baseline,candidate,", 0) == 0);

    REQUIRE(run("simulate -c '" + kWalk + "' --set duration_s=10 --set radio.sensitivity_dbm=-90 --out '" +
                    (s / "other").string() + "'",
                s / "log") == 0);
    CHECK(run("report '" + a + "' '" + (s / "other" / "report.json").string() + "'", s / "log") == 8);
    CHECK(run("report '" + a + "' '" + (s / "absent.json").string() + "'", s / "log") == 3);
}

TEST_CASE("emulate then analyze") {
    Scratch s;
    REQUIRE(run("emulate -c '" + kWalk + "' --out '" + (s / "e").string() + "'", s / "log") == 0);
    for (const char *f : {"trace.csv", "trace.json", "imu.csv"})
        CHECK(fs::exists(s / "e" / f));
    CHECK(slurp(s / "log").find("frames 7200") != std::string::npos);
    REQUIRE(run("analyze '" + (s / "e" / "trace.csv").string() + "' --out '" + (s / "a").string() + "'",
                s / "log") == 0);
    for (const char *f : {"analysis.json", "autocorr.csv", "cvf_cdf.csv"})
        CHECK(fs::exists(s / "a" / f));
    CHECK(run("analyze '" + (s / "e" / "trace.csv").string() + "'", s / "stdout") == 0);
    CHECK(slurp(s / "stdout").find("\"coherence_time_s\"") != std::string::npos);
}
