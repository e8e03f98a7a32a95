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


#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "test_util.hpp"
#include "wban/error.hpp"
#include "wban/signals.hpp"

using namespace wban;
using doctest::Approx;

namespace {

// All-pairs reference for detect_peaks on tie-free data.
std::vector<std::size_t> brute_peaks(const std::vector<double> &x, std::size_t min_gap, double min_prom) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (!(x[i] > x[i - 1] && x[i] > x[i + 1]))
            continue;
        double lmin = x[i];
        for (std::size_t k = i; k-- > 0 && x[k] <= x[i];)
            lmin = std::min(lmin, x[k]);
        double rmin = x[i];
        for (std::size_t k = i + 1; k < x.size() && x[k] <= x[i]; ++k)
            rmin = std::min(rmin, x[k]);
        if (x[i] - std::max(lmin, rmin) >= min_prom)
            cand.push_back(i);
    }
    std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t c : cand) {
        bool ok = true;
        for (std::size_t k : kept)
            ok = ok && (c > k ? c - k : k - c) >= min_gap;
        if (ok)
            kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

BiosignalTrace sampled(double dt, std::size_t n, auto f) {
    BiosignalTrace t;
    t.sample_interval = dt;
    for (std::size_t k = 0; k < n; ++k)
        t.samples.push_back(f(static_cast<double>(k) * dt));
    return t;
}

} // namespace

TEST_CASE("offline peaks match the brute-force reference") {
    test::Gen g(21);
    for (int trial = 0; trial < 25; ++trial) {
        BiosignalTrace t;
        t.sample_interval = 0.01;
        double walk = 0.0;
        for (int k = 0; k < 400; ++k) {
            walk += g.normal(0, 1);
            t.samples.push_back(walk + 3.0 * std::sin(k * 0.05));
        }
        const auto gap = static_cast<std::size_t>(g.integer(1, 40));
        const double prom = g.uniform(0.0, 4.0);
        const PeakList got = detect_peaks(t, 0.01 * static_cast<double>(gap), prom);
        const std::vector<std::size_t> want = brute_peaks(t.samples, gap, prom);
        REQUIRE(got.times.size() == want.size());
        for (std::size_t k = 0; k < want.size(); ++k)
            CHECK(got.times[k] == Approx(0.01 * static_cast<double>(want[k])));
    }
}

TEST_CASE("peak prominence") {
    const std::vector<double> x = {0, 3, 1, 5, 2, 4, 0};
    CHECK(peak_prominence(x, 1) == 2.0);
    CHECK(peak_prominence(x, 3) == 5.0);
    CHECK(peak_prominence(x, 5) == 2.0);
    CHECK_THROWS_AS(detect_peaks(BiosignalTrace{}, 0.0, 1.0), Error);
}

TEST_CASE("streaming detector on a periodic signal") {
    const double dt = 0.01;
    const BiosignalTrace s = sampled(dt, 1000, [](double t) { return std::sin(2.0 * std::numbers::pi * t); });
    StreamingPeakDetector det;
    std::vector<std::pair<double, double>> confirmed; // (peak time, confirmation time)
    for (std::size_t k = 0; k < s.samples.size(); ++k)
        if (auto p = det.push(s.time_at(k), s.samples[k]))
            confirmed.emplace_back(*p, s.time_at(k));
    REQUIRE(confirmed.size() >= 8);
    for (std::size_t k = 0; k < confirmed.size(); ++k) {
        CHECK(std::abs(confirmed[k].first - (0.25 + static_cast<double>(k))) <= dt + 1e-9);
        CHECK(confirmed[k].second > confirmed[k].first);
    }
    // Once the interval is known the separation adapts to 0.4 of it.
    CHECK(det.current_min_separation() == Approx(0.4).epsilon(0.03));
    // Confirmation delay follows the adaptive separation.
    const auto &last = confirmed.back();
    CHECK(last.second - last.first == Approx(0.4).epsilon(0.05));
}

TEST_CASE("streaming detector agrees with offline picking on smooth data") {
    const double dt = 1.0 / 120.0;
    const BiosignalTrace s = sampled(dt, 120 * 30, [](double t) {
        return std::sin(2.0 * std::numbers::pi * t / 1.1) + 0.3 * std::sin(2.0 * std::numbers::pi * t / 0.55 + 1.0);
    });
    StreamingPeakDetector::Config cfg;
    cfg.min_separation = 0.5;
    cfg.min_prominence = 0.5;
    StreamingPeakDetector det(cfg);
    for (std::size_t k = 0; k < s.samples.size(); ++k)
        det.push(s.time_at(k), s.samples[k]);
    const PeakList off = detect_peaks(s, 0.5, 0.5);
    // The stream cannot confirm the final peak.
    REQUIRE(det.peaks().size() + 1 >= off.times.size());
    REQUIRE(det.peaks().size() <= off.times.size());
    for (std::size_t k = 0; k < det.peaks().size(); ++k)
        CHECK(det.peaks()[k] == Approx(off.times[k]));
    CHECK_THROWS_AS(StreamingPeakDetector(StreamingPeakDetector::Config{.min_separation = -1.0}), Error);
}

TEST_CASE("EMG window tracker reports exact per-window extremes") {
    test::Gen g(4);
    std::vector<double> x(1000);
    for (double &v : x)
        v = g.uniform(-700, 700);
    EmgWindowTracker tr(100);
    std::size_t windows = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const auto e = tr.push(x[k]);
        if ((k + 1) % 100 == 0) {
            REQUIRE(e.has_value());
            const Excursion want = emg_window_excursion(std::span<const double>(x).subspan(k - 99, 100));
            CHECK(e->v_max == want.v_max);
            CHECK(e->v_min == want.v_min);
            CHECK(want.v_max == *std::max_element(x.begin() + static_cast<long>(k - 99), x.begin() + static_cast<long>(k + 1)));
            ++windows;
        } else {
            CHECK_FALSE(e.has_value());
        }
    }
    CHECK(windows == 10);
    CHECK_THROWS_AS(EmgWindowTracker(0), Error);
    CHECK_THROWS_AS(emg_window_excursion(std::span<const double>{}), Error);
}

TEST_CASE("ECG threshold") {
    CHECK(ecg_threshold(0.0, 1.0) == 0.25);
    CHECK(ecg_threshold(-1.0, 3.0) == 0.0);
}

TEST_CASE("heart rate from synthetic ECG") {
    EcgSynthConfig cfg;
    cfg.profile = {{0.0, 70.0}, {10.0, 110.0}};
    cfg.duration = 20.0;
    const BiosignalTrace ecg = synth_ecg(cfg);
    const auto hr = calc_hr(ecg);
    REQUIRE(hr.size() == ecg.samples.size());
    auto at = [&](double t) { return hr[static_cast<std::size_t>(t / ecg.sample_interval)]; };
    REQUIRE(at(5.0).valid);
    CHECK(at(5.0).bpm == Approx(70.0).epsilon(0.01));
    CHECK(at(19.0).bpm == Approx(110.0).epsilon(0.01));
    CHECK_FALSE(hr.front().valid);

    // Detected beats land on the synthesized apexes within a few samples.
    HeartRateEstimator est;
    for (double v : ecg.samples)
        est.push(v);
    const std::vector<double> truth = ecg_beat_times(cfg);
    std::size_t matched = 0;
    for (double b : est.beat_times())
        for (double t : truth)
            if (std::abs(b - t) < 0.011)
                ++matched;
    CHECK(matched + 1 >= est.beat_times().size());
}

TEST_CASE("ECG synthesis") {
    EcgSynthConfig cfg;
    cfg.profile = {{0.0, 60.0}};
    cfg.duration = 5.0;
    const std::vector<double> beats = ecg_beat_times(cfg);
    REQUIRE(beats.size() >= 4);
    CHECK(beats[0] == Approx(0.2));
    for (std::size_t k = 1; k < beats.size(); ++k)
        CHECK(beats[k] - beats[k - 1] == Approx(1.0));
    const BiosignalTrace ecg = synth_ecg(cfg);
    CHECK(ecg.samples.size() == 5000);
    CHECK(*std::max_element(ecg.samples.begin(), ecg.samples.end()) == Approx(1.0));
    cfg.profile = {{0.0, 300.0}};
    CHECK_THROWS_AS(synth_ecg(cfg), Error);
}

TEST_CASE("EMG synthesis bounds and determinism") {
    EmgSynthConfig cfg;
    cfg.duration = 4.0;
    cfg.bursts = {{1.0, 2.0}};
    cfg.seed = 3;
    const BiosignalTrace a = synth_emg(cfg);
    REQUIRE(a.samples.size() == 4000);
    double rest_max = 0.0;
    double burst_max = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        double &m = cfg.bursts[0].contains(a.time_at(k)) ? burst_max : rest_max;
        m = std::max(m, std::abs(a.samples[k]));
    }
    CHECK(rest_max <= 50.0);
    CHECK(burst_max <= 800.0);
    CHECK(burst_max > 700.0);
    CHECK(synth_emg(cfg).samples == a.samples);
    cfg.seed = 4;
    CHECK(synth_emg(cfg).samples != a.samples);
    cfg.bursts = {{1.0, 2.0}, {1.5, 3.0}};
    try {
        synth_emg(cfg);
        FAIL("expected config error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::config);
    }
}

TEST_CASE("signal CSV round trip") {
    test::TempDir dir("sig");
    BiosignalTrace t;
    t.kind = SignalKind::emg;
    t.sample_interval = 1e-3;
    for (int k = 0; k < 500; ++k)
        t.samples.push_back(std::round(std::sin(k * 0.3) * 1e6) / 1e6);
    write_signal_csv(t, dir / "emg.csv");
    const BiosignalTrace back = read_signal_csv(dir / "emg.csv", SignalKind::emg);
    CHECK(back.sample_interval == 1e-3);
    CHECK(back.samples == t.samples);

    std::ofstream(dir / "bad.csv") << "t_s,value\n0,1\n0.001,x\n";
    try {
        read_signal_csv(dir / "bad.csv", SignalKind::emg);
        FAIL("expected parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 3);
    }
    std::ofstream(dir / "uneven.csv") << "t_s,value\n0,1\n0.001,2\n0.005,3\n";
    CHECK_THROWS_AS(read_signal_csv(dir / "uneven.csv", SignalKind::emg), Error);
    try {
        read_signal_csv(dir / "missing.csv", SignalKind::emg);
        FAIL("expected io error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::io);
    }
}
