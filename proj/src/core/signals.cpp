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

#include "wban/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "text_io.hpp"
#include "wban/error.hpp"

namespace wban {

const char *to_string(SignalKind kind) noexcept {
    switch (kind) {
    case SignalKind::emg:
        return "emg";
    case SignalKind::ecg:
        return "ecg";
    case SignalKind::accel:
        return "accel";
    case SignalKind::rss:
        return "rss";
    }
    return "unknown";
}

void write_signal_csv(const BiosignalTrace &trace, const std::filesystem::path &path) {
    std::string out = "t_s,value\n";
    out.reserve(trace.samples.size() * 24);
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        out += detail::fixed(trace.time_at(k));
        out += ',';
        out += detail::fixed(trace.samples[k]);
        out += '\n';
    }
    detail::write_text_file(path, out);
}

BiosignalTrace read_signal_csv(const std::filesystem::path &path, SignalKind kind) {
    const detail::CsvTable table = detail::parse_csv(detail::read_text_file(path));
    if (table.header.size() != 2 || table.header[0] != "t_s" || table.header[1] != "value")
        throw ParseError(1, "expected header 't_s,value'");
    if (table.rows.size() < 2)
        throw Error(ErrorKind::insufficient_data, "signal CSV needs at least two rows");
    BiosignalTrace trace{kind, 0.0, {}};
    std::vector<double> times;
    for (const detail::CsvRow &row : table.rows) {
        times.push_back(detail::parse_number(row.fields[0], row.line));
        trace.samples.push_back(detail::parse_number(row.fields[1], row.line));
    }
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0))
        throw Error(ErrorKind::structural, "signal timestamps must increase");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (std::abs((times[k] - times[k - 1]) - dt) > 1e-6 + 1e-3 * dt)
            throw ParseError(table.rows[k].line, "non-uniform sample spacing");
    }
    trace.sample_interval = detail::snap_interval(dt);
    return trace;
}

// ---------------------------------------------------------------- peaks

double peak_prominence(std::span<const double> x, std::size_t index) {
    const double h = x[index];
    double left_min = h;
    for (std::size_t k = index; k-- > 0;) {
        if (x[k] > h)
            break;
        left_min = std::min(left_min, x[k]);
    }
    double right_min = h;
    for (std::size_t k = index + 1; k < x.size(); ++k) {
        if (x[k] > h)
            break;
        right_min = std::min(right_min, x[k]);
    }
    return h - std::max(left_min, right_min);
}

PeakList detect_peaks(const BiosignalTrace &trace, double min_separation, double min_prominence) {
    if (!(min_separation > 0.0))
        throw Error(ErrorKind::domain, "minimum peak separation must be positive");
    const std::vector<double> &x = trace.samples;

    // Local maxima; a flat top counts once, at its first sample.
    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (!(x[i] > x[i - 1]))
            continue;
        std::size_t j = i;
        while (j + 1 < x.size() && x[j + 1] == x[i])
            ++j;
        if (j + 1 < x.size() && x[j + 1] < x[i] && peak_prominence(x, i) >= min_prominence)
            candidates.push_back(i);
        i = j;
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    const auto min_gap = static_cast<double>(min_separation) / trace.sample_interval;
    std::set<std::size_t> kept;
    for (std::size_t c : candidates) {
        auto hi = kept.lower_bound(c);
        if (hi != kept.end() && static_cast<double>(*hi - c) < min_gap - 1e-9)
            continue;
        if (hi != kept.begin() && static_cast<double>(c - *std::prev(hi)) < min_gap - 1e-9)
            continue;
        kept.insert(c);
    }
    PeakList out;
    for (std::size_t k : kept)
        out.times.push_back(trace.time_at(k));
    return out;
}

StreamingPeakDetector::StreamingPeakDetector(Config cfg) : cfg_(cfg) {
    if (cfg_.min_separation && !(*cfg_.min_separation > 0.0))
        throw Error(ErrorKind::domain, "minimum peak separation must be positive");
}

double StreamingPeakDetector::current_min_separation() const {
    if (cfg_.min_separation)
        return *cfg_.min_separation;
    if (intervals_.empty())
        return cfg_.bootstrap_separation;
    const std::size_t n = std::min(intervals_.size(), cfg_.median_history);
    std::vector<double> recent(intervals_.end() - static_cast<std::ptrdiff_t>(n), intervals_.end());
    std::nth_element(recent.begin(), recent.begin() + static_cast<std::ptrdiff_t>(n / 2), recent.end());
    double median = recent[n / 2];
    if (n % 2 == 0) {
        const double lower = *std::max_element(recent.begin(), recent.begin() + static_cast<std::ptrdiff_t>(n / 2));
        median = 0.5 * (median + lower);
    }
    return cfg_.separation_fraction * median;
}

double StreamingPeakDetector::current_min_prominence() const {
    if (cfg_.min_prominence)
        return *cfg_.min_prominence;
    return cfg_.prominence_fraction * std::sqrt(var_);
}

void StreamingPeakDetector::rebuild_candidate() {
    // Everything up to and including the old candidate has been decided.
    while (!window_.empty() && window_.front().t <= candidate_->t)
        window_.pop_front();
    candidate_.reset();
    has_left_min_ = false;
    // The decided candidate was the window maximum, so the left base of any
    // new candidate lies between them.
    double running_min = std::numeric_limits<double>::infinity();
    for (const Sample &s : window_) {
        if (!candidate_ || s.v > candidate_->v) {
            candidate_ = s;
            left_min_ = running_min;
            has_left_min_ = std::isfinite(running_min);
        }
        running_min = std::min(running_min, s.v);
    }
}

std::optional<double> StreamingPeakDetector::push(double t, double value) {
    if (!started_) {
        mean_ = value;
        var_ = 0.0;
        started_ = true;
    } else {
        const double dt = std::max(t - last_t_, 0.0);
        const double a = 1.0 - std::exp(-dt / cfg_.std_time_constant);
        const double d = value - mean_;
        mean_ += a * d;
        var_ = (1.0 - a) * (var_ + a * d * d);
    }
    last_t_ = t;

    if (!candidate_ || value > candidate_->v) {
        double running_min = std::numeric_limits<double>::infinity();
        for (const Sample &s : window_)
            running_min = std::min(running_min, s.v);
        candidate_ = Sample{t, value};
        left_min_ = running_min;
        has_left_min_ = std::isfinite(running_min);
    }
    window_.push_back({t, value});

    std::optional<double> emitted;
    while (candidate_ && t - candidate_->t >= current_min_separation() - 1e-12) {
        double right_min = std::numeric_limits<double>::infinity();
        for (const Sample &s : window_)
            if (s.t > candidate_->t)
                right_min = std::min(right_min, s.v);
        const bool descended = right_min < candidate_->v;
        const bool ascended = has_left_min_ && left_min_ < candidate_->v;
        const double base = std::max(has_left_min_ ? left_min_ : candidate_->v, right_min);
        const bool separated = peaks_.empty() || candidate_->t - peaks_.back() >= current_min_separation() - 1e-12;
        if (descended && ascended && candidate_->v - base >= current_min_prominence() && separated) {
            if (!peaks_.empty())
                intervals_.push_back(candidate_->t - peaks_.back());
            peaks_.push_back(candidate_->t);
            emitted = candidate_->t;
        }
        rebuild_candidate();
    }
    return emitted;
}

// ---------------------------------------------------------------- EMG

Excursion emg_window_excursion(std::span<const double> window) {
    if (window.empty())
        throw Error(ErrorKind::insufficient_data, "empty EMG window");
    auto [lo, hi] = std::minmax_element(window.begin(), window.end());
    return {*hi, *lo};
}

EmgWindowTracker::EmgWindowTracker(std::size_t window_samples) : window_(window_samples) {
    if (window_ == 0)
        throw Error(ErrorKind::config, "EMG window must hold at least one sample");
}

std::optional<Excursion> EmgWindowTracker::push(double v) {
    if (count_ == 0) {
        current_ = {v, v};
    } else {
        current_.v_max = std::max(current_.v_max, v);
        current_.v_min = std::min(current_.v_min, v);
    }
    if (++count_ == window_) {
        count_ = 0;
        return current_;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- ECG

double ecg_threshold(double v_min, double v_max) { return v_min + 0.25 * (v_max - v_min); }

HeartRateEstimator::HeartRateEstimator(Config cfg) : cfg_(cfg) {
    if (!(cfg_.sample_interval > 0.0))
        throw Error(ErrorKind::config, "ECG sample interval must be positive");
}

HeartRateSample HeartRateEstimator::push(double v) {
    const double t = static_cast<double>(index_++) * cfg_.sample_interval;
    if (!primed_) {
        v_max_ = v_min_ = prev_ = v;
        primed_ = true;
        return current_;
    }
    const double a = cfg_.decay_time_constant > 0.0 ? cfg_.sample_interval / cfg_.decay_time_constant : 0.0;
    v_max_ = std::max(v, v_max_ - (v_max_ - v) * a);
    v_min_ = std::min(v, v_min_ + (v - v_min_) * a);
    const double thr = threshold();
    if (v_max_ > v_min_ && prev_ < thr && v >= thr) {
        if (beats_.empty() || t - beats_.back() >= cfg_.refractory) {
            if (!beats_.empty())
                current_ = {true, 60.0 / (t - beats_.back())};
            beats_.push_back(t);
        }
    }
    prev_ = v;
    return current_;
}

std::vector<HeartRateSample> calc_hr(const BiosignalTrace &ecg, HeartRateEstimator::Config cfg) {
    cfg.sample_interval = ecg.sample_interval;
    HeartRateEstimator est(cfg);
    std::vector<HeartRateSample> out;
    out.reserve(ecg.samples.size());
    for (double v : ecg.samples)
        out.push_back(est.push(v));
    return out;
}

// ---------------------------------------------------------------- synthesis

BiosignalTrace synth_emg(const EmgSynthConfig &cfg) {
    if (cfg.rest_amplitude_uv < 0.0 || cfg.burst_amplitude_uv < 0.0)
        throw Error(ErrorKind::config, "EMG amplitudes must be nonnegative");
    if (!(cfg.sample_interval > 0.0) || cfg.duration < 0.0)
        throw Error(ErrorKind::config, "invalid EMG sampling parameters");
    std::vector<Interval> bursts = cfg.bursts;
    std::sort(bursts.begin(), bursts.end(), [](const Interval &a, const Interval &b) { return a.start < b.start; });
    for (std::size_t i = 0; i < bursts.size(); ++i) {
        if (!(bursts[i].end > bursts[i].start))
            throw Error(ErrorKind::config, "burst interval must have end > start");
        if (i > 0 && bursts[i].start < bursts[i - 1].end)
            throw Error(ErrorKind::config, "burst intervals overlap");
    }

    const auto n = static_cast<std::size_t>(std::llround(cfg.duration / cfg.sample_interval));
    BiosignalTrace out{SignalKind::emg, cfg.sample_interval, std::vector<double>(n)};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t b = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = out.time_at(k);
        while (b < bursts.size() && t >= bursts[b].end)
            ++b;
        const bool in_burst = b < bursts.size() && bursts[b].contains(t);
        out.samples[k] = unit(rng) * (in_burst ? cfg.burst_amplitude_uv : cfg.rest_amplitude_uv);
    }
    return out;
}

std::vector<double> ecg_beat_times(const EcgSynthConfig &cfg) {
    if (cfg.profile.empty())
        throw Error(ErrorKind::config, "heart-rate profile is empty");
    for (const HrStep &s : cfg.profile)
        if (!(s.bpm >= 30.0 && s.bpm <= 220.0))
            throw Error(ErrorKind::config, "heart rate " + detail::shortest(s.bpm) + " bpm outside [30, 220]");
    auto rate_at = [&](double t) {
        double bpm = cfg.profile.front().bpm;
        for (const HrStep &s : cfg.profile)
            if (s.start <= t)
                bpm = s.bpm;
        return bpm;
    };
    std::vector<double> beats;
    for (double t = cfg.first_beat; t < cfg.duration; t += 60.0 / rate_at(t))
        beats.push_back(t);
    return beats;
}

BiosignalTrace synth_ecg(const EcgSynthConfig &cfg) {
    if (!(cfg.sample_interval > 0.0) || !(cfg.r_half_width > 0.0))
        throw Error(ErrorKind::config, "invalid ECG sampling parameters");
    const std::vector<double> beats = ecg_beat_times(cfg);
    const auto n = static_cast<std::size_t>(std::llround(cfg.duration / cfg.sample_interval));
    BiosignalTrace out{SignalKind::ecg, cfg.sample_interval, std::vector<double>(n, 0.0)};
    for (double tb : beats) {
        const auto lo = static_cast<std::ptrdiff_t>(std::floor((tb - cfg.r_half_width) / cfg.sample_interval));
        const auto hi = static_cast<std::ptrdiff_t>(std::ceil((tb + cfg.r_half_width) / cfg.sample_interval));
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(lo, 0); k <= hi && k < static_cast<std::ptrdiff_t>(n); ++k) {
            const double t = out.time_at(static_cast<std::size_t>(k));
            const double w = 1.0 - std::abs(t - tb) / cfg.r_half_width;
            if (w > 0.0)
                out.samples[static_cast<std::size_t>(k)] += cfg.r_amplitude_mv * w;
        }
    }
    return out;
}

} // namespace wban
