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

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wban {

enum class SignalKind {
    emg,   ///< microvolts
    ecg,   ///< millivolts
    accel, ///< m/s^2
    rss,   ///< dBm
};

const char *to_string(SignalKind kind) noexcept;

/// Uniformly sampled series; sample k is at time k * sample_interval.
struct BiosignalTrace {
    SignalKind kind = SignalKind::emg;
    double sample_interval = 1e-3;
    std::vector<double> samples;

    double time_at(std::size_t k) const { return static_cast<double>(k) * sample_interval; }
    double duration() const { return static_cast<double>(samples.size()) * sample_interval; }
};

/// CSV with header `t_s,value`. Uniform spacing is required on read.
void write_signal_csv(const BiosignalTrace &trace, const std::filesystem::path &path);
BiosignalTrace read_signal_csv(const std::filesystem::path &path, SignalKind kind);

// ---------------------------------------------------------------- peaks

struct PeakList {
    std::vector<double> times;
};

/// Offline peak picking: local maxima whose topographic prominence reaches
/// `min_prominence`, kept greedily from the tallest down so that no two kept
/// peaks are closer than `min_separation` seconds.
PeakList detect_peaks(const BiosignalTrace &trace, double min_separation, double min_prominence);

/// Topographic prominence of the local maximum at `index`.
double peak_prominence(std::span<const double> x, std::size_t index);

/// Causal counterpart of detect_peaks. A candidate is confirmed once
/// `min_separation` has elapsed after it without a taller sample, and its
/// prominence against the lowest samples on either side reaches the limit.
/// Fixed limits can be given; otherwise they adapt: separation is 0.4x the
/// running median inter-peak interval (0.3 s until two peaks are seen), and
/// prominence is 0.5x a running standard deviation of the input.
class StreamingPeakDetector {
  public:
    struct Config {
        std::optional<double> min_separation;
        std::optional<double> min_prominence;
        double bootstrap_separation = 0.3;
        double separation_fraction = 0.4;
        double prominence_fraction = 0.5;
        /// Time constant of the running mean/variance used for prominence.
        double std_time_constant = 4.0;
        std::size_t median_history = 8;
    };

    StreamingPeakDetector() : StreamingPeakDetector(Config{}) {}
    explicit StreamingPeakDetector(Config cfg);

    /// Feeds one sample; returns the time of a newly confirmed peak, if any.
    std::optional<double> push(double t, double value);

    double current_min_separation() const;
    double current_min_prominence() const;
    const std::vector<double> &peaks() const { return peaks_; }

  private:
    struct Sample {
        double t;
        double v;
    };
    void rebuild_candidate();

    Config cfg_;
    std::deque<Sample> window_; // samples after the last decision point
    std::optional<Sample> candidate_;
    double left_min_ = 0.0;     // lowest sample between last decision and candidate
    bool has_left_min_ = false;
    std::vector<double> peaks_;
    std::vector<double> intervals_;
    double mean_ = 0.0;
    double var_ = 0.0;
    double last_t_ = 0.0;
    bool started_ = false;
};

// ---------------------------------------------------------------- EMG

struct Excursion {
    double v_max = 0.0;
    double v_min = 0.0;
    double span() const { return v_max - v_min; }
};

/// Exact extremes of a nonempty window.
Excursion emg_window_excursion(std::span<const double> window);

/// Per-window extreme tracker; the extremes restart with every window.
class EmgWindowTracker {
  public:
    explicit EmgWindowTracker(std::size_t window_samples = 100);

    /// Returns the finished window's excursion when `v` closes a window.
    std::optional<Excursion> push(double v);

    std::size_t window_samples() const { return window_; }

  private:
    std::size_t window_;
    std::size_t count_ = 0;
    Excursion current_;
};

// ---------------------------------------------------------------- ECG

/// Detection threshold between the running extremes: min + (max - min)/4.
double ecg_threshold(double v_min, double v_max);

struct HeartRateSample {
    bool valid = false;
    double bpm = 0.0;
};

/// Streaming heart-rate extraction from ECG. Tracks the signal extremes (with
/// slow decay toward the signal), fires on upward crossings of ecg_threshold
/// and reports 60 / (time since previous crossing). The last rate is held
/// between beats.
class HeartRateEstimator {
  public:
    struct Config {
        double sample_interval = 1e-3;
        /// Extreme-tracker decay time constant, seconds.
        double decay_time_constant = 5.0;
        /// Crossings closer than this to the previous beat are ignored.
        double refractory = 0.2;
    };

    HeartRateEstimator() : HeartRateEstimator(Config{}) {}
    explicit HeartRateEstimator(Config cfg);

    HeartRateSample push(double v);

    double threshold() const { return ecg_threshold(v_min_, v_max_); }
    double v_max() const { return v_max_; }
    double v_min() const { return v_min_; }
    const std::vector<double> &beat_times() const { return beats_; }

  private:
    Config cfg_;
    std::size_t index_ = 0;
    double v_max_ = 0.0;
    double v_min_ = 0.0;
    double prev_ = 0.0;
    bool primed_ = false;
    std::vector<double> beats_;
    HeartRateSample current_;
};

/// Runs HeartRateEstimator over a whole trace (one output per sample).
std::vector<HeartRateSample> calc_hr(const BiosignalTrace &ecg,
                                     HeartRateEstimator::Config cfg = {});

// ---------------------------------------------------------------- synthesis

struct Interval {
    double start = 0.0;
    double end = 0.0;
    bool contains(double t) const { return t >= start && t < end; }
};

struct EmgSynthConfig {
    double rest_amplitude_uv = 50.0;
    double burst_amplitude_uv = 800.0;
    std::vector<Interval> bursts;
    double duration = 20.0;
    double sample_interval = 1e-3;
    std::uint64_t seed = 1;
};

/// Zero-mean uniform noise, |v| <= amplitude, with the burst amplitude
/// inside the burst intervals. Throws Error{config} on overlapping bursts.
BiosignalTrace synth_emg(const EmgSynthConfig &cfg);

struct HrStep {
    double start = 0.0;
    double bpm = 60.0;
};

struct EcgSynthConfig {
    /// Piecewise-constant rate; first step should start at 0.
    std::vector<HrStep> profile = {{0.0, 60.0}};
    double duration = 20.0;
    double sample_interval = 1e-3;
    double r_amplitude_mv = 1.0;
    double r_half_width = 0.01;
    double first_beat = 0.2;
};

/// Triangular R spikes on a flat baseline whose spacing follows the profile.
/// Throws Error{config} for rates outside [30, 220] bpm.
BiosignalTrace synth_ecg(const EcgSynthConfig &cfg);

/// Beat instants implied by the profile (the R apex times of synth_ecg).
std::vector<double> ecg_beat_times(const EcgSynthConfig &cfg);

} // namespace wban
