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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wban/signals.hpp"

namespace wban {

struct RadioCommand {
    enum class Kind { schedule_tx, set_power };
    Kind kind = Kind::schedule_tx;
    /// Decision time for set_power; transmission instant for schedule_tx.
    double time = 0.0;
    double power_dbm = 0.0;

    bool operator==(const RadioCommand &) const = default;
};

/// Command log line: `t_s,command,value`.
std::string commands_to_csv(std::span<const RadioCommand> commands);

/// alpha = (t_p - t2) / (t2 - t1). Error{calibration} unless t2 > t1 and
/// t_p >= t2.
double calibrate_alpha(double t_imu_1, double t_imu_2, double t_rss_peak);

/// t_i + alpha * (t_i - t_prev).
double next_tx_time(double t_imu_i, double t_imu_prev, double alpha);

/// True when the last `min_peaks` peak times have every consecutive interval
/// within +-tolerance of their median.
bool is_periodic(std::span<const double> peak_times, std::size_t min_peaks = 3, double tolerance = 0.2);

// ---------------------------------------------------------------- states

enum class NetworkState { static_state, imu_calibration, imu_scheduled, emg_tpc, hr_tpc };

enum class NetEvent {
    imu_periodicity_detected,
    imu_periodicity_lost,
    calibration_done,
    /// One lost packet; K in a row while scheduled triggers re-calibration.
    multi_packet_drop,
    packet_delivered,
    emg_active,
    emg_idle,
    hr_above,
    hr_below,
};

const char *to_string(NetworkState state) noexcept;
const char *to_string(NetEvent event) noexcept;
/// Error{lookup} naming the offending string.
NetEvent parse_event(std::string_view name);

/// Network mode selection. The IMU branch (static, calibrating, scheduled)
/// keeps evolving underneath a TPC episode and is resumed when the episode
/// ends. EMG outranks HR.
class NetworkStateMachine {
  public:
    explicit NetworkStateMachine(std::size_t drop_threshold = 3);

    NetworkState handle(NetEvent event);
    NetworkState handle(std::string_view event) { return handle(parse_event(event)); }

    NetworkState state() const;
    NetworkState base_state() const { return base_; }
    std::size_t consecutive_drops() const { return drops_; }

  private:
    std::size_t drop_threshold_;
    NetworkState base_ = NetworkState::static_state;
    bool emg_ = false;
    bool hr_ = false;
    std::size_t drops_ = 0;
};

// ---------------------------------------------------------------- IMU

/// Streaming coherent scheduler. Watches IMU peaks for periodic motion,
/// calibrates alpha from two IMU peaks and the next RSS peak, then emits one
/// transmit instant per IMU peak. A schedule that is already in the past when
/// its peak is confirmed is pushed forward by whole strides.
class ImuScheduler {
  public:
    struct Config {
        std::size_t periodicity_min_peaks = 3;
        double periodicity_tolerance = 0.2;
        /// Periodicity is lost after this many median intervals without a peak.
        double loss_factor = 2.0;
        /// RSS-peak search window after the second IMU peak, in IMU periods.
        double calibration_timeout = 2.0;
        /// Trailing mean applied to RSS before peak picking, seconds.
        double rss_smoothing = 0.05;
        /// RSS-peak separation as a fraction of the IMU period.
        double rss_separation_fraction = 0.4;
        StreamingPeakDetector::Config imu_detector;
    };

    enum class Phase { waiting, calibrating, scheduled };

    struct Output {
        std::vector<RadioCommand> commands;
        std::vector<NetEvent> events;
    };

    ImuScheduler() : ImuScheduler(Config{}) {}
    explicit ImuScheduler(Config cfg);

    Output push_imu(double t, double accel);
    /// Only legal while calibrating; Error{calibration} otherwise.
    void push_rss(double t, double rss_dbm);
    bool needs_rss() const { return phase_ == Phase::calibrating; }

    /// Drops the current alpha and calibrates again (e.g. after packet loss).
    void recalibrate();

    Phase phase() const { return phase_; }
    std::optional<double> alpha() const { return alpha_; }
    const std::vector<double> &imu_peaks() const { return detector_.peaks(); }
    std::size_t calibration_attempts() const { return attempts_; }
    std::size_t rss_reads() const { return rss_reads_; }

  private:
    void start_calibration();
    std::optional<RadioCommand> schedule_from(double t_i, double t_prev, double now);
    double median_period() const;

    Config cfg_;
    StreamingPeakDetector detector_;
    Phase phase_ = Phase::waiting;
    std::vector<double> recent_; // IMU peaks since periodicity tracking restarted
    std::optional<double> alpha_;
    // calibration state
    std::vector<double> cal_imu_;
    std::optional<StreamingPeakDetector> rss_detector_;
    std::vector<std::pair<double, double>> rss_window_;
    double rss_sum_ = 0.0;
    double period_ = 0.0;
    std::size_t attempts_ = 0;
    std::size_t rss_reads_ = 0;
    std::optional<double> last_tx_;
};

// ---------------------------------------------------------------- TPC

/// Per-window EMG power control: p_high when the window excursion strictly
/// exceeds the threshold, else p_low.
class EmgTpc {
  public:
    struct Config {
        double threshold_uv = 610.0;
        double p_low = -4.0;
        double p_high = 4.0;
        std::size_t window_samples = 100;
        double sample_interval = 1e-3;
        /// Emit only when the level changes.
        bool deduplicate = true;
    };

    EmgTpc() : EmgTpc(Config{}) {}
    explicit EmgTpc(Config cfg);

    /// Sample k is at time k * sample_interval.
    std::optional<RadioCommand> push(double v);
    double power() const { return power_; }

  private:
    Config cfg_;
    EmgWindowTracker tracker_;
    std::size_t index_ = 0;
    double power_;
    bool emitted_ = false;
};

/// Heart-rate power control, re-evaluated on a fixed cadence.
class HrTpc {
  public:
    struct Config {
        double threshold_bpm = 92.0;
        double p_low = -8.0;
        double p_high = 4.0;
        double cadence = 3.0;
        bool deduplicate = true;
    };

    HrTpc() : HrTpc(Config{}) {}
    explicit HrTpc(Config cfg);

    std::optional<RadioCommand> push(double t, const HeartRateSample &hr);
    double power() const { return power_; }

  private:
    Config cfg_;
    double next_update_;
    double power_;
    bool emitted_ = false;
};

} // namespace wban
