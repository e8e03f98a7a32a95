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


#include "wban/adaptive.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "text_io.hpp"
#include "wban/error.hpp"

namespace wban {

namespace {

constexpr double kTimeEps = 1e-9;

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

constexpr std::array<std::pair<NetEvent, const char *>, 9> kEventNames{{
    {NetEvent::imu_periodicity_detected, "imu_periodicity_detected"},
    {NetEvent::imu_periodicity_lost, "imu_periodicity_lost"},
    {NetEvent::calibration_done, "calibration_done"},
    {NetEvent::multi_packet_drop, "multi_packet_drop"},
    {NetEvent::packet_delivered, "packet_delivered"},
    {NetEvent::emg_active, "emg_active"},
    {NetEvent::emg_idle, "emg_idle"},
    {NetEvent::hr_above, "hr_above"},
    {NetEvent::hr_below, "hr_below"},
}};

} // namespace

std::string commands_to_csv(std::span<const RadioCommand> commands) {
    std::string out = "t_s,command,value\n";
    for (const RadioCommand &c : commands) {
        out += detail::fixed(c.time);
        if (c.kind == RadioCommand::Kind::set_power)
            out += ",SET_POWER," + detail::fixed(c.power_dbm) + "\n";
        else
            out += ",SCHEDULE_TX,\n";
    }
    return out;
}

double calibrate_alpha(double t_imu_1, double t_imu_2, double t_rss_peak) {
    if (!(t_imu_2 > t_imu_1))
        throw Error(ErrorKind::calibration, "IMU peaks must be strictly increasing");
    if (t_rss_peak < t_imu_2)
        throw Error(ErrorKind::calibration, "RSS peak precedes the second IMU peak");
    return (t_rss_peak - t_imu_2) / (t_imu_2 - t_imu_1);
}

double next_tx_time(double t_imu_i, double t_imu_prev, double alpha) {
    return t_imu_i + alpha * (t_imu_i - t_imu_prev);
}

bool is_periodic(std::span<const double> peak_times, std::size_t min_peaks, double tolerance) {
    if (min_peaks < 3 || peak_times.size() < min_peaks)
        return false;
    const auto tail = peak_times.last(min_peaks);
    std::vector<double> intervals;
    for (std::size_t k = 1; k < tail.size(); ++k)
        intervals.push_back(tail[k] - tail[k - 1]);
    const double med = median_of(intervals);
    if (!(med > 0.0))
        return false;
    return std::all_of(intervals.begin(), intervals.end(),
                       [&](double d) { return std::abs(d - med) <= tolerance * med + kTimeEps; });
}

// ---------------------------------------------------------------- states

const char *to_string(NetworkState state) noexcept {
    switch (state) {
    case NetworkState::static_state: return "STATIC";
    case NetworkState::imu_calibration: return "IMU_CALIBRATION";
    case NetworkState::imu_scheduled: return "IMU_SCHEDULED";
    case NetworkState::emg_tpc: return "EMG_TPC";
    case NetworkState::hr_tpc: return "HR_TPC";
    }
    return "UNKNOWN";
}

const char *to_string(NetEvent event) noexcept {
    for (const auto &[e, name] : kEventNames)
        if (e == event)
            return name;
    return "unknown";
}

NetEvent parse_event(std::string_view name) {
    for (const auto &[e, n] : kEventNames)
        if (name == n)
            return e;
    throw Error(ErrorKind::lookup, "unknown network event '" + std::string(name) + "'");
}

NetworkStateMachine::NetworkStateMachine(std::size_t drop_threshold) : drop_threshold_(drop_threshold) {
    if (drop_threshold_ == 0)
        throw Error(ErrorKind::config, "packet-drop threshold must be at least 1");
}

NetworkState NetworkStateMachine::state() const {
    if (emg_)
        return NetworkState::emg_tpc;
    if (hr_)
        return NetworkState::hr_tpc;
    return base_;
}

NetworkState NetworkStateMachine::handle(NetEvent event) {
    switch (event) {
    case NetEvent::imu_periodicity_detected:
        if (base_ == NetworkState::static_state)
            base_ = NetworkState::imu_calibration;
        break;
    case NetEvent::imu_periodicity_lost:
        base_ = NetworkState::static_state;
        drops_ = 0;
        break;
    case NetEvent::calibration_done:
        if (base_ == NetworkState::imu_calibration)
            base_ = NetworkState::imu_scheduled;
        drops_ = 0;
        break;
    case NetEvent::multi_packet_drop:
        if (state() == NetworkState::imu_scheduled && ++drops_ >= drop_threshold_) {
            base_ = NetworkState::imu_calibration;
            drops_ = 0;
        }
        break;
    case NetEvent::packet_delivered: drops_ = 0; break;
    case NetEvent::emg_active: emg_ = true; break;
    case NetEvent::emg_idle: emg_ = false; break;
    case NetEvent::hr_above: hr_ = true; break;
    case NetEvent::hr_below: hr_ = false; break;
    }
    return state();
}

// ---------------------------------------------------------------- IMU

ImuScheduler::ImuScheduler(Config cfg) : cfg_(cfg), detector_(cfg.imu_detector) {
    if (cfg_.periodicity_min_peaks < 3)
        throw Error(ErrorKind::config, "periodicity needs at least three peaks");
    if (!(cfg_.periodicity_tolerance > 0.0) || !(cfg_.loss_factor > 1.0) || !(cfg_.calibration_timeout > 0.0))
        throw Error(ErrorKind::config, "invalid IMU scheduler limits");
}

double ImuScheduler::median_period() const {
    if (recent_.size() < 2)
        return 0.0;
    std::vector<double> intervals;
    const std::size_t first = recent_.size() > 9 ? recent_.size() - 9 : 0;
    for (std::size_t k = first + 1; k < recent_.size(); ++k)
        intervals.push_back(recent_[k] - recent_[k - 1]);
    return median_of(std::move(intervals));
}

void ImuScheduler::start_calibration() {
    phase_ = Phase::calibrating;
    alpha_.reset();
    cal_imu_.clear();
    period_ = median_period();
    StreamingPeakDetector::Config rc;
    rc.min_separation = cfg_.rss_separation_fraction * period_;
    rc.std_time_constant = period_;
    rss_detector_.emplace(rc);
    rss_window_.clear();
    rss_sum_ = 0.0;
    ++attempts_;
}

void ImuScheduler::recalibrate() {
    if (phase_ != Phase::waiting)
        start_calibration();
}

void ImuScheduler::push_rss(double t, double rss_dbm) {
    if (!needs_rss())
        throw Error(ErrorKind::calibration, "RSS observation outside calibration");
    ++rss_reads_;
    rss_window_.emplace_back(t, rss_dbm);
    rss_sum_ += rss_dbm;
    std::size_t drop = 0;
    while (drop < rss_window_.size() && rss_window_[drop].first <= t - cfg_.rss_smoothing + kTimeEps) {
        rss_sum_ -= rss_window_[drop].second;
        ++drop;
    }
    rss_window_.erase(rss_window_.begin(), rss_window_.begin() + static_cast<std::ptrdiff_t>(drop));
    // Center the trailing mean on its window to cancel the smoothing lag.
    const double t_mid = 0.5 * (rss_window_.front().first + t);
    rss_detector_->push(t_mid, rss_sum_ / static_cast<double>(rss_window_.size()));
}

std::optional<RadioCommand> ImuScheduler::schedule_from(double t_i, double t_prev, double now) {
    const double step = t_i - t_prev;
    double tx = next_tx_time(t_i, t_prev, *alpha_);
    while (tx <= now + kTimeEps)
        tx += step;
    if (last_tx_ && tx <= *last_tx_ + kTimeEps)
        return std::nullopt;
    last_tx_ = tx;
    return RadioCommand{RadioCommand::Kind::schedule_tx, tx, 0.0};
}

ImuScheduler::Output ImuScheduler::push_imu(double t, double accel) {
    Output out;
    if (const auto peak = detector_.push(t, accel)) {
        recent_.push_back(*peak);
        if (recent_.size() > 32)
            recent_.erase(recent_.begin());
        switch (phase_) {
        case Phase::waiting:
            if (is_periodic(recent_, cfg_.periodicity_min_peaks, cfg_.periodicity_tolerance)) {
                out.events.push_back(NetEvent::imu_periodicity_detected);
                start_calibration();
            }
            break;
        case Phase::calibrating: cal_imu_.push_back(*peak); break;
        case Phase::scheduled:
            if (recent_.size() >= 2)
                if (auto cmd = schedule_from(recent_.back(), recent_[recent_.size() - 2], t))
                    out.commands.push_back(*cmd);
            break;
        }
    }

    if (phase_ == Phase::calibrating && cal_imu_.size() >= 2) {
        const double t1 = cal_imu_[0];
        const double t2 = cal_imu_[1];
        const auto &rss_peaks = rss_detector_->peaks();
        const auto it = std::lower_bound(rss_peaks.begin(), rss_peaks.end(), t2);
        if (it != rss_peaks.end()) {
            alpha_ = calibrate_alpha(t1, t2, *it);
            phase_ = Phase::scheduled;
            rss_detector_.reset();
            rss_window_.clear();
            out.events.push_back(NetEvent::calibration_done);
            if (cal_imu_.size() >= 3)
                if (auto cmd = schedule_from(cal_imu_.back(), cal_imu_[cal_imu_.size() - 2], t))
                    out.commands.push_back(*cmd);
        } else if (t > t2 + (cfg_.calibration_timeout + cfg_.rss_separation_fraction) * (t2 - t1) + cfg_.rss_smoothing) {
            // No RSS peak in time: retry with the next pair of IMU peaks.
            start_calibration();
        }
    }

    if (phase_ != Phase::waiting && !recent_.empty()) {
        const double period = median_period();
        if (period > 0.0 && t - recent_.back() > cfg_.loss_factor * period) {
            phase_ = Phase::waiting;
            recent_.clear();
            alpha_.reset();
            rss_detector_.reset();
            out.events.push_back(NetEvent::imu_periodicity_lost);
        }
    }
    return out;
}

// ---------------------------------------------------------------- TPC

EmgTpc::EmgTpc(Config cfg) : cfg_(cfg), tracker_(cfg.window_samples), power_(cfg.p_low) {
    if (!(cfg_.sample_interval > 0.0))
        throw Error(ErrorKind::config, "EMG sample interval must be positive");
}

std::optional<RadioCommand> EmgTpc::push(double v) {
    ++index_;
    const auto ex = tracker_.push(v);
    if (!ex)
        return std::nullopt;
    const double level = ex->span() > cfg_.threshold_uv ? cfg_.p_high : cfg_.p_low;
    const bool changed = level != power_;
    power_ = level;
    if (cfg_.deduplicate && !changed)
        return std::nullopt;
    return RadioCommand{RadioCommand::Kind::set_power, static_cast<double>(index_) * cfg_.sample_interval, level};
}

HrTpc::HrTpc(Config cfg) : cfg_(cfg), next_update_(cfg.cadence), power_(cfg.p_low) {
    if (!(cfg_.cadence > 0.0))
        throw Error(ErrorKind::config, "HR cadence must be positive");
}

std::optional<RadioCommand> HrTpc::push(double t, const HeartRateSample &hr) {
    if (t + kTimeEps < next_update_)
        return std::nullopt;
    const double boundary = next_update_;
    while (next_update_ <= t + kTimeEps)
        next_update_ += cfg_.cadence;
    const double level = hr.valid && hr.bpm > cfg_.threshold_bpm ? cfg_.p_high : cfg_.p_low;
    const bool changed = level != power_;
    power_ = level;
    if (cfg_.deduplicate && !changed)
        return std::nullopt;
    return RadioCommand{RadioCommand::Kind::set_power, boundary, level};
}

} // namespace wban
