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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wban/adaptive.hpp"
#include "wban/channel.hpp"
#include "wban/signals.hpp"

namespace wban {

struct RadioConfig {
    std::vector<double> power_levels = {-8.0, -4.0, 0.0, 4.0};
    double sensitivity_dbm = -85.0;
    /// Radio power draw per transmit level, dBm -> mW.
    std::map<double, double> energy_mw = {{-8.0, 21.0}, {-4.0, 24.0}, {0.0, 27.75}, {4.0, 31.5}};
    double airtime = 1e-3;

    bool has_level(double dbm) const;
    /// Error{config} when the level has no energy entry.
    double power_mw(double dbm) const;
    void validate() const;

    bool operator==(const RadioConfig &) const = default;
};

inline double rssi(double p_tx_dbm, double pl_db) { return p_tx_dbm - pl_db; }
/// Inclusive boundary: a packet exactly at sensitivity is received.
inline bool is_delivered(double rssi_dbm, double sensitivity_dbm) { return rssi_dbm >= sensitivity_dbm; }

enum class PolicyKind { fixed, imu, emg, hr };
const char *to_string(PolicyKind kind) noexcept;
PolicyKind parse_policy(std::string_view name);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::fixed;
    /// Level used by the fixed and IMU policies.
    double power_dbm = 0.0;
    EmgTpc::Config emg;
    HrTpc::Config hr;
    ImuScheduler::Config imu;
    std::size_t drop_threshold = 3;
};

struct AppConfig {
    double packet_interval = 0.1;
};

struct PacketRecord {
    std::uint64_t seq = 0;
    double generated_at = 0.0;
    std::vector<double> transmitted_at;
    std::vector<double> tx_power;
    std::vector<double> path_loss;
    std::vector<double> rssi;
    bool delivered = false;
};

struct LabeledInterval {
    std::string label;
    Interval span;
};

struct IntervalRss {
    std::string label;
    Interval span;
    std::size_t attempts = 0;
    double mean_rss_dbm = 0.0; ///< NaN when no attempt fell inside
};

struct StateChange {
    double time = 0.0;
    NetworkState state = NetworkState::static_state;
};

struct SimReport {
    std::string link_id;
    PolicyConfig policy;
    RadioConfig radio;
    AppConfig app;
    double duration = 0.0;
    std::vector<PacketRecord> packets;
    std::vector<RadioCommand> commands;
    std::vector<StateChange> states;
    std::vector<IntervalRss> intervals;
    std::optional<double> alpha;

    std::size_t generated() const { return packets.size(); }
    std::size_t delivered() const;
    double pdr() const;
    double mean_rss_dbm() const;
};

struct SimInputs {
    const PathLossTrace *trace = nullptr;
    const BiosignalTrace *imu = nullptr;
    const BiosignalTrace *emg = nullptr;
    const BiosignalTrace *ecg = nullptr;
};

/// Packet-level simulation over the emulated channel. The application emits a
/// packet every interval from t = 0; the channel is held constant within a
/// trace frame. Under the IMU policy packets wait for the next scheduled
/// instant and leave together; anything still queued at the end is lost.
/// Error{config} when the policy lacks its input stream, a level is not in the
/// radio's set, or a stream does not cover the duration.
SimReport run_scenario(const SimInputs &inputs, const PolicyConfig &policy, const RadioConfig &radio,
                       const AppConfig &app, double duration, const std::vector<LabeledInterval> &labels = {});

enum class RetransmissionModel { none, one_retry };

struct EnergySummary {
    double attempts_per_packet = 0.0;
    double mean_level_mw = 0.0;
    /// attempts_per_packet * mean_level_mw
    double power_per_packet_mw = 0.0;
    double total_mj = 0.0;
};

/// Compact view used for comparisons; loadable from a report JSON.
struct ReportSummary {
    std::string label;
    std::string policy;
    double power_dbm = 0.0;
    std::size_t generated = 0;
    std::size_t delivered = 0;
    double pdr = 0.0;
    /// Mean radio draw over transmitted attempts, mW.
    double mean_level_mw = 0.0;
    std::size_t transmitted = 0;
    RadioConfig radio;
};

ReportSummary summarize(const SimReport &report, std::string label = {});
EnergySummary energy_report(const ReportSummary &summary, RetransmissionModel model);

std::string report_to_json(const SimReport &report);
std::string packets_to_csv(const SimReport &report);
ReportSummary summary_from_json(std::string_view json_text, std::string label = {});
ReportSummary load_summary(const std::filesystem::path &path);

struct ComparisonRow {
    std::string baseline;
    std::string candidate;
    double pdr_baseline = 0.0;
    double pdr_candidate = 0.0;
    double pdr_delta_pp = 0.0;
    double power_baseline_mw = 0.0;
    double power_candidate_mw = 0.0;
    double power_delta_pct = 0.0;           ///< no retransmissions
    double power_baseline_retry_mw = 0.0;
    double power_candidate_retry_mw = 0.0;
    double power_delta_retry_pct = 0.0;     ///< one retry per lost packet
};

/// Compares every report against the first. Error{comparison} unless all
/// share the radio configuration.
std::vector<ComparisonRow> compare_reports(const std::vector<ReportSummary> &reports);
std::string comparison_to_text(const std::vector<ComparisonRow> &rows);
std::string comparison_to_csv(const std::vector<ComparisonRow> &rows);

} // namespace wban
