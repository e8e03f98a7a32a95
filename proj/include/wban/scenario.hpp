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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wban/analytics.hpp"
#include "wban/bvh.hpp"
#include "wban/channel.hpp"
#include "wban/kinematics.hpp"
#include "wban/netsim.hpp"
#include "wban/signals.hpp"

namespace wban {

struct AnalysisConfig {
    double max_lag = 0.5;
    double threshold = 0.7;
    double cvf_window = 0.1;
};

/// A complete run description. Relative paths are resolved against the
/// directory of the configuration file.
struct Scenario {
    std::uint64_t seed = 1;

    std::optional<std::filesystem::path> bvh;
    double unit_scale = 1.0;
    /// Target stature; 0 keeps the clip's own scale.
    double subject_height = kDefaultStature;

    TorsoSpec torso;
    std::string link_id = "wrist-pocket";
    NodePlacement tx{"LeftHand", Vec3::Zero()};
    NodePlacement rx{"RightUpLeg", Vec3::Zero()};
    double sigma_db = kDefaultShadowingSigma;

    RadioConfig radio;
    AppConfig app;
    PolicyConfig policy;
    AnalysisConfig analysis;

    EmgSynthConfig emg;
    std::optional<std::filesystem::path> emg_csv;
    EcgSynthConfig ecg = {{{0.0, 70.0}, {10.0, 110.0}}};
    std::optional<std::filesystem::path> ecg_csv;

    std::vector<LabeledInterval> labels;
    /// 0 simulates the whole trace.
    double duration = 0.0;
    /// Precomputed path-loss trace used instead of emulating the clip.
    std::optional<std::filesystem::path> trace_csv;
    std::filesystem::path output_dir = "out";
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses a JSON scenario. Each override sets a dotted key (`policy.kind`);
/// its value is read as JSON when possible, otherwise as a string. Unknown
/// keys and wrong types are Error{config}; missing referenced files are
/// Error{io}.
Scenario parse_scenario(std::string_view json_text, const std::filesystem::path &base_dir,
                        const Overrides &overrides = {});
Scenario load_scenario(const std::filesystem::path &file, const Overrides &overrides = {});

struct Emulation {
    MotionClip clip; ///< after height scaling
    PathLossTrace trace;
    BiosignalTrace imu;
};

/// BVH -> scaled clip -> per-frame path loss, plus the Tx node accelerometer.
Emulation emulate(const Scenario &scenario);

/// Accepts either a path-loss trace CSV or a `t_s,value` received-power CSV.
StabilityReport analyze_csv(std::string_view csv_text, const AnalysisConfig &cfg);

/// Full simulation for the configured policy. `power_dbm` replaces the
/// fixed/IMU level (used by power sweeps).
SimReport simulate(const Scenario &scenario, std::optional<double> power_dbm = std::nullopt);

} // namespace wban
