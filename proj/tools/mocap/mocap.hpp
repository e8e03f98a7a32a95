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
#include <string>

#include "wban/bvh.hpp"

/// Procedural motion clips on a 31-joint, CMU-style skeleton (centimeters,
/// Y up, walking toward +Z). Used for demos and tests in place of captured
/// data.
namespace wban::mocap {

struct WalkConfig {
    double duration = 60.0;
    double frame_time = 1.0 / 120.0;
    /// One full gait cycle (left heel strike to left heel strike), seconds.
    double stride_period = 1.1;
    /// Each cycle's period is drawn uniformly within +-this fraction.
    double stride_jitter = 0.02;
    double speed = 1.3; ///< m/s
    double arm_swing_deg = 30.0;
    double hip_swing_deg = 25.0;
    std::uint64_t seed = 1;
};

struct StandConfig {
    double duration = 60.0;
    double frame_time = 1.0 / 120.0;
    double sway_period = 5.0;
    double sway_cm = 1.0;
    std::uint64_t seed = 1;
};

Joint cmu_skeleton();
MotionClip walking_clip(const WalkConfig &cfg);
MotionClip standing_clip(const StandConfig &cfg);

/// Serializes any clip as BVH text. Numbers use the shortest round-trip form,
/// so parse_bvh(write_bvh(c)) == c.
std::string write_bvh(const MotionClip &clip);

} // namespace wban::mocap
