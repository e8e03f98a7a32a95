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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wban/bvh.hpp"
#include "wban/signals.hpp"

namespace wban {

using Mat3 = Eigen::Matrix3d;

/// Default stature for rescaled skeletons, meters (US adult mean, both sexes).
inline constexpr double kDefaultStature = 1.753;
/// Default torso cylinder radius, meters.
inline constexpr double kDefaultTorsoRadius = 0.15;

enum class Axis { x = 0, y = 1, z = 2 };

struct JointPose {
    /// End sites are named "<parent>/End Site".
    std::string name;
    Vec3 position = Vec3::Zero();
    /// Cumulative rotation of the joint's local frame into world coordinates.
    Mat3 rotation = Mat3::Identity();
    bool is_end_site = false;
};

struct PoseFrame {
    double time = 0.0;
    std::vector<JointPose> joints;

    /// Throws Error{lookup} when the joint is absent.
    const JointPose &joint(std::string_view name) const;
    bool contains(std::string_view name) const;
};

struct BodyCylinder {
    Vec3 base_center = Vec3::Zero();
    Vec3 axis = Vec3::UnitY();
    double radius = kDefaultTorsoRadius;
    double height = 1.0;
};

struct TorsoSpec {
    /// Averaged to form the cylinder base center.
    std::vector<std::string> hip_joints = {"LeftUpLeg", "RightUpLeg"};
    std::string neck_joint = "Neck";
    double radius = kDefaultTorsoRadius;
};

struct NodePlacement {
    std::string joint;
    /// Meters, in the joint's local frame.
    Vec3 offset = Vec3::Zero();
};

/// World-space pose by forward kinematics. Rotations compose in the order the
/// channels are declared; the root position is its offset plus its position
/// channels. Throws Error{bounds} for an out-of-range frame.
PoseFrame pose_at_frame(const MotionClip &clip, std::size_t frame_index);

/// Vertical extent (max - min along `up`) of every joint and end site.
double measured_height(const PoseFrame &pose, Axis up = Axis::y);

/// Rescales offsets and translation channels so the first frame's vertical
/// extent equals `target_height`. Throws Error{geometry} for extents at or
/// below 1 mm.
MotionClip scale_to_height(const MotionClip &clip, double target_height, Axis up = Axis::y);

BodyCylinder fit_torso_cylinder(const PoseFrame &pose, const TorsoSpec &spec);

Vec3 node_position(const PoseFrame &pose, const NodePlacement &placement);

/// Node position for every frame of the clip.
std::vector<Vec3> node_trajectory(const MotionClip &clip, const NodePlacement &placement);

/// Camera axis along which the trajectory has the largest coordinate variance.
Vec3 dominant_axis(std::span<const Vec3> positions);

/// Accelerometer readout along `axis`: second difference of the projected
/// trajectory, one-sided at both ends. Throws Error{insufficient_data} for
/// fewer than three samples.
BiosignalTrace synth_imu(std::span<const Vec3> positions, double frame_time, const Vec3 &axis);

} // namespace wban
