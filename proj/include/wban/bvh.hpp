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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wban {

using Vec3 = Eigen::Vector3d;

enum class Channel : std::uint8_t {
    x_position,
    y_position,
    z_position,
    x_rotation,
    y_rotation,
    z_rotation,
};

/// BVH spelling of a channel, e.g. "Zrotation".
std::string_view channel_name(Channel c) noexcept;
std::optional<Channel> channel_from_name(std::string_view name) noexcept;
inline bool is_rotation(Channel c) noexcept { return c >= Channel::x_rotation; }

struct Joint {
    std::string name;
    Vec3 offset = Vec3::Zero();
    std::vector<Channel> channels;
    std::vector<Joint> children;
    bool is_end_site = false;

    bool operator==(const Joint &) const = default;
};

/// Depth-first view of a skeleton. `channel_offset` is the column of the
/// joint's first channel inside a frame row.
struct FlatJoint {
    const Joint *joint = nullptr;
    int parent = -1;
    std::size_t channel_offset = 0;
};

std::vector<FlatJoint> flatten(const Joint &root);

struct MotionClip {
    Joint root;
    std::size_t frame_count = 0;
    double frame_time = 1.0 / 120.0;
    std::size_t channel_count = 0;
    /// Row-major, frame_count x channel_count.
    std::vector<double> frames;

    std::span<const double> frame(std::size_t index) const {
        return {frames.data() + index * channel_count, channel_count};
    }
    std::span<double> frame(std::size_t index) {
        return {frames.data() + index * channel_count, channel_count};
    }
    double duration() const { return static_cast<double>(frame_count) * frame_time; }

    bool operator==(const MotionClip &) const = default;
};

/// Parses a complete BVH document. Offsets and position channels are
/// multiplied by `unit_scale` (dataset units to meters).
///
/// Throws ParseError (with line number) on malformed syntax and
/// Error{structural} when the motion block disagrees with the hierarchy.
MotionClip parse_bvh(std::string_view text, double unit_scale = 1.0);

/// Reads and parses a BVH file; Error{io} when the file cannot be read.
MotionClip load_bvh(const std::filesystem::path &path, double unit_scale = 1.0);

std::size_t count_joints(const Joint &root, bool include_end_sites);

} // namespace wban
