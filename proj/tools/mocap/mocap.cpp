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


#include "mocap.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "text_io.hpp"

namespace wban::mocap {

namespace {

using C = Channel;
const std::vector<Channel> kRootChannels = {C::x_position, C::y_position, C::z_position,
                                            C::z_rotation, C::y_rotation, C::x_rotation};
const std::vector<Channel> kJointChannels = {C::z_rotation, C::y_rotation, C::x_rotation};

Joint end_site(Vec3 offset) {
    Joint j;
    j.name = "End Site";
    j.offset = offset;
    j.is_end_site = true;
    return j;
}

Joint joint(std::string name, Vec3 offset, std::vector<Joint> children) {
    return Joint{std::move(name), offset, kJointChannels, std::move(children), false};
}

Joint leg(const std::string &side, double x) {
    return joint(
        side == "Left" ? "LHipJoint" : "RHipJoint", {0, 0, 0},
        {joint(side + "UpLeg", {x, -6, 0},
               {joint(side + "Leg", {0, -42, 0},
                      {joint(side + "Foot", {0, -42, 0},
                             {joint(side + "ToeBase", {0, -6, 12}, {end_site({0, 0, 5})})})})})});
}

Joint arm(const std::string &side, double x) {
    const std::string t = side == "Left" ? "LThumb" : "RThumb";
    const double s = x > 0 ? 1.0 : -1.0;
    return joint(
        side + "Shoulder", {0, 10, 0},
        {joint(side + "Arm", {x, 0, 0},
               {joint(side + "ForeArm", {0, -29, 0},
                      {joint(side + "Hand", {0, -25, 0},
                             {joint(side + "FingerBase", {0, -4, 0},
                                    {joint(side + "HandIndex1", {0, -4, 0}, {end_site({0, -3, 0})})}),
                              joint(t, {-s * 1.0, -2, 3}, {end_site({0, -3, 1})})})})})});
}

/// Per-joint Euler angles (degrees, z/y/x) for one frame; root translation in cm.
struct Pose {
    Vec3 root = Vec3::Zero();
    std::map<std::string, Vec3> zyx;
};

MotionClip render(const std::vector<Pose> &poses, double frame_time) {
    MotionClip clip;
    clip.root = cmu_skeleton();
    clip.frame_time = frame_time;
    clip.frame_count = poses.size();
    const std::vector<FlatJoint> flat = flatten(clip.root);
    for (const FlatJoint &f : flat)
        clip.channel_count += f.joint->channels.size();
    clip.frames.assign(clip.frame_count * clip.channel_count, 0.0);
    for (std::size_t i = 0; i < poses.size(); ++i) {
        std::span<double> row = clip.frame(i);
        for (const FlatJoint &f : flat) {
            if (f.joint->is_end_site)
                continue;
            const auto it = poses[i].zyx.find(f.joint->name);
            const Vec3 zyx = it == poses[i].zyx.end() ? Vec3::Zero() : it->second;
            std::size_t c = f.channel_offset;
            if (f.parent < 0)
                for (int k = 0; k < 3; ++k)
                    row[c++] = poses[i].root[k];
            for (int k = 0; k < 3; ++k)
                row[c++] = zyx[k];
        }
    }
    return clip;
}

void write_joint(std::string &out, const Joint &j, int depth, bool root) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (j.is_end_site)
        out += pad + "End Site\n";
    else
        out += pad + (root ? "ROOT " : "JOINT ") + j.name + "\n";
    out += pad + "{\n";
    out += pad + "  OFFSET " + detail::shortest(j.offset.x()) + " " + detail::shortest(j.offset.y()) + " " +
           detail::shortest(j.offset.z()) + "\n";
    if (!j.is_end_site) {
        out += pad + "  CHANNELS " + std::to_string(j.channels.size());
        for (Channel c : j.channels)
            out += " " + std::string(channel_name(c));
        out += "\n";
    }
    for (const Joint &child : j.children)
        write_joint(out, child, depth + 1, false);
    out += pad + "}\n";
}

} // namespace

Joint cmu_skeleton() {
    Joint hips;
    hips.name = "Hips";
    hips.channels = kRootChannels;
    Joint spine = joint(
        "LowerBack", {0, 5, 0},
        {joint("Spine", {0, 12, 0},
               {joint("Spine1", {0, 12, 0},
                      {joint("Neck", {0, 12, 0},
                             {joint("Neck1", {0, 5, 0}, {joint("Head", {0, 6, 0}, {end_site({0, 15, 0})})})}),
                       arm("Left", 17.0), arm("Right", -17.0)})})});
    hips.children = {leg("Left", 9.0), leg("Right", -9.0), spine};
    return hips;
}

MotionClip walking_clip(const WalkConfig &cfg) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-cfg.stride_jitter, cfg.stride_jitter);
    const auto frames = static_cast<std::size_t>(std::llround(cfg.duration / cfg.frame_time));

    std::vector<Pose> poses(frames);
    double phase = 0.0;
    double period = cfg.stride_period * (1.0 + jitter(rng));
    double cycle_end = two_pi;
    for (std::size_t i = 0; i < frames; ++i) {
        const double t = static_cast<double>(i) * cfg.frame_time;
        const double s = std::sin(phase);
        const double c = std::cos(phase);
        Pose &p = poses[i];
        p.root = {0.4 * s, 96.0 + 1.5 * std::cos(2.0 * phase), 100.0 * cfg.speed * t};
        p.zyx["Hips"] = {0.0, -4.0 * s, 0.0};
        p.zyx["Spine"] = {0.0, 5.0 * s, 0.0};
        // Negative x rotation swings a limb forward.
        p.zyx["LeftUpLeg"] = {0.0, 0.0, -cfg.hip_swing_deg * s};
        p.zyx["RightUpLeg"] = {0.0, 0.0, cfg.hip_swing_deg * s};
        p.zyx["LeftLeg"] = {0.0, 0.0, 5.0 + 30.0 * std::max(0.0, std::sin(phase + 0.5))};
        p.zyx["RightLeg"] = {0.0, 0.0, 5.0 + 30.0 * std::max(0.0, std::sin(phase + 0.5 + std::numbers::pi))};
        p.zyx["LeftFoot"] = {0.0, 0.0, 10.0 * c};
        p.zyx["RightFoot"] = {0.0, 0.0, -10.0 * c};
        p.zyx["LeftArm"] = {-6.0, 0.0, cfg.arm_swing_deg * s};
        p.zyx["RightArm"] = {6.0, 0.0, -cfg.arm_swing_deg * s};
        p.zyx["LeftForeArm"] = {0.0, 0.0, -20.0 + 5.0 * s};
        p.zyx["RightForeArm"] = {0.0, 0.0, -20.0 - 5.0 * s};

        phase += two_pi * cfg.frame_time / period;
        if (phase >= cycle_end) {
            period = cfg.stride_period * (1.0 + jitter(rng));
            cycle_end += two_pi;
        }
    }
    return render(poses, cfg.frame_time);
}

MotionClip standing_clip(const StandConfig &cfg) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> offset(0.0, two_pi);
    const double phi_sway = offset(rng);
    const double phi_breath = offset(rng);
    const auto frames = static_cast<std::size_t>(std::llround(cfg.duration / cfg.frame_time));

    std::vector<Pose> poses(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        const double t = static_cast<double>(i) * cfg.frame_time;
        const double sway = std::sin(two_pi * t / cfg.sway_period + phi_sway);
        const double breath = std::sin(two_pi * t / 4.0 + phi_breath);
        Pose &p = poses[i];
        p.root = {cfg.sway_cm * sway, 96.0 + 0.2 * breath, 0.5 * cfg.sway_cm * sway};
        p.zyx["Spine1"] = {0.0, 0.0, 1.0 * breath};
        p.zyx["LeftArm"] = {-6.0, 0.0, 2.0 * sway};
        p.zyx["RightArm"] = {6.0, 0.0, -2.0 * sway};
        p.zyx["LeftForeArm"] = {0.0, 0.0, -15.0};
        p.zyx["RightForeArm"] = {0.0, 0.0, -15.0};
    }
    return render(poses, cfg.frame_time);
}

std::string write_bvh(const MotionClip &clip) {
    std::string out = "HIERARCHY\n";
    write_joint(out, clip.root, 0, true);
    out += "MOTION\nFrames: " + std::to_string(clip.frame_count) + "\n";
    out += "Frame Time: " + detail::shortest(clip.frame_time) + "\n";
    for (std::size_t i = 0; i < clip.frame_count; ++i) {
        const std::span<const double> row = clip.frame(i);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c != 0)
                out += ' ';
            out += detail::shortest(row[c]);
        }
        out += '\n';
    }
    return out;
}

} // namespace wban::mocap
