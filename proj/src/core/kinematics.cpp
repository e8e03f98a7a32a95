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

#include "wban/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>

#include "wban/error.hpp"

namespace wban {

namespace {

Mat3 channel_rotation(Channel c, double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    switch (c) {
    case Channel::x_rotation:
        return Eigen::AngleAxisd(rad, Vec3::UnitX()).toRotationMatrix();
    case Channel::y_rotation:
        return Eigen::AngleAxisd(rad, Vec3::UnitY()).toRotationMatrix();
    case Channel::z_rotation:
        return Eigen::AngleAxisd(rad, Vec3::UnitZ()).toRotationMatrix();
    default:
        return Mat3::Identity();
    }
}

void scale_offsets(Joint &joint, double s) {
    joint.offset *= s;
    for (Joint &c : joint.children)
        scale_offsets(c, s);
}

} // namespace

const JointPose &PoseFrame::joint(std::string_view name) const {
    for (const JointPose &j : joints)
        if (j.name == name)
            return j;
    throw Error(ErrorKind::lookup, "unknown joint '" + std::string(name) + "'");
}

bool PoseFrame::contains(std::string_view name) const {
    return std::any_of(joints.begin(), joints.end(), [&](const JointPose &j) { return j.name == name; });
}

PoseFrame pose_at_frame(const MotionClip &clip, std::size_t frame_index) {
    if (frame_index >= clip.frame_count)
        throw Error(ErrorKind::bounds, "frame index " + std::to_string(frame_index) + " out of range [0, " +
                                           std::to_string(clip.frame_count) + ")");
    const std::vector<FlatJoint> flat = flatten(clip.root);
    const std::span<const double> row = clip.frame(frame_index);

    PoseFrame pose;
    pose.time = static_cast<double>(frame_index) * clip.frame_time;
    pose.joints.reserve(flat.size());
    for (const FlatJoint &fj : flat) {
        const Joint &j = *fj.joint;
        Vec3 translation = Vec3::Zero();
        Mat3 local = Mat3::Identity();
        for (std::size_t k = 0; k < j.channels.size(); ++k) {
            const double v = row[fj.channel_offset + k];
            switch (j.channels[k]) {
            case Channel::x_position:
                translation.x() = v;
                break;
            case Channel::y_position:
                translation.y() = v;
                break;
            case Channel::z_position:
                translation.z() = v;
                break;
            default:
                local = local * channel_rotation(j.channels[k], v);
            }
        }

        JointPose jp;
        jp.is_end_site = j.is_end_site;
        if (fj.parent < 0) {
            jp.name = j.name;
            jp.position = j.offset + translation;
            jp.rotation = local;
        } else {
            const JointPose &parent = pose.joints[static_cast<std::size_t>(fj.parent)];
            jp.name = j.is_end_site ? parent.name + "/End Site" : j.name;
            jp.position = parent.position + parent.rotation * (j.offset + translation);
            jp.rotation = parent.rotation * local;
        }
        pose.joints.push_back(std::move(jp));
    }
    return pose;
}

double measured_height(const PoseFrame &pose, Axis up) {
    const auto k = static_cast<Eigen::Index>(up);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const JointPose &j : pose.joints) {
        lo = std::min(lo, j.position(k));
        hi = std::max(hi, j.position(k));
    }
    return pose.joints.empty() ? 0.0 : hi - lo;
}

MotionClip scale_to_height(const MotionClip &clip, double target_height, Axis up) {
    if (!(target_height > 0.0))
        throw Error(ErrorKind::domain, "target height must be positive");
    if (clip.frame_count == 0)
        throw Error(ErrorKind::insufficient_data, "cannot scale a clip without frames");
    const double measured = measured_height(pose_at_frame(clip, 0), up);
    if (!(measured > 1e-3))
        throw Error(ErrorKind::geometry, "degenerate skeleton: vertical extent " + std::to_string(measured));
    const double s = target_height / measured;

    MotionClip out = clip;
    scale_offsets(out.root, s);
    for (const FlatJoint &fj : flatten(out.root)) {
        for (std::size_t k = 0; k < fj.joint->channels.size(); ++k) {
            if (is_rotation(fj.joint->channels[k]))
                continue;
            for (std::size_t f = 0; f < out.frame_count; ++f)
                out.frame(f)[fj.channel_offset + k] *= s;
        }
    }
    return out;
}

BodyCylinder fit_torso_cylinder(const PoseFrame &pose, const TorsoSpec &spec) {
    if (spec.hip_joints.empty())
        throw Error(ErrorKind::config, "torso spec needs at least one hip joint");
    if (!(spec.radius > 0.0))
        throw Error(ErrorKind::config, "torso radius must be positive");
    Vec3 hips = Vec3::Zero();
    for (const std::string &name : spec.hip_joints)
        hips += pose.joint(name).position;
    hips /= static_cast<double>(spec.hip_joints.size());
    const Vec3 neck = pose.joint(spec.neck_joint).position;
    const Vec3 span = neck - hips;
    const double height = span.norm();
    if (!(height > 1e-9))
        throw Error(ErrorKind::geometry, "hip center and neck coincide");
    return BodyCylinder{hips, span / height, spec.radius, height};
}

Vec3 node_position(const PoseFrame &pose, const NodePlacement &placement) {
    const JointPose &j = pose.joint(placement.joint);
    return j.position + j.rotation * placement.offset;
}

std::vector<Vec3> node_trajectory(const MotionClip &clip, const NodePlacement &placement) {
    std::vector<Vec3> out;
    out.reserve(clip.frame_count);
    for (std::size_t f = 0; f < clip.frame_count; ++f)
        out.push_back(node_position(pose_at_frame(clip, f), placement));
    return out;
}

Vec3 dominant_axis(std::span<const Vec3> positions) {
    if (positions.empty())
        throw Error(ErrorKind::insufficient_data, "empty trajectory");
    Vec3 mean = Vec3::Zero();
    for (const Vec3 &p : positions)
        mean += p;
    mean /= static_cast<double>(positions.size());
    Vec3 var = Vec3::Zero();
    for (const Vec3 &p : positions)
        var += (p - mean).cwiseAbs2();
    Eigen::Index best = 0;
    var.maxCoeff(&best);
    return Vec3::Unit(best);
}

BiosignalTrace synth_imu(std::span<const Vec3> positions, double frame_time, const Vec3 &axis) {
    const std::size_t n = positions.size();
    if (n < 3)
        throw Error(ErrorKind::insufficient_data, "IMU synthesis needs at least 3 samples");
    if (!(frame_time > 0.0))
        throw Error(ErrorKind::domain, "frame time must be positive");
    const Vec3 u = axis.normalized();
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k)
        p[k] = positions[k].dot(u);

    const double inv_dt2 = 1.0 / (frame_time * frame_time);
    BiosignalTrace out{SignalKind::accel, frame_time, std::vector<double>(n)};
    for (std::size_t k = 1; k + 1 < n; ++k)
        out.samples[k] = (p[k + 1] - 2.0 * p[k] + p[k - 1]) * inv_dt2;
    out.samples[0] = (p[0] - 2.0 * p[1] + p[2]) * inv_dt2;
    out.samples[n - 1] = (p[n - 1] - 2.0 * p[n - 2] + p[n - 3]) * inv_dt2;
    return out;
}

} // namespace wban
