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
#include <string>
#include <string_view>
#include <vector>

#include "wban/bvh.hpp"
#include "wban/kinematics.hpp"

namespace wban {

/// Free-space loss at 1 m, 2.4 GHz.
inline constexpr double kFreeSpaceLossAt1m = 40.0542;
/// On-body (body-surface) model: slope per decade and intercept at 1 m.
inline constexpr double kBodySurfaceSlope = 6.6;
inline constexpr double kBodySurfaceIntercept = 36.1;
inline constexpr double kDefaultShadowingSigma = 3.8;
/// Chords shorter than this are treated as grazing (no shadowing).
inline constexpr double kMinChord = 1e-3;

struct PathSegmentation {
    double d_fs = 0.0;
    double d_bs = 0.0;
    bool intersects = false;
    /// Entry and exit points on the lateral surface (valid when intersecting).
    Vec3 entry = Vec3::Zero();
    Vec3 exit = Vec3::Zero();
    double chord = 0.0;
};

/// Splits the straight Tx-Rx path into the free-space part and the curved
/// body-surface detour around the cylinder. Only a segment that crosses the
/// lateral surface twice counts as shadowed.
/// Throws Error{geometry} if tx == rx or either end is inside the cylinder.
PathSegmentation segment_path(const Vec3 &tx, const Vec3 &rx, const BodyCylinder &cyl);

/// Geodesic between two lateral-surface points: the straight line on the
/// unrolled cylinder, sqrt((r*dtheta)^2 + dz^2) with dtheta in [0, pi].
double helix_distance(const Vec3 &p1, const Vec3 &p2, const BodyCylinder &cyl);

/// Free-space path loss in dB, distance in meters. Error{domain} for d <= 0.
double pl_fs(double d_fs);

/// Body-surface path loss in dB plus the shadowing draw `n_db`.
double pl_bs(double d_bs, double n_db = 0.0);

/// Zero-mean Gaussian shadowing. Each (seed, link, frame) key maps to an
/// independent draw, so traces do not depend on evaluation order.
class ShadowingModel {
  public:
    explicit ShadowingModel(double sigma_db = kDefaultShadowingSigma, std::uint64_t seed = 0);

    double draw(std::string_view link_id, std::uint64_t frame) const;

    double sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }

  private:
    double sigma_;
    std::uint64_t seed_;
};

struct PathLossTrace {
    std::string link_id;
    double frame_time = 1.0 / 120.0;
    std::vector<double> samples; ///< total path loss, dB
    std::vector<double> d_fs;
    std::vector<double> d_bs;
    std::vector<double> n_db;    ///< shadowing applied (0 for unshadowed frames)

    std::size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) * frame_time; }
    bool has_components() const { return d_fs.size() == samples.size(); }
};

/// Per-frame emulation: pose, torso fit, path split, total loss. Unshadowed
/// frames use free-space loss over the full distance. Geometry errors are
/// rethrown with the frame index.
PathLossTrace path_loss_trace(const MotionClip &clip, const NodePlacement &tx, const NodePlacement &rx,
                              const TorsoSpec &torso, const ShadowingModel &shadow,
                              std::string link_id = "link");

/// CSV: `frame,time_s,pl_db,d_fs_m,d_bs_m,n_db`, six fractional digits.
std::string trace_to_csv(const PathLossTrace &trace);
std::string trace_to_json(const PathLossTrace &trace);
void write_trace_csv(const PathLossTrace &trace, const std::filesystem::path &path);
void write_trace_json(const PathLossTrace &trace, const std::filesystem::path &path);
/// Reads the CSV written by write_trace_csv; ParseError carries the row line.
PathLossTrace read_trace_csv(const std::filesystem::path &path, std::string link_id = "link");
PathLossTrace parse_trace_csv(std::string_view text, std::string link_id = "link");

} // namespace wban
