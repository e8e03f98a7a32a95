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

#include "wban/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <json.hpp>

#include "text_io.hpp"
#include "wban/error.hpp"

namespace wban {

namespace {

constexpr double kSurfaceTolerance = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

struct CylCoords {
    double rho;
    double theta;
    double z;
};

CylCoords to_cyl(const Vec3 &p, const BodyCylinder &cyl) {
    const Vec3 u = cyl.axis.unitOrthogonal();
    const Vec3 v = cyl.axis.cross(u);
    const Vec3 q = p - cyl.base_center;
    const double x = q.dot(u);
    const double y = q.dot(v);
    return {std::hypot(x, y), std::atan2(y, x), q.dot(cyl.axis)};
}

bool strictly_inside(const Vec3 &p, const BodyCylinder &cyl) {
    const CylCoords c = to_cyl(p, cyl);
    return c.rho < cyl.radius - 1e-9 && c.z > 1e-9 && c.z < cyl.height - 1e-9;
}

void check_cylinder(const BodyCylinder &cyl) {
    if (!(cyl.radius > 0.0) || !(cyl.height > 0.0))
        throw Error(ErrorKind::geometry, "cylinder radius and height must be positive");
    if (std::abs(cyl.axis.norm() - 1.0) > 1e-9)
        throw Error(ErrorKind::geometry, "cylinder axis must be a unit vector");
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

} // namespace

PathSegmentation segment_path(const Vec3 &tx, const Vec3 &rx, const BodyCylinder &cyl) {
    check_cylinder(cyl);
    const Vec3 d = rx - tx;
    const double length = d.norm();
    if (!(length > 1e-12))
        throw Error(ErrorKind::geometry, "transmitter and receiver coincide");
    if (strictly_inside(tx, cyl))
        throw Error(ErrorKind::geometry, "transmitter lies inside the torso");
    if (strictly_inside(rx, cyl))
        throw Error(ErrorKind::geometry, "receiver lies inside the torso");

    PathSegmentation seg;
    seg.d_fs = length;

    // Radial components relative to the axis: |f_r + t d_r|^2 = r^2.
    const Vec3 f = tx - cyl.base_center;
    const Vec3 f_r = f - f.dot(cyl.axis) * cyl.axis;
    const Vec3 d_r = d - d.dot(cyl.axis) * cyl.axis;
    const double a = d_r.squaredNorm();
    if (a < 1e-18)
        return seg; // parallel to the axis
    const double b = 2.0 * f_r.dot(d_r);
    const double c = f_r.squaredNorm() - cyl.radius * cyl.radius;
    const double disc = b * b - 4.0 * a * c;
    if (!(disc > 0.0))
        return seg; // miss or tangent
    const double sq = std::sqrt(disc);
    const double t1 = (-b - sq) / (2.0 * a);
    const double t2 = (-b + sq) / (2.0 * a);
    if (t1 < -1e-12 || t2 > 1.0 + 1e-12)
        return seg;
    const Vec3 p1 = tx + t1 * d;
    const Vec3 p2 = tx + t2 * d;
    const double z1 = (p1 - cyl.base_center).dot(cyl.axis);
    const double z2 = (p2 - cyl.base_center).dot(cyl.axis);
    if (z1 < 0.0 || z1 > cyl.height || z2 < 0.0 || z2 > cyl.height)
        return seg; // passes through an end cap
    const double chord = (t2 - t1) * length;
    if (chord < kMinChord)
        return seg;

    seg.intersects = true;
    seg.entry = p1;
    seg.exit = p2;
    seg.chord = chord;
    seg.d_fs = std::max(length - chord, 0.0);
    seg.d_bs = helix_distance(p1, p2, cyl);
    return seg;
}

double helix_distance(const Vec3 &p1, const Vec3 &p2, const BodyCylinder &cyl) {
    check_cylinder(cyl);
    const CylCoords a = to_cyl(p1, cyl);
    const CylCoords b = to_cyl(p2, cyl);
    if (std::abs(a.rho - cyl.radius) > kSurfaceTolerance || std::abs(b.rho - cyl.radius) > kSurfaceTolerance)
        throw Error(ErrorKind::geometry, "point is not on the cylinder's lateral surface");
    double dtheta = std::fmod(std::abs(a.theta - b.theta), 2.0 * std::numbers::pi);
    if (dtheta > std::numbers::pi)
        dtheta = 2.0 * std::numbers::pi - dtheta;
    return std::hypot(cyl.radius * dtheta, a.z - b.z);
}

double pl_fs(double d_fs) {
    if (!(d_fs > 0.0))
        throw Error(ErrorKind::domain, "free-space distance must be positive");
    return 20.0 * std::log10(d_fs) + kFreeSpaceLossAt1m;
}

double pl_bs(double d_bs, double n_db) {
    if (!(d_bs > 0.0))
        throw Error(ErrorKind::domain, "body-surface distance must be positive");
    return kBodySurfaceSlope * std::log10(d_bs) + kBodySurfaceIntercept + n_db;
}

ShadowingModel::ShadowingModel(double sigma_db, std::uint64_t seed) : sigma_(sigma_db), seed_(seed) {
    if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db))
        throw Error(ErrorKind::config, "shadowing sigma must be nonnegative");
}

double ShadowingModel::draw(std::string_view link_id, std::uint64_t frame) const {
    if (sigma_ == 0.0)
        return 0.0;
    const std::uint64_t key = splitmix64(seed_ ^ splitmix64(fnv1a(link_id) ^ splitmix64(frame)));
    std::mt19937_64 gen(key);
    std::normal_distribution<double> normal(0.0, sigma_);
    return normal(gen);
}

PathLossTrace path_loss_trace(const MotionClip &clip, const NodePlacement &tx, const NodePlacement &rx,
                              const TorsoSpec &torso, const ShadowingModel &shadow, std::string link_id) {
    if (clip.frame_count == 0)
        throw Error(ErrorKind::insufficient_data, "motion clip has no frames");
    PathLossTrace trace;
    trace.link_id = std::move(link_id);
    trace.frame_time = clip.frame_time;
    trace.samples.reserve(clip.frame_count);
    trace.d_fs.reserve(clip.frame_count);
    trace.d_bs.reserve(clip.frame_count);
    trace.n_db.reserve(clip.frame_count);

    for (std::size_t f = 0; f < clip.frame_count; ++f) {
        try {
            const PoseFrame pose = pose_at_frame(clip, f);
            const BodyCylinder cyl = fit_torso_cylinder(pose, torso);
            const PathSegmentation seg = segment_path(node_position(pose, tx), node_position(pose, rx), cyl);
            double pl = 0.0;
            double n = 0.0;
            if (seg.intersects) {
                n = shadow.draw(trace.link_id, f);
                pl = pl_bs(seg.d_bs, n);
                // Both nodes on the skin: the free-space part vanishes.
                if (seg.d_fs >= kMinChord)
                    pl += pl_fs(seg.d_fs);
            } else {
                pl = pl_fs(seg.d_fs);
            }
            trace.samples.push_back(pl);
            trace.d_fs.push_back(seg.d_fs);
            trace.d_bs.push_back(seg.d_bs);
            trace.n_db.push_back(n);
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            throw Error(e.kind(), "frame " + std::to_string(f) + ": " + e.what());
        }
    }
    return trace;
}

std::string trace_to_csv(const PathLossTrace &trace) {
    const bool comp = trace.has_components();
    std::string out = "frame,time_s,pl_db,d_fs_m,d_bs_m,n_db\n";
    out.reserve(trace.size() * 56);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += detail::fixed(static_cast<double>(k) * trace.frame_time);
        out += ',';
        out += detail::fixed(trace.samples[k]);
        out += ',';
        out += detail::fixed(comp ? trace.d_fs[k] : 0.0);
        out += ',';
        out += detail::fixed(comp ? trace.d_bs[k] : 0.0);
        out += ',';
        out += detail::fixed(comp ? trace.n_db[k] : 0.0);
        out += '\n';
    }
    return out;
}

std::string trace_to_json(const PathLossTrace &trace) {
    nlohmann::ordered_json j;
    j["link_id"] = trace.link_id;
    j["frame_time_s"] = trace.frame_time;
    j["frames"] = trace.size();
    auto rounded = [](const std::vector<double> &v) {
        std::vector<double> out(v.size());
        std::transform(v.begin(), v.end(), out.begin(), round6);
        return out;
    };
    j["pl_db"] = rounded(trace.samples);
    if (trace.has_components()) {
        j["d_fs_m"] = rounded(trace.d_fs);
        j["d_bs_m"] = rounded(trace.d_bs);
        j["n_db"] = rounded(trace.n_db);
    }
    return j.dump() + "\n";
}

void write_trace_csv(const PathLossTrace &trace, const std::filesystem::path &path) {
    detail::write_text_file(path, trace_to_csv(trace));
}

void write_trace_json(const PathLossTrace &trace, const std::filesystem::path &path) {
    detail::write_text_file(path, trace_to_json(trace));
}

PathLossTrace parse_trace_csv(std::string_view text, std::string link_id) {
    const detail::CsvTable table = detail::parse_csv(text);
    const std::vector<std::string> expected = {"frame", "time_s", "pl_db", "d_fs_m", "d_bs_m", "n_db"};
    if (table.header != expected)
        throw ParseError(1, "expected header 'frame,time_s,pl_db,d_fs_m,d_bs_m,n_db'");
    PathLossTrace trace;
    trace.link_id = std::move(link_id);
    double t0 = 0.0;
    double t_last = 0.0;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const detail::CsvRow &row = table.rows[k];
        const double frame = detail::parse_number(row.fields[0], row.line);
        if (frame != static_cast<double>(k))
            throw ParseError(row.line, "frame numbers must count up from 0");
        const double t = detail::parse_number(row.fields[1], row.line);
        if (k == 0)
            t0 = t;
        t_last = t;
        trace.samples.push_back(detail::parse_number(row.fields[2], row.line));
        trace.d_fs.push_back(detail::parse_number(row.fields[3], row.line));
        trace.d_bs.push_back(detail::parse_number(row.fields[4], row.line));
        trace.n_db.push_back(detail::parse_number(row.fields[5], row.line));
        if (!std::isfinite(trace.samples.back()))
            throw ParseError(row.line, "path loss must be finite");
    }
    if (table.rows.size() < 2)
        throw Error(ErrorKind::insufficient_data, "trace needs at least two frames");
    trace.frame_time = detail::snap_interval((t_last - t0) / static_cast<double>(table.rows.size() - 1));
    if (!(trace.frame_time > 0.0))
        throw Error(ErrorKind::structural, "trace timestamps must increase");
    return trace;
}

PathLossTrace read_trace_csv(const std::filesystem::path &path, std::string link_id) {
    return parse_trace_csv(detail::read_text_file(path), std::move(link_id));
}

} // namespace wban
