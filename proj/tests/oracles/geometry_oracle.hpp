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


// Brute-force references for the torso geometry: a fixed-step march along the
// Tx-Rx segment, and Dijkstra over a meshed cylinder surface.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "wban/kinematics.hpp"

namespace wban::oracle {

struct MarchResult {
    bool intersects = false;
    double d_fs = 0.0;
    double chord = 0.0;
};

struct Local {
    double rho;
    double theta;
    double z;
};

inline Local local_coords(const Vec3 &p, const BodyCylinder &cyl) {
    const Vec3 u = cyl.axis.unitOrthogonal();
    const Vec3 v = cyl.axis.cross(u);
    const Vec3 q = p - cyl.base_center;
    return {std::hypot(q.dot(u), q.dot(v)), std::atan2(q.dot(v), q.dot(u)), q.dot(cyl.axis)};
}

struct GeometryCase {
    BodyCylinder cyl;
    Vec3 tx;
    Vec3 rx;
};

/// Random cylinder with Tx and Rx placed around it at up to half a meter from
/// the surface and up to 20 cm beyond either cap, so lateral crossings, cap
/// crossings and misses all occur.
inline GeometryCase random_case(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * 0.5 * (u(rng) + 1.0); };
    GeometryCase c;
    Vec3 axis;
    do {
        axis = {u(rng), u(rng), u(rng)};
    } while (axis.norm() < 0.1);
    c.cyl.axis = axis.normalized();
    c.cyl.base_center = {uni(-1, 1), uni(-1, 1), uni(-1, 1)};
    c.cyl.radius = uni(0.08, 0.22);
    c.cyl.height = uni(0.35, 0.8);
    const Vec3 e1 = c.cyl.axis.unitOrthogonal();
    const Vec3 e2 = c.cyl.axis.cross(e1);
    auto around = [&](double phi) {
        const double rho = c.cyl.radius + uni(0.01, 0.5);
        const double z = uni(-0.2, c.cyl.height + 0.2);
        return Vec3(c.cyl.base_center + rho * (std::cos(phi) * e1 + std::sin(phi) * e2) + z * c.cyl.axis);
    };
    const double phi = uni(-std::numbers::pi, std::numbers::pi);
    c.tx = around(phi);
    c.rx = around(phi + std::numbers::pi + uni(-1.5, 1.5));
    return c;
}

/// Walks the segment in `step` increments. A shadowed path must enter and
/// leave through the lateral surface, i.e. the samples on either side of the
/// inside run are within the cylinder's height span.
inline MarchResult march(const Vec3 &tx, const Vec3 &rx, const BodyCylinder &cyl, double step = 1e-5,
                         double min_chord = 1e-3) {
    const double length = (rx - tx).norm();
    const auto n = static_cast<std::size_t>(std::ceil(length / step));
    const Vec3 d = (rx - tx) / static_cast<double>(n);
    const Vec3 f = tx - cyl.base_center;
    const double r2 = cyl.radius * cyl.radius;

    auto axial = [&](std::size_t k) { return (f + static_cast<double>(k) * d).dot(cyl.axis); };
    auto inside = [&](std::size_t k) {
        const Vec3 q = f + static_cast<double>(k) * d;
        const double z = q.dot(cyl.axis);
        return z >= 0.0 && z <= cyl.height && (q - z * cyl.axis).squaredNorm() < r2;
    };

    std::size_t first = n + 1;
    std::size_t last = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (inside(k)) {
            first = std::min(first, k);
            last = k;
        }
    }
    MarchResult res;
    res.d_fs = length;
    if (first > n || first == 0 || last == n)
        return res;
    const double z_in = axial(first - 1);
    const double z_out = axial(last + 1);
    const bool lateral = z_in >= 0.0 && z_in <= cyl.height && z_out >= 0.0 && z_out <= cyl.height;
    // The run spans (last - first) steps plus up to one step at each edge.
    const double chord = static_cast<double>(last - first + 1) * d.norm();
    if (!lateral || chord < min_chord)
        return res;
    res.intersects = true;
    res.chord = chord;
    res.d_fs = length - chord;
    return res;
}

/// Shortest path between two surface points over a periodic (theta, z) grid
/// with long-range neighbour stencils; edge weights are straight 3-D chords.
/// The grid is anchored on p1 and its angular resolution is chosen so p2 falls
/// as close to a node as possible.
inline double mesh_geodesic(const Vec3 &p1, const Vec3 &p2, const BodyCylinder &cyl, int stencil = 7,
                            double target_cell = 2.5e-3) {
    const Local a = local_coords(p1, cyl);
    const Local b = local_coords(p2, cyl);
    const double two_pi = 2.0 * std::numbers::pi;
    double dtheta = std::fmod(b.theta - a.theta, two_pi);
    if (dtheta < 0.0)
        dtheta += two_pi;

    const int m_nominal = std::max(64, static_cast<int>(std::lround(two_pi * cyl.radius / target_cell)));
    int m_cols = m_nominal;
    double best = std::numeric_limits<double>::infinity();
    for (int m = m_nominal - m_nominal / 8; m <= m_nominal + m_nominal / 8; ++m) {
        const double idx = dtheta / two_pi * m;
        const double err = std::abs(idx - std::round(idx));
        if (err < best) {
            best = err;
            m_cols = m;
        }
    }
    const int target_col = static_cast<int>(std::lround(dtheta / two_pi * m_cols)) % m_cols;

    const double dz = b.z - a.z;
    const int spans = std::max(1, static_cast<int>(std::lround(std::abs(dz) / target_cell)));
    const double z_step = std::abs(dz) > 0.0 ? dz / spans : target_cell;
    const int margin = 3;
    const int rows = spans + 1 + 2 * margin;
    const int start_row = margin;
    const int target_row = margin + (std::abs(dz) > 0.0 ? spans : 0);

    std::vector<std::pair<int, int>> moves;
    for (int di = -stencil; di <= stencil; ++di)
        for (int dj = -stencil; dj <= stencil; ++dj)
            if ((di != 0 || dj != 0) && std::gcd(std::abs(di), std::abs(dj)) == 1)
                moves.emplace_back(di, dj);

    const double r = cyl.radius;
    const double col_angle = two_pi / m_cols;
    auto edge = [&](int dcol, int drow) {
        const double ang = col_angle * dcol;
        const double chord_xy = 2.0 * r * std::sin(std::abs(ang) / 2.0);
        return std::hypot(chord_xy, z_step * drow);
    };
    std::vector<double> weights;
    weights.reserve(moves.size());
    for (const auto &[dc, dr] : moves)
        weights.push_back(edge(dc, dr));

    const auto node = [m_cols](int row, int col) { return static_cast<std::size_t>(row) * m_cols + col; };
    std::vector<double> dist(static_cast<std::size_t>(rows) * m_cols, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const std::size_t src = node(start_row, 0);
    const std::size_t dst = node(target_row, target_col);
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
        const auto [du, u] = pq.top();
        pq.pop();
        if (du > dist[u])
            continue;
        if (u == dst)
            return du;
        const int row = static_cast<int>(u / m_cols);
        const int col = static_cast<int>(u % m_cols);
        for (std::size_t k = 0; k < moves.size(); ++k) {
            const int nr = row + moves[k].second;
            if (nr < 0 || nr >= rows)
                continue;
            const int nc = ((col + moves[k].first) % m_cols + m_cols) % m_cols;
            const std::size_t v = node(nr, nc);
            const double cand = du + weights[k];
            if (cand < dist[v]) {
                dist[v] = cand;
                pq.emplace(cand, v);
            }
        }
    }
    return dist[dst];
}

} // namespace wban::oracle
