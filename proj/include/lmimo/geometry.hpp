// SPDX-License-Identifier: Apache-2.0
//
// lmimo - multi-cell Massive MIMO in line-of-sight: SINR closed forms and power control
// Copyright (C) 2026 The lmimo Authors
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

#ifndef LMIMO_GEOMETRY_HPP
#define LMIMO_GEOMETRY_HPP

#include "common.hpp"
#include "rng.hpp"

#include <cstdint>
#include <vector>

namespace lmimo
{
struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Point2 &a, const Point2 &b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance(const Point3 &a, const Point3 &b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double horizontal_distance(const Point3 &a, const Point2 &b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Flat-top hexagonal cells; radius is center-to-vertex.
struct CellLayout
{
    double cell_radius = 0.0;
    std::vector<Point2> centers;

    int cell_count() const { return static_cast<int>(centers.size()); }
};

struct ArrayGeometry
{
    std::vector<Point3> positions;
    double height = 0.0;

    int antenna_count() const { return static_cast<int>(positions.size()); }
};

struct UserDrop
{
    std::vector<std::vector<Point3>> positions; // [cell][user]
    std::uint64_t seed = 0;

    int cell_count() const { return static_cast<int>(positions.size()); }
    int users_per_cell() const { return positions.empty() ? 0 : static_cast<int>(positions.front().size()); }
};

/// Single cell at the origin (L = 1) or the 7-cell cluster (L = 7): the origin plus six
/// neighbours at sqrt(3) R in directions 30 + 60 k degrees.
inline CellLayout hex_centers(int cell_count, double cell_radius)
{
    if (cell_count != 1 && cell_count != 7)
        throw ConfigError("hex_centers: only 1 or 7 cells are supported, got " + std::to_string(cell_count));
    if (!(cell_radius > 0.0))
        throw ConfigError("hex_centers: cell radius must be positive");

    CellLayout layout;
    layout.cell_radius = cell_radius;
    layout.centers.push_back({0.0, 0.0});
    if (cell_count == 7)
    {
        const double d = std::sqrt(3.0) * cell_radius;
        for (int k = 0; k < 6; ++k)
        {
            const double a = (30.0 + 60.0 * k) * pi / 180.0;
            layout.centers.push_back({d * std::cos(a), d * std::sin(a)});
        }
    }
    return layout;
}

// Half-plane test for a flat-top hexagon of circumradius R centred at `center`.
inline bool in_hexagon(const Point2 &center, double radius, double x, double y)
{
    const double u = std::abs(x - center.x);
    const double v = std::abs(y - center.y);
    const double s3 = std::sqrt(3.0);
    const double tol = 1e-12 * radius;
    return v <= 0.5 * s3 * radius + tol && s3 * u + v <= s3 * radius + tol;
}

/// Uniform circular array whose consecutive elements are half a wavelength apart along the arc,
/// i.e. radius M lambda / (4 pi), horizontal at the given height.
inline ArrayGeometry circular_array(int antenna_count, double wavelength, double height, const Point2 &center)
{
    if (antenna_count < 1)
        throw ConfigError("circular_array: need at least one antenna");
    if (!(wavelength > 0.0))
        throw ConfigError("circular_array: wavelength must be positive");

    ArrayGeometry array;
    array.height = height;
    array.positions.reserve(antenna_count);
    const double radius = antenna_count * wavelength / (4.0 * pi);
    for (int m = 0; m < antenna_count; ++m)
    {
        const double a = 2.0 * pi * m / antenna_count;
        array.positions.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a), height});
    }
    return array;
}

/// Drops `users_per_cell` users uniformly in every hexagon (rejection from the bounding box),
/// redrawing any point closer than `min_distance` horizontally to the cell's base station.
inline UserDrop drop_users(const CellLayout &layout, int users_per_cell, double min_distance, double user_height,
                           std::uint64_t seed)
{
    if (users_per_cell < 1)
        throw ConfigError("drop_users: need at least one user per cell");
    if (!(min_distance < layout.cell_radius))
        throw ConfigError("drop_users: minimum distance must be smaller than the cell radius");

    const double R = layout.cell_radius;
    const double half_height = 0.5 * std::sqrt(3.0) * R;

    Engine eng(seed);
    std::uniform_real_distribution<double> ux(-R, R);
    std::uniform_real_distribution<double> uy(-half_height, half_height);

    UserDrop drop;
    drop.seed = seed;
    drop.positions.resize(layout.centers.size());
    for (std::size_t l = 0; l < layout.centers.size(); ++l)
    {
        const Point2 &c = layout.centers[l];
        auto &cell = drop.positions[l];
        cell.reserve(users_per_cell);
        while (static_cast<int>(cell.size()) < users_per_cell)
        {
            const double x = c.x + ux(eng);
            const double y = c.y + uy(eng);
            if (!in_hexagon(c, R, x, y))
                continue;
            if (std::hypot(x - c.x, y - c.y) < min_distance)
                continue;
            cell.push_back({x, y, user_height});
        }
    }
    return drop;
}

} // namespace lmimo

#endif
