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

#include <lmimo/geometry.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace lmimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
constexpr double lambda60 = 0.004996540966666667;
}

TEST_CASE("hex layout: single cell sits at the origin", "[geometry]")
{
    const auto lay = hex_centers(1, 200.0);
    REQUIRE(lay.cell_count() == 1);
    CHECK(lay.centers[0].x == 0.0);
    CHECK(lay.centers[0].y == 0.0);
}

TEST_CASE("hex layout: seven cells tile with inter-site distance sqrt(3) R", "[geometry]")
{
    const double R = 200.0;
    const auto lay = hex_centers(7, R);
    REQUIRE(lay.cell_count() == 7);
    CHECK(lay.centers[0].x == 0.0);
    CHECK(lay.centers[0].y == 0.0);
    for (int i = 1; i < 7; ++i)
    {
        CHECK_THAT(distance(lay.centers[0], lay.centers[i]), WithinAbs(346.41016151377545, 1e-9));
        const int j = i == 6 ? 1 : i + 1;
        CHECK_THAT(distance(lay.centers[i], lay.centers[j]), WithinAbs(std::sqrt(3.0) * R, 1e-9));
    }
    // Neighbouring hexagons share an edge: the midpoint between two centres is on both boundaries.
    for (int i = 1; i < 7; ++i)
    {
        const Point2 mid{0.5 * lay.centers[i].x, 0.5 * lay.centers[i].y};
        CHECK(in_hexagon(lay.centers[0], R, mid.x, mid.y));
        CHECK(in_hexagon(lay.centers[i], R, mid.x, mid.y));
    }
}

TEST_CASE("hex layout: unsupported inputs", "[geometry][errors]")
{
    CHECK_THROWS_AS(hex_centers(3, 200.0), ConfigError);
    CHECK_THROWS_AS(hex_centers(0, 200.0), ConfigError);
    CHECK_THROWS_AS(hex_centers(7, 0.0), ConfigError);
    CHECK_THROWS_AS(hex_centers(7, -1.0), ConfigError);
}

TEST_CASE("hexagon membership", "[geometry]")
{
    const Point2 c{10.0, -5.0};
    const double R = 2.0;
    CHECK(in_hexagon(c, R, 10.0, -5.0));
    CHECK(in_hexagon(c, R, 12.0, -5.0));           // vertex
    CHECK_FALSE(in_hexagon(c, R, 12.01, -5.0));
    CHECK(in_hexagon(c, R, 10.0, -5.0 + std::sqrt(3.0))); // edge midpoint
    CHECK_FALSE(in_hexagon(c, R, 10.0, -5.0 + std::sqrt(3.0) + 1e-6));
    CHECK_FALSE(in_hexagon(c, R, 11.9, -5.0 + 1.7)); // outside the slanted edge
}

TEST_CASE("circular array: radius and aperture", "[geometry]")
{
    const auto a = circular_array(4096, lambda60, 30.0, {0.0, 0.0});
    REQUIRE(a.antenna_count() == 4096);
    double rmax = 0.0;
    for (const auto &p : a.positions)
    {
        rmax = std::max(rmax, std::hypot(p.x, p.y));
        CHECK(p.z == 30.0);
    }
    const double diameter = 2.0 * rmax;
    CHECK_THAT(diameter, WithinRel(3.2572382953724195, 1e-12));
    CHECK_THAT(diameter, WithinAbs(3.26, 0.01));
}

TEST_CASE("circular array: four elements on a circle of radius lambda/pi", "[geometry]")
{
    const double lambda = 2.0 * pi; // radius = 4 * 2pi / (4 pi) = 2
    const auto a = circular_array(4, lambda, 1.0, {1.0, 2.0});
    const double expected[4][2] = {{3.0, 2.0}, {1.0, 4.0}, {-1.0, 2.0}, {1.0, 0.0}};
    for (int m = 0; m < 4; ++m)
    {
        CHECK_THAT(a.positions[m].x, WithinAbs(expected[m][0], 1e-12));
        CHECK_THAT(a.positions[m].y, WithinAbs(expected[m][1], 1e-12));
    }
}

TEST_CASE("circular array: single element", "[geometry]")
{
    const auto a = circular_array(1, 1.0, 5.0, {0.0, 0.0});
    REQUIRE(a.antenna_count() == 1);
    CHECK_THAT(a.positions[0].x, WithinAbs(1.0 / (4.0 * pi), 1e-15));
    CHECK_THAT(a.positions[0].y, WithinAbs(0.0, 1e-15));
}

TEST_CASE("circular array: adjacent elements are half a wavelength apart along the arc", "[geometry][property]")
{
    for (int M : {2, 3, 8, 64, 4096})
        for (double lambda : {lambda60, 0.1, 1.0})
        {
            const auto a = circular_array(M, lambda, 0.0, {3.0, -4.0});
            const double r = std::hypot(a.positions[0].x - 3.0, a.positions[0].y + 4.0);
            const double arc = r * 2.0 * pi / M;
            CHECK_THAT(arc, WithinRel(lambda / 2.0, 1e-12));
            const double chord = 2.0 * r * std::sin(pi / M);
            for (int m = 0; m < M; ++m)
            {
                const auto &p = a.positions[m];
                const auto &q = a.positions[(m + 1) % M];
                CHECK_THAT(std::hypot(p.x - q.x, p.y - q.y), WithinRel(chord, 1e-9));
            }
        }
}

TEST_CASE("circular array: invalid inputs", "[geometry][errors]")
{
    CHECK_THROWS_AS(circular_array(0, 1.0, 0.0, {}), ConfigError);
    CHECK_THROWS_AS(circular_array(4, 0.0, 0.0, {}), ConfigError);
    CHECK_THROWS_AS(circular_array(4, -1.0, 0.0, {}), ConfigError);
}

TEST_CASE("user drop: counts, cell membership, exclusion radius, height", "[geometry][property]")
{
    const double R = 200.0;
    const auto lay = hex_centers(7, R);
    for (std::uint64_t seed : {1ull, 2ull, 99ull})
    {
        const auto drop = drop_users(lay, 18, 10.0, 1.5, seed);
        REQUIRE(drop.cell_count() == 7);
        REQUIRE(drop.users_per_cell() == 18);
        for (int l = 0; l < 7; ++l)
            for (const auto &u : drop.positions[l])
            {
                CHECK(in_hexagon(lay.centers[l], R, u.x, u.y));
                CHECK(horizontal_distance(u, lay.centers[l]) >= 10.0);
                CHECK(u.z == 1.5);
            }
    }
}

TEST_CASE("user drop: deterministic in the seed", "[geometry][determinism]")
{
    const auto lay = hex_centers(7, 200.0);
    const auto a = drop_users(lay, 5, 10.0, 1.5, 42);
    const auto b = drop_users(lay, 5, 10.0, 1.5, 42);
    const auto c = drop_users(lay, 5, 10.0, 1.5, 43);
    bool same = true, differs = false;
    for (int l = 0; l < 7; ++l)
        for (int k = 0; k < 5; ++k)
        {
            same = same && a.positions[l][k].x == b.positions[l][k].x && a.positions[l][k].y == b.positions[l][k].y;
            differs = differs || a.positions[l][k].x != c.positions[l][k].x;
        }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("user drop: uniform over the hexagon", "[geometry][statistics]")
{
    // With no exclusion zone the mean position is the centre and E[x^2] = E[y^2] = 5 R^2 / 24.
    const double R = 1.0;
    const int n = 100000;
    const auto lay = hex_centers(1, R);
    const auto drop = drop_users(lay, n, 0.0, 0.0, 7);
    double sx = 0, sy = 0, sxx = 0, syy = 0;
    for (const auto &u : drop.positions[0])
    {
        sx += u.x;
        sy += u.y;
        sxx += u.x * u.x;
        syy += u.y * u.y;
    }
    const double mx = sx / n, my = sy / n;
    const double vx = sxx / n - mx * mx, vy = syy / n - my * my;
    CHECK(std::abs(mx) < 3.0 * std::sqrt(vx / n));
    CHECK(std::abs(my) < 3.0 * std::sqrt(vy / n));
    const double second = 5.0 * R * R / 24.0;
    CHECK_THAT(vx, WithinAbs(second, 0.02 * second));
    CHECK_THAT(vy, WithinAbs(second, 0.02 * second));
}

TEST_CASE("user drop: invalid inputs", "[geometry][errors]")
{
    const auto lay = hex_centers(1, 10.0);
    CHECK_THROWS_AS(drop_users(lay, 0, 1.0, 1.5, 1), ConfigError);
    CHECK_THROWS_AS(drop_users(lay, 4, 10.0, 1.5, 1), ConfigError);
    CHECK_THROWS_AS(drop_users(lay, 4, 12.0, 1.5, 1), ConfigError);
}
