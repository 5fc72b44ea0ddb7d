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

#ifndef LMIMO_CHANNEL_HPP
#define LMIMO_CHANNEL_HPP

#include "common.hpp"
#include "geometry.hpp"

#include <vector>

namespace lmimo
{
// ---------- Propagation ----------

inline double wavelength_for(double carrier_ghz)
{
    if (!(carrier_ghz > 0.0))
        throw DomainError("wavelength_for: carrier frequency must be positive");
    return speed_of_light / (carrier_ghz * 1e9);
}

/// Free-space path loss in dB, f in GHz and d in meters, with the customary 32.45 dB constant.
inline double fspl_db(double carrier_ghz, double distance_m)
{
    if (!(carrier_ghz > 0.0) || !(distance_m > 0.0))
        throw DomainError("fspl_db: frequency and distance must be positive");
    return 32.45 + 20.0 * std::log10(carrier_ghz) + 20.0 * std::log10(distance_m);
}

/// Free-space path loss (4 pi d f / c)^2 in dB without rounding the constant.
inline double fspl_exact_db(double carrier_ghz, double distance_m)
{
    if (!(carrier_ghz > 0.0) || !(distance_m > 0.0))
        throw DomainError("fspl_exact_db: frequency and distance must be positive");
    return 20.0 * std::log10(4.0 * pi * distance_m * carrier_ghz * 1e9 / speed_of_light);
}

/// Spherical-wave LoS channel from a user to every element of an array:
///   g_m = (lambda / 4 pi) exp(i 2 pi r_m / lambda) / r_m
/// The lambda / 4 pi factor makes |g_m|^2 the inverse free-space path loss.
inline CVector los_channel(const Point3 &user, const ArrayGeometry &array, double wavelength)
{
    if (!(wavelength > 0.0))
        throw DomainError("los_channel: wavelength must be positive");

    const double amp = wavelength / (4.0 * pi);
    const double k = 2.0 * pi / wavelength;
    CVector g(array.antenna_count());
    for (int m = 0; m < array.antenna_count(); ++m)
    {
        const double r = distance(user, array.positions[m]);
        if (!(r > 1e-9))
            throw SingularGeometryError("los_channel: user coincides with antenna " + std::to_string(m));
        g(m) = std::polar(amp / r, k * r);
    }
    return g;
}

// ---------- Link budget ----------

struct RadioParameters
{
    double carrier_ghz = 60.0;
    double bandwidth_hz = 50e6;
    double bs_power_w = 2.0;
    double mobile_power_w = 0.2;
    double bs_noise_figure_db = 9.0;
    double mobile_noise_figure_db = 9.0;
    double bs_antenna_gain_dbi = 0.0;
    double mobile_antenna_gain_dbi = 0.0;

    bool operator==(const RadioParameters &) const = default;
};

struct LinkBudget
{
    double rho_dl = 0.0; // BS radiated power over the mobile receiver noise power
    double rho_ul = 0.0; // mobile radiated power over the BS receiver noise power
    double carrier_ghz = 0.0;
    double wavelength = 0.0;
    double bandwidth_hz = 0.0;
    double dl_noise_dbm = 0.0;
    double ul_noise_dbm = 0.0;
};

inline constexpr double thermal_noise_dbm_per_hz = -174.0;

inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

inline LinkBudget link_budget(const RadioParameters &p)
{
    if (!(p.bs_power_w > 0.0) || !(p.mobile_power_w > 0.0))
        throw ConfigError("link_budget: radiated powers must be positive");
    if (!(p.bandwidth_hz > 0.0))
        throw ConfigError("link_budget: bandwidth must be positive");
    if (!(p.carrier_ghz > 0.0))
        throw ConfigError("link_budget: carrier frequency must be positive");

    LinkBudget lb;
    lb.carrier_ghz = p.carrier_ghz;
    lb.wavelength = wavelength_for(p.carrier_ghz);
    lb.bandwidth_hz = p.bandwidth_hz;

    const double floor_dbm = thermal_noise_dbm_per_hz + 10.0 * std::log10(p.bandwidth_hz);
    lb.dl_noise_dbm = floor_dbm + p.mobile_noise_figure_db;
    lb.ul_noise_dbm = floor_dbm + p.bs_noise_figure_db;

    const double gains_db = p.bs_antenna_gain_dbi + p.mobile_antenna_gain_dbi;
    lb.rho_dl = from_db(watts_to_dbm(p.bs_power_w) + gains_db - lb.dl_noise_dbm);
    lb.rho_ul = from_db(watts_to_dbm(p.mobile_power_w) + gains_db - lb.ul_noise_dbm);
    return lb;
}

// ---------- Channel set ----------

/// All L x L channel matrices. block(b, c) is the M x K matrix from the users served by
/// cell c to the array of base station b.
class ChannelSet
{
  public:
    ChannelSet() = default;

    ChannelSet(int cells, int antennas, int users)
        : cells_(cells), antennas_(antennas), users_(users),
          blocks_(static_cast<std::size_t>(cells) * cells, CMatrix::Zero(antennas, users))
    {
        if (cells < 1 || antennas < 1 || users < 1)
            throw ConfigError("ChannelSet: dimensions must be positive");
    }

    int cells() const { return cells_; }
    int antennas() const { return antennas_; }
    int users() const { return users_; }

    const CMatrix &block(int base_station, int user_cell) const { return blocks_[index(base_station, user_cell)]; }
    CMatrix &block(int base_station, int user_cell) { return blocks_[index(base_station, user_cell)]; }

    // Own-cell channel G_l^l.
    const CMatrix &own(int cell) const { return block(cell, cell); }

    /// Channel vector of user k of cell c as seen by base station b.
    auto column(int base_station, int user_cell, int user) const { return block(base_station, user_cell).col(user); }

    /// Multiplies every block by a common complex scalar.
    ChannelSet scaled(Complex c) const
    {
        ChannelSet out = *this;
        for (auto &b : out.blocks_)
            b *= c;
        return out;
    }

    bool operator==(const ChannelSet &o) const
    {
        if (cells_ != o.cells_ || antennas_ != o.antennas_ || users_ != o.users_)
            return false;
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] != o.blocks_[i])
                return false;
        return true;
    }

  private:
    std::size_t index(int b, int c) const
    {
        if (b < 0 || b >= cells_ || c < 0 || c >= cells_)
            throw std::out_of_range("ChannelSet: cell index out of range");
        return static_cast<std::size_t>(b) * cells_ + c;
    }

    int cells_ = 0;
    int antennas_ = 0;
    int users_ = 0;
    std::vector<CMatrix> blocks_;
};

inline ChannelSet build_channel_set(const CellLayout &layout, const std::vector<ArrayGeometry> &arrays,
                                    const UserDrop &drop, double wavelength)
{
    const int L = layout.cell_count();
    if (static_cast<int>(arrays.size()) != L || drop.cell_count() != L)
        throw ConfigError("build_channel_set: cell counts of layout, arrays and drop disagree");
    const int K = drop.users_per_cell();
    const int M = arrays.empty() ? 0 : arrays.front().antenna_count();
    for (const auto &a : arrays)
        if (a.antenna_count() != M)
            throw ConfigError("build_channel_set: arrays must have a common antenna count");
    for (const auto &cell : drop.positions)
        if (static_cast<int>(cell.size()) != K)
            throw ConfigError("build_channel_set: cells must have a common user count");

    ChannelSet set(L, M, K);
    for (int b = 0; b < L; ++b)
        for (int c = 0; c < L; ++c)
            for (int k = 0; k < K; ++k)
                set.block(b, c).col(k) = los_channel(drop.positions[c][k], arrays[b], wavelength);
    return set;
}

} // namespace lmimo

#endif
