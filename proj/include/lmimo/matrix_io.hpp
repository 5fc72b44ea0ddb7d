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

// Plain-text matrix dump used for cross-implementation diffing.
//
//   # lmimo-matrix-dump v1
//   matrix <name> <rows> <cols>
//   <re> <im> <re> <im> ...      one line per row, row-major, %.17g
//   ...
//
// A channel set is written as L*L blocks named G:<user_cell>:<base_station>, user cell in the
// outer loop. Indices are zero-based.

#ifndef LMIMO_MATRIX_IO_HPP
#define LMIMO_MATRIX_IO_HPP

#include "channel.hpp"
#include "common.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lmimo
{
inline constexpr const char *dump_magic = "# lmimo-matrix-dump v1";

struct NamedMatrix
{
    std::string name;
    CMatrix value;
};

namespace detail
{
inline void put_double(std::ostream &os, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}
} // namespace detail

inline void write_matrix(std::ostream &os, const std::string &name, const CMatrix &m)
{
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
        throw ConfigError("write_matrix: name must be a nonempty token");
    os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            if (j)
                os << ' ';
            detail::put_double(os, m(i, j).real());
            os << ' ';
            detail::put_double(os, m(i, j).imag());
        }
        os << '\n';
    }
}

inline void write_matrix(std::ostream &os, const std::string &name, const RMatrix &m)
{
    write_matrix(os, name, CMatrix(m.cast<Complex>()));
}

inline std::string channel_block_name(int user_cell, int base_station)
{
    return "G:" + std::to_string(user_cell) + ":" + std::to_string(base_station);
}

inline void write_channel_set(std::ostream &os, const ChannelSet &set)
{
    os << dump_magic << '\n';
    for (int c = 0; c < set.cells(); ++c)
        for (int b = 0; b < set.cells(); ++b)
            write_matrix(os, channel_block_name(c, b), set.block(b, c));
}

inline std::vector<NamedMatrix> read_dump(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line != dump_magic)
        throw ConfigError("read_dump: missing header line");

    std::vector<NamedMatrix> out;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::istringstream hs(line);
        std::string tag;
        NamedMatrix nm;
        Eigen::Index rows = 0, cols = 0;
        if (!(hs >> tag >> nm.name >> rows >> cols) || tag != "matrix" || rows < 0 || cols < 0)
            throw ConfigError("read_dump: malformed matrix header '" + line + "'");
        nm.value.resize(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
        {
            if (!std::getline(is, line))
                throw ConfigError("read_dump: truncated matrix " + nm.name);
            std::istringstream rs(line);
            for (Eigen::Index j = 0; j < cols; ++j)
            {
                double re = 0.0, im = 0.0;
                if (!(rs >> re >> im))
                    throw ConfigError("read_dump: short row in matrix " + nm.name);
                nm.value(i, j) = {re, im};
            }
        }
        out.push_back(std::move(nm));
    }
    return out;
}

inline ChannelSet read_channel_set(std::istream &is)
{
    auto mats = read_dump(is);
    int L = 0;
    while (L * L < static_cast<int>(mats.size()))
        ++L;
    if (L == 0 || L * L != static_cast<int>(mats.size()))
        throw ConfigError("read_channel_set: block count is not a square");
    ChannelSet set(L, static_cast<int>(mats[0].value.rows()), static_cast<int>(mats[0].value.cols()));
    std::size_t i = 0;
    for (int c = 0; c < L; ++c)
        for (int b = 0; b < L; ++b, ++i)
        {
            if (mats[i].name != channel_block_name(c, b))
                throw ConfigError("read_channel_set: unexpected block " + mats[i].name);
            if (mats[i].value.rows() != set.antennas() || mats[i].value.cols() != set.users())
                throw ConfigError("read_channel_set: inconsistent block dimensions");
            set.block(b, c) = mats[i].value;
        }
    return set;
}

} // namespace lmimo

#endif
