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

#ifndef LMIMO_RNG_HPP
#define LMIMO_RNG_HPP

#include "common.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lmimo
{
using Engine = std::mt19937_64;

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based seed split: the child seed depends only on the master seed and the
/// counter path, never on the order in which children are requested.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = mix64(master);
    for (auto c : path)
        s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
    return s;
}

// Circularly-symmetric complex Gaussian with unit variance, CN(0, 1).
class ComplexGaussian
{
  public:
    Complex operator()(Engine &eng) { return {normal_(eng), normal_(eng)}; }

    void fill(Engine &eng, CMatrix &m)
    {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                m(i, j) = (*this)(eng);
    }

  private:
    std::normal_distribution<double> normal_{0.0, std::sqrt(0.5)};
};

} // namespace lmimo

#endif
