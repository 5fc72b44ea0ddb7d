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

#ifndef LMIMO_COMMON_HPP
#define LMIMO_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lmimo
{
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double pi = 3.14159265358979323846;

enum class Scheme
{
    MR,
    ZF
};

enum class Link
{
    Downlink,
    Uplink
};

// Per-cell power constraint: total (l1 norm, downlink) or individual (l-inf norm, uplink).
enum class PowerNorm
{
    Total,
    Individual
};

inline constexpr PowerNorm norm_for(Link link)
{
    return link == Link::Downlink ? PowerNorm::Total : PowerNorm::Individual;
}

inline std::string_view to_string(Scheme s) { return s == Scheme::MR ? "MR" : "ZF"; }
inline std::string_view to_string(Link l) { return l == Link::Downlink ? "DL" : "UL"; }

// ---------- Errors ----------

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Invalid or unsupported scenario parameters.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

// Argument outside the mathematical domain of a function (e.g. log of a nonpositive number).
class DomainError : public Error
{
  public:
    using Error::Error;
};

// User position coincides with an antenna element.
class SingularGeometryError : public Error
{
  public:
    using Error::Error;
};

// A channel column is identically zero.
class DegenerateChannelError : public Error
{
  public:
    using Error::Error;
};

// Gram matrix is rank deficient (condition estimate above the threshold).
class SingularChannelError : public Error
{
  public:
    using Error::Error;
};

// Power allocation does not match the link's constraint kind or violates it.
class AllocationError : public Error
{
  public:
    using Error::Error;
};

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace lmimo

#endif
