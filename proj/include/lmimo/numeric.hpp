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

#ifndef LMIMO_NUMERIC_HPP
#define LMIMO_NUMERIC_HPP

#include "common.hpp"

#include <Eigen/Eigenvalues>

#include <limits>

namespace lmimo
{
inline constexpr double gram_condition_limit = 1e12;

// a^* b with extended-precision accumulation.
template <typename A, typename B>
Complex inner(const Eigen::MatrixBase<A> &a, const Eigen::MatrixBase<B> &b)
{
    long double re = 0.0L, im = 0.0L;
    for (Eigen::Index m = 0; m < a.size(); ++m)
    {
        const long double ar = a(m).real(), ai = a(m).imag();
        const long double br = b(m).real(), bi = b(m).imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

template <typename A>
double squared_norm(const Eigen::MatrixBase<A> &a)
{
    long double s = 0.0L;
    for (Eigen::Index m = 0; m < a.size(); ++m)
        s += static_cast<long double>(std::norm(a(m)));
    return static_cast<double>(s);
}

/// A^* B, each entry an extended-precision inner product of columns.
inline CMatrix cross_gram(const CMatrix &a, const CMatrix &b)
{
    CMatrix out(a.cols(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j)
        for (Eigen::Index i = 0; i < a.cols(); ++i)
            out(i, j) = inner(a.col(i), b.col(j));
    return out;
}

/// G^* G, Hermitian by construction (upper triangle computed, lower mirrored, real diagonal).
inline CMatrix gram(const CMatrix &g)
{
    const Eigen::Index k = g.cols();
    CMatrix out(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
    {
        out(j, j) = squared_norm(g.col(j));
        for (Eigen::Index i = 0; i < j; ++i)
        {
            out(i, j) = inner(g.col(i), g.col(j));
            out(j, i) = std::conj(out(i, j));
        }
    }
    return out;
}

// Gram matrix of a channel matrix with its inverse and spectral condition number.
struct GramInverse
{
    CMatrix gram;
    CMatrix inverse;
    RVector inverse_diagonal; // [(G^(*))^{-1}]_{k,k}, real and positive
    double condition = 0.0;
};

inline GramInverse invert_gram(const CMatrix &g, double condition_limit = gram_condition_limit)
{
    if (g.cols() > g.rows())
        throw SingularChannelError("invert_gram: more users than antennas");

    GramInverse out;
    out.gram = gram(g);

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(out.gram, Eigen::EigenvaluesOnly);
    const RVector &ev = eig.eigenvalues();
    const double lo = ev.minCoeff(), hi = ev.maxCoeff();
    out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(out.condition <= condition_limit))
        throw SingularChannelError("invert_gram: Gram matrix condition estimate " + std::to_string(out.condition) +
                                   " exceeds limit");

    Eigen::LLT<CMatrix> llt(out.gram);
    if (llt.info() != Eigen::Success)
        throw SingularChannelError("invert_gram: Cholesky factorization failed");
    out.inverse = llt.solve(CMatrix::Identity(g.cols(), g.cols()));
    out.inverse = 0.5 * (out.inverse + out.inverse.adjoint()).eval();
    out.inverse_diagonal = out.inverse.diagonal().real();
    return out;
}

} // namespace lmimo

#endif
