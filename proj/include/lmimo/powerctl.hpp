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

// Power control for SINR targets.
//
// Every closed-form SINR has the shape SINR_j = [D eta]_j / (1 + [C eta]_j) over the stacked
// (cell-major) index j = l K + k, with D diagonal and C nonnegative. A target vector zeta is met
// iff (D - diag(zeta) C) eta = zeta has a solution eta >= 0 whose per-cell norm is at most 1
// (l1 downlink, l-inf uplink).

#ifndef LMIMO_POWERCTL_HPP
#define LMIMO_POWERCTL_HPP

#include "channel.hpp"
#include "common.hpp"
#include "linproc.hpp"
#include "numeric.hpp"

#include <Eigen/LU>

#include <limits>
#include <vector>

namespace lmimo
{
struct PcSystem
{
    Scheme scheme = Scheme::MR;
    Link link = Link::Downlink;
    int cells = 0;
    int users = 0;
    RVector d; // diagonal of D
    RMatrix c;

    PowerNorm norm() const { return norm_for(link); }
    Eigen::Index size() const { return d.size(); }
    RMatrix D() const { return d.asDiagonal(); }

    // [D eta]_j / (1 + [C eta]_j)
    RVector sinr(const RVector &eta) const { return (d.array() * eta.array() / (1.0 + (c * eta).array())).matrix(); }
};

namespace detail
{
inline RVector stack(const RMatrix &per_cell)
{
    RVector out(per_cell.size());
    for (Eigen::Index l = 0; l < per_cell.rows(); ++l)
        out.segment(l * per_cell.cols(), per_cell.cols()) = per_cell.row(l).transpose();
    return out;
}
} // namespace detail

/// Builds D and C for one (scheme, link):
///   MR DL: D = rho diag(v), C = rho |C_d - diag(v)|^2 diag(v)^{-1},  C_d blocks (G_l^{l'})^* G_{l'}^{l'}
///   MR UL: D = rho diag(v), C = rho diag(v)^{-1} |C_u - diag(v)|^2,  C_u blocks (G_l^l)^* G_{l'}^l
///   ZF DL: D = rho diag(w), C = rho C_d diag(w),  C_d blocks |(B_l^{l'})^*|^2, zero diagonal blocks
///   ZF UL: D = rho diag(w), C = rho diag(w) C_u,  C_u blocks |B_{l'}^l|^2,     zero diagonal blocks
/// with v the own-channel gains ||g_{l,k}^l||^2 and w = 1 / [(G_l^{l(*)})^{-1}]_{k,k}.
inline PcSystem build_pc_system(const ChannelSet &channels, Scheme scheme, Link link, double rho,
                                const std::vector<GramInverse> &grams = {})
{
    const int L = channels.cells(), K = channels.users(), n = L * K;
    PcSystem sys{scheme, link, L, K, RVector(n), RMatrix::Zero(n, n)};

    if (scheme == Scheme::MR)
    {
        const RVector v = detail::stack(own_channel_gains(channels));
        sys.d = rho * v;
        for (int l = 0; l < L; ++l)
            for (int lp = 0; lp < L; ++lp)
            {
                const CMatrix blk = link == Link::Downlink ? cross_gram(channels.block(lp, l), channels.own(lp))
                                                           : cross_gram(channels.own(l), channels.block(l, lp));
                sys.c.block(l * K, lp * K, K, K) = blk.cwiseAbs2();
            }
        sys.c.diagonal().setZero();
        if (link == Link::Downlink)
            sys.c = rho * sys.c * v.cwiseInverse().asDiagonal();
        else
            sys.c = rho * v.cwiseInverse().asDiagonal() * sys.c;
        return sys;
    }

    const std::vector<GramInverse> local = grams.empty() ? invert_grams(channels) : std::vector<GramInverse>{};
    const auto &gi = grams.empty() ? local : grams;

    RVector w(n);
    for (int l = 0; l < L; ++l)
        w.segment(l * K, K) = gi[l].inverse_diagonal.cwiseInverse();
    sys.d = rho * w;

    for (int l = 0; l < L; ++l)
        for (int lp = 0; lp < L; ++lp)
        {
            if (l == lp)
                continue;
            // DL: |(B_l^{l'})^*|^2 (this cell's users seen through cell l''s ZF);  UL: |B_{l'}^l|^2
            const CMatrix b = link == Link::Downlink ? CMatrix(leakage_matrix(channels, gi, lp, l).adjoint())
                                                     : leakage_matrix(channels, gi, l, lp);
            sys.c.block(l * K, lp * K, K, K) = b.cwiseAbs2();
        }
    if (link == Link::Downlink)
        sys.c = rho * sys.c * w.asDiagonal();
    else
        sys.c = rho * w.asDiagonal() * sys.c;
    return sys;
}

enum class PcStatus
{
    Feasible,
    SingularSystem, // (D - D_zeta C) singular or solve residual too large
    NegativePower,  // solution has a negative entry
    PowerExceeded   // a cell violates its norm constraint
};

inline std::string_view to_string(PcStatus s)
{
    switch (s)
    {
    case PcStatus::Feasible:
        return "feasible";
    case PcStatus::SingularSystem:
        return "infeasible (singular system)";
    case PcStatus::NegativePower:
        return "infeasible (negative power)";
    case PcStatus::PowerExceeded:
        return "infeasible (power constraint)";
    }
    return "?";
}

struct PcSolution
{
    RVector eta; // stacked, cell-major
    PcStatus status = PcStatus::SingularSystem;
    RVector cell_norms;
    RVector achieved; // [D eta] / (1 + [C eta])

    bool feasible() const { return status == PcStatus::Feasible; }
};

inline constexpr double negativity_slack = 1e-12;
inline constexpr double solve_residual_limit = 1e-8;

inline PcSolution solve_targets(const PcSystem &sys, const RVector &targets)
{
    const Eigen::Index n = sys.size();
    if (targets.size() != n)
        throw AllocationError("solve_targets: target vector has the wrong length");
    if ((targets.array() < 0.0).any() || !targets.allFinite())
        throw AllocationError("solve_targets: targets must be finite and nonnegative");

    PcSolution sol;
    sol.eta = RVector::Zero(n);
    sol.cell_norms = RVector::Zero(sys.cells);
    sol.achieved = RVector::Zero(n);

    const RMatrix a = RMatrix(sys.d.asDiagonal()) - targets.asDiagonal() * sys.c;
    Eigen::FullPivLU<RMatrix> lu(a);
    if (!lu.isInvertible())
        return sol;

    RVector eta = lu.solve(targets);
    const double scale = std::max(targets.norm(), std::numeric_limits<double>::min());
    if (!eta.allFinite() || (a * eta - targets).norm() > solve_residual_limit * scale)
        return sol;

    sol.eta = eta;
    if (eta.minCoeff() < -negativity_slack)
    {
        sol.status = PcStatus::NegativePower;
        return sol;
    }
    sol.eta = eta.cwiseMax(0.0);
    for (int l = 0; l < sys.cells; ++l)
        sol.cell_norms(l) = apply_norm(sys.norm(), sol.eta.segment(l * sys.users, sys.users));
    sol.achieved = sys.sinr(sol.eta);
    sol.status = (sol.cell_norms.array() <= 1.0 + power_norm_slack).all() ? PcStatus::Feasible
                                                                            : PcStatus::PowerExceeded;
    return sol;
}

inline PowerAllocation to_allocation(const PcSystem &sys, const PcSolution &sol)
{
    return PowerAllocation::from_stacked(sys.norm(), sol.eta, sys.users);
}

// ---------- Max-min fairness ----------

struct BisectionProbe
{
    double target;
    bool feasible;
};

struct MaxMinResult
{
    double target = 0.0; // largest feasible common target found
    PcSolution solution;
    std::vector<BisectionProbe> trace;
};

inline constexpr double bisection_tolerance = 1e-6;

/// Bisection on a common target zeta (all users equal) over [0, max_j D_jj]; the upper end is the
/// best interference-free SINR at full power. Stops when the bracket is below 1e-6 relative.
inline MaxMinResult maxmin_common_target(const PcSystem &sys)
{
    const Eigen::Index n = sys.size();
    if (n == 0)
        throw ConfigError("maxmin_common_target: empty system");

    MaxMinResult res;
    auto probe = [&](double z) {
        PcSolution s = solve_targets(sys, RVector::Constant(n, z));
        res.trace.push_back({z, s.feasible()});
        return s;
    };

    double hi = sys.d.maxCoeff();
    PcSolution best = probe(hi);
    if (best.feasible())
    {
        res.target = hi;
        res.solution = std::move(best);
        return res;
    }

    double lo = 0.0;
    best = solve_targets(sys, RVector::Zero(n));
    for (int it = 0; it < 200 && hi - lo > bisection_tolerance * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        PcSolution s = probe(mid);
        if (s.feasible())
        {
            lo = mid;
            best = std::move(s);
        }
        else
            hi = mid;
    }
    res.target = lo;
    res.solution = std::move(best);
    return res;
}

inline MaxMinResult maxmin_common_target(const ChannelSet &channels, Scheme scheme, Link link, double rho,
                                         const std::vector<GramInverse> &grams = {})
{
    return maxmin_common_target(build_pc_system(channels, scheme, link, rho, grams));
}

// ---------- Single-cell zero-forcing max-min ----------

struct SingleCellControl
{
    RVector eta;
    double sinr = 0.0; // common SINR of every user
};

/// eta_k = [(G^(*))^{-1}]_{k,k} / sum_k' [(G^(*))^{-1}]_{k',k'}; every user gets rho / sum.
inline SingleCellControl single_cell_zf_maxmin_dl(const GramInverse &gi, double rho_dl)
{
    const double total = gi.inverse_diagonal.sum();
    return {gi.inverse_diagonal / total, rho_dl / total};
}

inline SingleCellControl single_cell_zf_maxmin_dl(const CMatrix &g, double rho_dl)
{
    return single_cell_zf_maxmin_dl(invert_gram(g), rho_dl);
}

/// eta_k = [(G^(*))^{-1}]_{k,k} / max_k' [(G^(*))^{-1}]_{k',k'}; every user gets rho / max.
inline SingleCellControl single_cell_zf_maxmin_ul(const GramInverse &gi, double rho_ul)
{
    const double top = gi.inverse_diagonal.maxCoeff();
    return {gi.inverse_diagonal / top, rho_ul / top};
}

inline SingleCellControl single_cell_zf_maxmin_ul(const CMatrix &g, double rho_ul)
{
    return single_cell_zf_maxmin_ul(invert_gram(g), rho_ul);
}

/// Applies the single-cell ZF max-min rule independently in every cell.
inline PowerAllocation single_cell_zf_allocation(const std::vector<GramInverse> &grams, Link link)
{
    std::vector<RVector> cells;
    for (const auto &gi : grams)
        cells.push_back(link == Link::Downlink ? single_cell_zf_maxmin_dl(gi, 1.0).eta
                                               : single_cell_zf_maxmin_ul(gi, 1.0).eta);
    return PowerAllocation(norm_for(link), std::move(cells));
}

} // namespace lmimo

#endif
