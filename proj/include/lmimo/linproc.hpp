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

// Maximum-ratio and zero-forcing precoders/decoders and the closed-form effective SINRs
// for fixed (deterministic) channels, downlink and uplink.
//
// Indexing: user k of cell l; g_{l,k}^{b} is its channel to base station b, available as
// channels.column(b, l, k). Power coefficients are per cell, eta_l in R_{0+}^K.

#ifndef LMIMO_LINPROC_HPP
#define LMIMO_LINPROC_HPP

#include "channel.hpp"
#include "common.hpp"
#include "numeric.hpp"

#include <vector>

namespace lmimo
{
inline constexpr double power_norm_slack = 1e-9;

inline double apply_norm(PowerNorm norm, const RVector &v)
{
    if (v.size() == 0)
        return 0.0;
    return norm == PowerNorm::Total ? v.sum() : v.maxCoeff();
}

/// Per-cell power-control vectors. Downlink vectors live in the l1 ball (total power),
/// uplink vectors in the l-inf ball (individual power).
class PowerAllocation
{
  public:
    PowerAllocation() = default;

    PowerAllocation(PowerNorm norm, std::vector<RVector> per_cell) : norm_(norm), eta_(std::move(per_cell))
    {
        if (eta_.empty())
            throw AllocationError("PowerAllocation: no cells");
        const auto K = eta_.front().size();
        for (std::size_t l = 0; l < eta_.size(); ++l)
        {
            const RVector &e = eta_[l];
            if (e.size() != K || K == 0)
                throw AllocationError("PowerAllocation: inconsistent users per cell");
            if (!e.allFinite() || (e.array() < 0.0).any())
                throw AllocationError("PowerAllocation: entries must be finite and nonnegative");
            if (apply_norm(norm_, e) > 1.0 + power_norm_slack)
                throw AllocationError("PowerAllocation: cell " + std::to_string(l) + " violates its power constraint");
        }
    }

    /// Cell-major stacking [eta_{1,1} .. eta_{1,K}, ..., eta_{L,1} .. eta_{L,K}].
    static PowerAllocation from_stacked(PowerNorm norm, const RVector &stacked, int users_per_cell)
    {
        if (users_per_cell < 1 || stacked.size() % users_per_cell != 0)
            throw AllocationError("PowerAllocation: stacked length is not a multiple of K");
        std::vector<RVector> cells;
        for (Eigen::Index off = 0; off < stacked.size(); off += users_per_cell)
            cells.emplace_back(stacked.segment(off, users_per_cell));
        return PowerAllocation(norm, std::move(cells));
    }

    /// Full power: equal split of the cell budget downlink, every user at 1 uplink.
    static PowerAllocation full(Link link, int cells, int users_per_cell)
    {
        const double v = link == Link::Downlink ? 1.0 / users_per_cell : 1.0;
        return PowerAllocation(norm_for(link), std::vector<RVector>(cells, RVector::Constant(users_per_cell, v)));
    }

    PowerNorm norm() const { return norm_; }
    int cells() const { return static_cast<int>(eta_.size()); }
    int users() const { return eta_.empty() ? 0 : static_cast<int>(eta_.front().size()); }
    const RVector &cell(int l) const { return eta_.at(l); }
    double at(int l, int k) const { return eta_.at(l)(k); }
    double cell_norm(int l) const { return apply_norm(norm_, eta_.at(l)); }

    RVector stacked() const
    {
        RVector out(cells() * users());
        for (int l = 0; l < cells(); ++l)
            out.segment(l * users(), users()) = eta_[l];
        return out;
    }

  private:
    PowerNorm norm_ = PowerNorm::Total;
    std::vector<RVector> eta_;
};

struct Precoder
{
    Scheme scheme = Scheme::MR;
    int cell = 0;
    CMatrix weights; // M x K; s = weights * q
};

// E ||s||^2 for unit-variance uncorrelated symbols: tr(P^* P).
inline double expected_transmit_power(const Precoder &p) { return p.weights.squaredNorm(); }

namespace detail
{
inline void check_downlink_eta(const CMatrix &g, const RVector &eta)
{
    if (eta.size() != g.cols())
        throw AllocationError("precoder: power vector length differs from the user count");
    if ((eta.array() < 0.0).any() || eta.sum() > 1.0 + power_norm_slack)
        throw AllocationError("precoder: power vector outside the total-power set");
}
} // namespace detail

/// Column k = conj(g_k) sqrt(eta_k) / ||g_k||.
inline Precoder mr_precoder(const CMatrix &g, const RVector &eta, int cell = 0)
{
    detail::check_downlink_eta(g, eta);
    Precoder p{Scheme::MR, cell, CMatrix(g.rows(), g.cols())};
    for (Eigen::Index k = 0; k < g.cols(); ++k)
    {
        const double n2 = squared_norm(g.col(k));
        if (!(n2 > 0.0))
            throw DegenerateChannelError("mr_precoder: channel column " + std::to_string(k) + " is zero");
        p.weights.col(k) = g.col(k).conjugate() * std::sqrt(eta(k) / n2);
    }
    return p;
}

/// conj(G) (G^T conj(G))^{-1} D^{-1/2} D_eta^{1/2}, where D holds the diagonal of (G^* G)^{-1}.
/// G^T P is diagonal with entries sqrt(eta_k / [(G^* G)^{-1}]_{k,k}).
inline Precoder zf_precoder(const CMatrix &g, const RVector &eta, const GramInverse &gi, int cell = 0)
{
    detail::check_downlink_eta(g, eta);
    // (G^T conj(G))^{-1} = conj((G^* G)^{-1})
    CMatrix w = g.conjugate() * gi.inverse.conjugate();
    for (Eigen::Index k = 0; k < g.cols(); ++k)
        w.col(k) *= std::sqrt(eta(k) / gi.inverse_diagonal(k));
    return {Scheme::ZF, cell, std::move(w)};
}

inline Precoder zf_precoder(const CMatrix &g, const RVector &eta, int cell = 0)
{
    return zf_precoder(g, eta, invert_gram(g), cell);
}

/// Uplink decoding matrix (K x M): G^* for MR, (G^* G)^{-1} G^* for ZF.
inline CMatrix decoder(Scheme scheme, const CMatrix &g, const GramInverse *gi = nullptr)
{
    if (scheme == Scheme::MR)
        return g.adjoint();
    if (gi)
        return gi->inverse * g.adjoint();
    return invert_gram(g).inverse * g.adjoint();
}

// ---------- Effective SINR ----------

struct SinrReport
{
    Scheme scheme = Scheme::MR;
    Link link = Link::Downlink;
    RMatrix values; // L x K, linear scale

    double at(int l, int k) const { return values(l, k); }
    int cells() const { return static_cast<int>(values.rows()); }
    int users() const { return static_cast<int>(values.cols()); }

    RVector stacked() const
    {
        RVector out(values.size());
        for (int l = 0; l < cells(); ++l)
            out.segment(l * users(), users()) = values.row(l).transpose();
        return out;
    }
};

inline std::vector<GramInverse> invert_grams(const ChannelSet &channels)
{
    std::vector<GramInverse> out;
    out.reserve(channels.cells());
    for (int l = 0; l < channels.cells(); ++l)
        out.push_back(invert_gram(channels.own(l)));
    return out;
}

// ||g_{l,k}^l||^2 for every user, L x K.
inline RMatrix own_channel_gains(const ChannelSet &channels)
{
    RMatrix v(channels.cells(), channels.users());
    for (int l = 0; l < channels.cells(); ++l)
        for (int k = 0; k < channels.users(); ++k)
        {
            v(l, k) = squared_norm(channels.column(l, l, k));
            if (!(v(l, k) > 0.0))
                throw DegenerateChannelError("own channel of user " + std::to_string(k) + " in cell " +
                                             std::to_string(l) + " is zero");
        }
    return v;
}

namespace detail
{
inline void check_alloc(const ChannelSet &channels, const PowerAllocation &alloc, Link link)
{
    if (alloc.norm() != norm_for(link))
        throw AllocationError(link == Link::Downlink ? "downlink SINR needs a total-power allocation"
                                                     : "uplink SINR needs an individual-power allocation");
    if (alloc.cells() != channels.cells() || alloc.users() != channels.users())
        throw AllocationError("allocation dimensions differ from the channel set");
}
} // namespace detail

/// MR downlink:
///   rho eta_{l,k} ||g||^2 / (1 + rho sum_{(l',k') != (l,k)} eta_{l',k'} |(g_{l,k}^{l'})^* g_{l',k'}^{l'}|^2 / ||g_{l',k'}^{l'}||^2)
inline SinrReport mr_dl_sinr(const ChannelSet &channels, const PowerAllocation &alloc, double rho_dl)
{
    detail::check_alloc(channels, alloc, Link::Downlink);
    const int L = channels.cells(), K = channels.users();
    const RMatrix v = own_channel_gains(channels);

    SinrReport r{Scheme::MR, Link::Downlink, RMatrix(L, K)};
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
        {
            double interference = 0.0;
            for (int lp = 0; lp < L; ++lp)
            {
                const auto g = channels.column(lp, l, k); // this user seen from base station lp
                for (int kp = 0; kp < K; ++kp)
                {
                    if (lp == l && kp == k)
                        continue;
                    const double c = std::norm(inner(g, channels.column(lp, lp, kp)));
                    interference += alloc.at(lp, kp) * c / v(lp, kp);
                }
            }
            r.values(l, k) = rho_dl * alloc.at(l, k) * v(l, k) / (1.0 + rho_dl * interference);
        }
    return r;
}

/// MR uplink:
///   ||g||^2 rho eta_{l,k} / (1 + rho/||g||^2 sum_{(l',k') != (l,k)} eta_{l',k'} |(g_{l,k}^l)^* g_{l',k'}^l|^2)
inline SinrReport mr_ul_sinr(const ChannelSet &channels, const PowerAllocation &alloc, double rho_ul)
{
    detail::check_alloc(channels, alloc, Link::Uplink);
    const int L = channels.cells(), K = channels.users();
    const RMatrix v = own_channel_gains(channels);

    SinrReport r{Scheme::MR, Link::Uplink, RMatrix(L, K)};
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
        {
            const auto g = channels.column(l, l, k);
            double interference = 0.0;
            for (int lp = 0; lp < L; ++lp)
                for (int kp = 0; kp < K; ++kp)
                {
                    if (lp == l && kp == k)
                        continue;
                    interference += alloc.at(lp, kp) * std::norm(inner(g, channels.column(l, lp, kp)));
                }
            r.values(l, k) = v(l, k) * rho_ul * alloc.at(l, k) / (1.0 + rho_ul / v(l, k) * interference);
        }
    return r;
}

/// ZF downlink:
///   rho eta_{l,k} / ((1 + OP_{l,k}) [(G_l^{l(*)})^{-1}]_{k,k})
/// with OP_{l,k} = rho sum_{l' != l} sum_{k'} eta_{l',k'} |[(g_{l,k}^{l'})^* G_{l'}^{l'} (G_{l'}^{l'(*)})^{-1}]_{k'}|^2
///                                                / [(G_{l'}^{l'(*)})^{-1}]_{k',k'}
inline SinrReport zf_dl_sinr(const ChannelSet &channels, const PowerAllocation &alloc, double rho_dl,
                             const std::vector<GramInverse> &grams)
{
    detail::check_alloc(channels, alloc, Link::Downlink);
    const int L = channels.cells(), K = channels.users();

    SinrReport r{Scheme::ZF, Link::Downlink, RMatrix(L, K)};
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
        {
            double other = 0.0;
            for (int lp = 0; lp < L; ++lp)
            {
                if (lp == l)
                    continue;
                const auto g = channels.column(lp, l, k);
                // row vector g^* G_{l'}^{l'} (G^(*))^{-1}
                Eigen::RowVectorXcd h(K);
                for (int kp = 0; kp < K; ++kp)
                    h(kp) = inner(g, channels.column(lp, lp, kp));
                h = (h * grams[lp].inverse).eval();
                for (int kp = 0; kp < K; ++kp)
                    other += alloc.at(lp, kp) * std::norm(h(kp)) / grams[lp].inverse_diagonal(kp);
            }
            r.values(l, k) = rho_dl * alloc.at(l, k) / ((1.0 + rho_dl * other) * grams[l].inverse_diagonal(k));
        }
    return r;
}

inline SinrReport zf_dl_sinr(const ChannelSet &channels, const PowerAllocation &alloc, double rho_dl)
{
    return zf_dl_sinr(channels, alloc, rho_dl, invert_grams(channels));
}

/// B_{l'}^{l} = (G_l^{l(*)})^{-1} (G_l^l)^* G_{l'}^l: ZF-decoded leakage of cell l' users into cell l.
inline CMatrix leakage_matrix(const ChannelSet &channels, const std::vector<GramInverse> &grams, int base_station,
                              int user_cell)
{
    return grams[base_station].inverse * cross_gram(channels.own(base_station), channels.block(base_station, user_cell));
}

/// ZF uplink:
///   rho eta_{l,k} / ([(G_l^{l(*)})^{-1}]_{k,k} + rho sum_{l' != l} sum_{k'} |[B_{l'}^l]_{k,k'}|^2 eta_{l',k'})
inline SinrReport zf_ul_sinr(const ChannelSet &channels, const PowerAllocation &alloc, double rho_ul,
                             const std::vector<GramInverse> &grams)
{
    detail::check_alloc(channels, alloc, Link::Uplink);
    const int L = channels.cells(), K = channels.users();

    RMatrix other = RMatrix::Zero(L, K);
    for (int l = 0; l < L; ++l)
        for (int lp = 0; lp < L; ++lp)
        {
            if (lp == l)
                continue;
            const CMatrix b = leakage_matrix(channels, grams, l, lp);
            other.row(l) += (b.cwiseAbs2() * alloc.cell(lp)).transpose();
        }

    SinrReport r{Scheme::ZF, Link::Uplink, RMatrix(L, K)};
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
            r.values(l, k) = rho_ul * alloc.at(l, k) / (grams[l].inverse_diagonal(k) + rho_ul * other(l, k));
    return r;
}

inline SinrReport zf_ul_sinr(const ChannelSet &channels, const PowerAllocation &alloc, double rho_ul)
{
    return zf_ul_sinr(channels, alloc, rho_ul, invert_grams(channels));
}

// Dispatch on (scheme, link). `grams` is only consulted for ZF and computed when empty.
inline SinrReport effective_sinr(const ChannelSet &channels, Scheme scheme, Link link, const PowerAllocation &alloc,
                                 double rho, const std::vector<GramInverse> &grams = {})
{
    if (scheme == Scheme::MR)
        return link == Link::Downlink ? mr_dl_sinr(channels, alloc, rho) : mr_ul_sinr(channels, alloc, rho);
    const std::vector<GramInverse> local = grams.empty() ? invert_grams(channels) : std::vector<GramInverse>{};
    const auto &g = grams.empty() ? local : grams;
    return link == Link::Downlink ? zf_dl_sinr(channels, alloc, rho, g) : zf_ul_sinr(channels, alloc, rho, g);
}

} // namespace lmimo

#endif
