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

// Symbol-level Monte Carlo of the downlink and uplink transmission equations.
//
// Symbols and noise are i.i.d. CN(0, 1). For every user the desired-signal coefficient c is
// read off the simulated transmit chain, so the residual r = y - c q is exactly
// interference plus noise and the empirical SINR is |c|^2 / mean |r|^2.

#ifndef LMIMO_MCSIM_HPP
#define LMIMO_MCSIM_HPP

#include "channel.hpp"
#include "common.hpp"
#include "linproc.hpp"
#include "numeric.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace lmimo
{
struct SimResult
{
    Scheme scheme = Scheme::MR;
    Link link = Link::Downlink;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    // L x K, linear scale
    RMatrix sinr;
    RMatrix desired_gain;   // |c|^2
    RMatrix residual_power; // mean |y - c q|^2
    RMatrix residual_se;    // standard error of residual_power
    RMatrix signal_power;   // mean |c q|^2
    RMatrix intra_power;    // same-cell interference
    RMatrix inter_power;    // other-cell interference
    RMatrix noise_power;
    RMatrix total_power; // mean |y|^2

    // Largest |y - (c q + intra + inter + noise)| / max |y| over all samples.
    double split_error = 0.0;

    // Per cell: mean transmitted power (DL ||s_l||^2, UL sum_k |s_{l,k}|^2) and its standard error.
    RVector tx_power;
    RVector tx_power_se;
};

/// Deviation of the empirical residual power from the closed-form one, in standard errors:
/// (mean |r|^2 - |c|^2 / SINR) / se. NaN where the closed-form SINR is zero.
inline RMatrix deviation_sigma(const SimResult &sim, const SinrReport &closed_form)
{
    RMatrix z(sim.sinr.rows(), sim.sinr.cols());
    for (Eigen::Index l = 0; l < z.rows(); ++l)
        for (Eigen::Index k = 0; k < z.cols(); ++k)
        {
            const double s = closed_form.values(l, k);
            z(l, k) = s > 0.0 ? (sim.residual_power(l, k) - sim.desired_gain(l, k) / s) / sim.residual_se(l, k)
                              : std::numeric_limits<double>::quiet_NaN();
        }
    return z;
}

namespace detail
{
struct Moments
{
    // running sums over samples for one user
    double r2 = 0.0, r4 = 0.0, sig = 0.0, intra = 0.0, inter = 0.0, noise = 0.0, total = 0.0;
};

inline CMatrix offdiag(const CMatrix &m)
{
    CMatrix out = m;
    out.diagonal().setZero();
    return out;
}

// Per-batch accumulation common to both links. `desired`, `intra`, `inter`, `noise` and `received`
// are K x B for one cell; `gain` holds the desired coefficients.
inline void accumulate(std::vector<Moments> &mom, const CVector &gain, const CMatrix &q, const CMatrix &intra,
                       const CMatrix &inter, const CMatrix &noise, const CMatrix &received, double &split_error)
{
    const Eigen::Index K = q.rows(), B = q.cols();
    double peak = 0.0, err = 0.0;
    for (Eigen::Index t = 0; t < B; ++t)
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const Complex d = gain(k) * q(k, t);
            const Complex r = received(k, t) - d;
            const double r2 = std::norm(r);
            Moments &m = mom[k];
            m.r2 += r2;
            m.r4 += r2 * r2;
            m.sig += std::norm(d);
            m.intra += std::norm(intra(k, t));
            m.inter += std::norm(inter(k, t));
            m.noise += std::norm(noise(k, t));
            m.total += std::norm(received(k, t));
            peak = std::max(peak, std::abs(received(k, t)));
            err = std::max(err, std::abs(received(k, t) - (d + intra(k, t) + inter(k, t) + noise(k, t))));
        }
    if (peak > 0.0)
        split_error = std::max(split_error, err / peak);
}

inline void finish(SimResult &res, const std::vector<std::vector<Moments>> &mom, const RVector &tx_sum,
                   const RVector &tx_sum2)
{
    const int L = static_cast<int>(mom.size());
    const int K = L ? static_cast<int>(mom.front().size()) : 0;
    const double n = static_cast<double>(res.samples);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (RMatrix *m : {&res.sinr, &res.residual_power, &res.residual_se, &res.signal_power, &res.intra_power,
                       &res.inter_power, &res.noise_power, &res.total_power})
        m->resize(L, K);
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
        {
            const Moments &m = mom[l][k];
            const double mean = m.r2 / n;
            res.residual_power(l, k) = mean;
            res.residual_se(l, k) =
                res.samples > 1 ? std::sqrt(std::max(0.0, (m.r4 / n - mean * mean) * n / (n - 1.0)) / n) : nan;
            res.sinr(l, k) = res.desired_gain(l, k) / mean;
            res.signal_power(l, k) = m.sig / n;
            res.intra_power(l, k) = m.intra / n;
            res.inter_power(l, k) = m.inter / n;
            res.noise_power(l, k) = m.noise / n;
            res.total_power(l, k) = m.total / n;
        }
    res.tx_power = tx_sum / n;
    res.tx_power_se.resize(L);
    for (int l = 0; l < L; ++l)
    {
        const double mean = res.tx_power(l);
        res.tx_power_se(l) =
            res.samples > 1 ? std::sqrt(std::max(0.0, (tx_sum2(l) / n - mean * mean) * n / (n - 1.0)) / n) : nan;
    }
}

inline void check_sim_inputs(const ChannelSet &channels, const PowerAllocation &alloc, Link link,
                             std::size_t n_symbols)
{
    if (n_symbols < 1)
        throw ConfigError("simulate: need at least one symbol");
    check_alloc(channels, alloc, link);
}
} // namespace detail

inline constexpr std::size_t default_sim_batch = 2048;

/// Downlink: x_l = sqrt(rho) sum_{l'} (G_l^{l'})^T s_{l'} + w_l with s_l = P_l q_l.
inline SimResult simulate_dl(const ChannelSet &channels, Scheme scheme, const PowerAllocation &alloc, double rho_dl,
                             std::size_t n_symbols, std::uint64_t seed, std::size_t batch = default_sim_batch)
{
    detail::check_sim_inputs(channels, alloc, Link::Downlink, n_symbols);
    const int L = channels.cells(), K = channels.users();
    const double amp = std::sqrt(rho_dl);

    std::vector<CMatrix> precoders;
    for (int l = 0; l < L; ++l)
        precoders.push_back(scheme == Scheme::MR ? mr_precoder(channels.own(l), alloc.cell(l), l).weights
                                                 : zf_precoder(channels.own(l), alloc.cell(l), l).weights);

    // Effective own-cell matrix sqrt(rho) (G_l^l)^T P_l; its diagonal is the desired coefficient.
    std::vector<CMatrix> own_eff;
    SimResult res;
    res.scheme = scheme;
    res.link = Link::Downlink;
    res.samples = n_symbols;
    res.seed = seed;
    res.desired_gain.resize(L, K);
    for (int l = 0; l < L; ++l)
    {
        own_eff.push_back(amp * channels.own(l).transpose() * precoders[l]);
        res.desired_gain.row(l) = own_eff[l].diagonal().cwiseAbs2().transpose();
    }

    Engine eng(seed);
    ComplexGaussian cn;
    std::vector<std::vector<detail::Moments>> mom(L, std::vector<detail::Moments>(K));
    RVector tx_sum = RVector::Zero(L), tx_sum2 = RVector::Zero(L);

    std::vector<CMatrix> q(L), w(L), s(L);
    for (std::size_t done = 0; done < n_symbols;)
    {
        const auto b = static_cast<Eigen::Index>(std::min(batch, n_symbols - done));
        for (int l = 0; l < L; ++l)
        {
            q[l].resize(K, b);
            w[l].resize(K, b);
            cn.fill(eng, q[l]);
            cn.fill(eng, w[l]);
            s[l] = precoders[l] * q[l];
            const RVector p = s[l].colwise().squaredNorm().transpose();
            tx_sum(l) += p.sum();
            tx_sum2(l) += p.squaredNorm();
        }
        for (int l = 0; l < L; ++l)
        {
            CMatrix received = w[l];
            CMatrix inter = CMatrix::Zero(K, b);
            for (int lp = 0; lp < L; ++lp)
            {
                const CMatrix term = amp * channels.block(lp, l).transpose() * s[lp];
                received += term;
                if (lp != l)
                    inter += term;
            }
            const CMatrix intra = detail::offdiag(own_eff[l]) * q[l];
            detail::accumulate(mom[l], own_eff[l].diagonal(), q[l], intra, inter, w[l], received, res.split_error);
        }
        done += static_cast<std::size_t>(b);
    }
    detail::finish(res, mom, tx_sum, tx_sum2);
    return res;
}

/// Uplink: x_l = sqrt(rho) sum_{l'} G_{l'}^l s_{l'} + w_l with s_l = D_eta^{1/2} q_l, decoded by
/// G_l^{l*} (MR) or (G_l^{l(*)})^{-1} G_l^{l*} (ZF).
inline SimResult simulate_ul(const ChannelSet &channels, Scheme scheme, const PowerAllocation &alloc, double rho_ul,
                             std::size_t n_symbols, std::uint64_t seed, std::size_t batch = default_sim_batch)
{
    detail::check_sim_inputs(channels, alloc, Link::Uplink, n_symbols);
    const int L = channels.cells(), K = channels.users(), M = channels.antennas();
    const double amp = std::sqrt(rho_ul);

    std::vector<CMatrix> decoders;
    std::vector<RVector> sqrt_eta;
    for (int l = 0; l < L; ++l)
    {
        decoders.push_back(decoder(scheme, channels.own(l)));
        sqrt_eta.push_back(alloc.cell(l).cwiseSqrt());
    }

    std::vector<CMatrix> own_eff;
    SimResult res;
    res.scheme = scheme;
    res.link = Link::Uplink;
    res.samples = n_symbols;
    res.seed = seed;
    res.desired_gain.resize(L, K);
    for (int l = 0; l < L; ++l)
    {
        own_eff.push_back(amp * decoders[l] * channels.own(l) * sqrt_eta[l].asDiagonal());
        res.desired_gain.row(l) = own_eff[l].diagonal().cwiseAbs2().transpose();
    }

    Engine eng(seed);
    ComplexGaussian cn;
    std::vector<std::vector<detail::Moments>> mom(L, std::vector<detail::Moments>(K));
    RVector tx_sum = RVector::Zero(L), tx_sum2 = RVector::Zero(L);

    std::vector<CMatrix> q(L), w(L), s(L);
    for (std::size_t done = 0; done < n_symbols;)
    {
        const auto b = static_cast<Eigen::Index>(std::min(batch, n_symbols - done));
        for (int l = 0; l < L; ++l)
        {
            q[l].resize(K, b);
            w[l].resize(M, b);
            cn.fill(eng, q[l]);
            cn.fill(eng, w[l]);
            s[l] = sqrt_eta[l].asDiagonal() * q[l];
            const RVector p = s[l].colwise().squaredNorm().transpose();
            tx_sum(l) += p.sum();
            tx_sum2(l) += p.squaredNorm();
        }
        for (int l = 0; l < L; ++l)
        {
            CMatrix antenna = w[l];
            CMatrix inter_antenna = CMatrix::Zero(M, b);
            for (int lp = 0; lp < L; ++lp)
            {
                const CMatrix term = amp * channels.block(l, lp) * s[lp];
                antenna += term;
                if (lp != l)
                    inter_antenna += term;
            }
            const CMatrix received = decoders[l] * antenna;
            const CMatrix inter = decoders[l] * inter_antenna;
            const CMatrix noise = decoders[l] * w[l];
            const CMatrix intra = detail::offdiag(own_eff[l]) * q[l];
            detail::accumulate(mom[l], own_eff[l].diagonal(), q[l], intra, inter, noise, received, res.split_error);
        }
        done += static_cast<std::size_t>(b);
    }
    detail::finish(res, mom, tx_sum, tx_sum2);
    return res;
}

inline SimResult simulate(const ChannelSet &channels, Scheme scheme, Link link, const PowerAllocation &alloc,
                          double rho, std::size_t n_symbols, std::uint64_t seed)
{
    return link == Link::Downlink ? simulate_dl(channels, scheme, alloc, rho, n_symbols, seed)
                                  : simulate_ul(channels, scheme, alloc, rho, n_symbols, seed);
}

} // namespace lmimo

#endif
