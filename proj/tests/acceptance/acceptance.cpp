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

// Acceptance gate: one PASS/FAIL line per criterion, exit status = number of failures.

#include <lmimo/lmimo.hpp>

#include "support/instances.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace lmimo;
using namespace lmimo::testing;

namespace
{
constexpr Scheme schemes[] = {Scheme::MR, Scheme::ZF};
constexpr Link links[] = {Link::Downlink, Link::Uplink};

// Pinned limits.
constexpr double ac1_sigma_limit = 5.0;
constexpr std::size_t ac1_symbols = 100000;
constexpr int ac1_instances = 20;
constexpr double ac1_seconds = 120.0;

constexpr double ac2_rel_tol = 1e-12;
constexpr int ac2_instances = 100;
constexpr double ac2_seconds = 1.0;

constexpr double ac3_rel_tol = 1e-10;
constexpr int ac3_instances = 100;
constexpr double ac3_seconds = 1.0;

constexpr double ac4_roundtrip_tol = 1e-8;
constexpr double ac4_identity_tol = 1e-10;
constexpr int ac4_instances = 10;
constexpr double ac4_seconds = 5.0;

constexpr double ac5_norm_tol = 1e-12;
constexpr double ac5_equal_tol = 1e-10;
constexpr double ac5_bisection_tol = 1e-5;
constexpr int ac5_instances = 10;
constexpr double ac5_seconds = 5.0;

constexpr double ac6_fspl_target = 114.03, ac6_fspl_tol = 0.01;
constexpr double ac6_diameter_target = 3.26, ac6_diameter_tol = 0.01;
constexpr double ac6_rho_dl_target = 121.0, ac6_rho_ul_target = 111.0, ac6_rho_tol = 0.1;

constexpr double ac7_degenerate_tol = 1e-8;
constexpr double ac7_seconds = 600.0;

struct Outcome
{
    bool pass = false;
    std::string detail;
    double limit_seconds = 0.0; // 0 = no runtime limit
};

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double max_abs_finite(const RMatrix &z)
{
    double m = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        if (std::isfinite(z(i)))
            m = std::max(m, std::abs(z(i)));
    return m;
}

Outcome ac1_monte_carlo()
{
    const int L = 2, K = 3, M = 16;
    double worst = 0.0;
    int users = 0;
    for (Scheme s : schemes)
        for (Link link : links)
            for (int i = 0; i < ac1_instances; ++i)
            {
                const std::uint64_t seed = derive_seed(1, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(link),
                                                           static_cast<std::uint64_t>(i)});
                const auto set = random_channels(L, M, K, seed, 0.5);
                const double rho = 0.5 + (i % 5) * 2.0;
                const auto alloc = random_alloc(link, L, K, derive_seed(seed, {1}));
                const auto cf = effective_sinr(set, s, link, alloc, rho);
                const auto sim = simulate(set, s, link, alloc, rho, ac1_symbols, derive_seed(seed, {2}));
                worst = std::max(worst, max_abs_finite(deviation_sigma(sim, cf)));
                users += L * K;
            }
    return {worst < ac1_sigma_limit,
            fmt("closed-form SINR vs %zu-symbol simulation, L=2 K=3 M=16, %d instances x 4: max|z| = %.3f over %d users "
                "(limit %.0f)",
                ac1_symbols, ac1_instances, worst, users, ac1_sigma_limit),
            ac1_seconds};
}

Outcome ac2_power_identity()
{
    double worst = 0.0;
    for (int i = 0; i < ac2_instances; ++i)
    {
        const int K = 1 + i % 8, M = K + i % 13;
        const CMatrix g = random_matrix(M, K, derive_seed(2, {static_cast<std::uint64_t>(i)}));
        const RVector eta = random_alloc(Link::Downlink, 1, K, derive_seed(2, {static_cast<std::uint64_t>(i), 1}),
                                         0.01, 0.2 + 0.8 * (i % 2))
                                .cell(0);
        for (const Precoder &p : {mr_precoder(g, eta), zf_precoder(g, eta)})
            worst = std::max(worst, rel_diff(expected_transmit_power(p), eta.sum()));
    }
    return {worst < ac2_rel_tol,
            fmt("E||s||^2 = ||eta||_1 for MR and ZF on %d instances: max rel error %.2e (limit %.0e)", ac2_instances,
                worst, ac2_rel_tol),
            ac2_seconds};
}

Outcome ac3_zf_nulling()
{
    double worst = 0.0;
    for (int i = 0; i < ac3_instances; ++i)
    {
        const int K = 2 + i % 7, M = K + 1 + i % 11;
        const CMatrix g = random_matrix(M, K, derive_seed(3, {static_cast<std::uint64_t>(i)}));
        const auto gi = invert_gram(g);
        const RVector eta = RVector::Constant(K, 1.0 / K);
        const CMatrix dl = g.transpose() * zf_precoder(g, eta, gi).weights; // user k <- stream j
        const CMatrix ul = decoder(Scheme::ZF, g, &gi) * g;                  // output k <- user j
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < K; ++j)
                if (j != k)
                {
                    worst = std::max(worst, std::abs(dl(k, j)) / std::abs(dl(k, k)));
                    worst = std::max(worst, std::abs(ul(k, j)) / std::abs(ul(k, k)));
                }
    }
    return {worst < ac3_rel_tol,
            fmt("ZF intra-cell crosstalk, downlink and uplink, %d full-rank instances: max relative %.2e (limit %.0e)",
                ac3_instances, worst, ac3_rel_tol),
            ac3_seconds};
}

Outcome ac4_round_trip()
{
    const int L = 3, K = 4, M = 16;
    double worst_trip = 0.0, worst_identity = 0.0;
    int infeasible = 0;
    for (Scheme s : schemes)
        for (Link link : links)
            for (int i = 0; i < ac4_instances; ++i)
            {
                const std::uint64_t seed = derive_seed(4, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(link),
                                                           static_cast<std::uint64_t>(i)});
                const auto set = random_channels(L, M, K, seed, 0.4);
                const double rho = 10.0;
                const auto sys = build_pc_system(set, s, link, rho);

                const auto probe = random_alloc(link, L, K, derive_seed(seed, {1}));
                const RVector direct = effective_sinr(set, s, link, probe, rho).stacked();
                worst_identity = std::max(worst_identity, max_rel_diff(sys.sinr(probe.stacked()), direct));

                // Targets achieved by an admissible allocation are feasible.
                const auto source = random_alloc(link, L, K, derive_seed(seed, {2}));
                const RVector zeta = sys.sinr(source.stacked());
                const auto sol = solve_targets(sys, zeta);
                if (!sol.feasible())
                {
                    ++infeasible;
                    continue;
                }
                const RVector again = effective_sinr(set, s, link, to_allocation(sys, sol), rho).stacked();
                worst_trip = std::max(worst_trip, max_rel_diff(again, zeta));
            }
    return {infeasible == 0 && worst_trip < ac4_roundtrip_tol && worst_identity < ac4_identity_tol,
            fmt("solve_targets round trip, L=3 K=4, 4 schemes x %d: max rel %.2e (limit %.0e), D/C identity %.2e "
                "(limit %.0e), %d unexpectedly infeasible",
                ac4_instances, worst_trip, ac4_roundtrip_tol, worst_identity, ac4_identity_tol, infeasible),
            ac4_seconds};
}

Outcome ac5_single_cell_zf()
{
    double norm_err = 0.0, spread = 0.0, bisect = 0.0;
    for (int i = 0; i < ac5_instances; ++i)
    {
        const int K = 2 + i % 6, M = 2 * K + 4 * (i % 3);
        const CMatrix g = random_matrix(M, K, derive_seed(5, {static_cast<std::uint64_t>(i)}));
        ChannelSet set(1, M, K);
        set.block(0, 0) = g;
        const auto gi = invert_gram(g);
        const double rho = 3.0;
        for (Link link : links)
        {
            const auto ctl = link == Link::Downlink ? single_cell_zf_maxmin_dl(gi, rho) : single_cell_zf_maxmin_ul(gi, rho);
            const PowerAllocation alloc(norm_for(link), {ctl.eta});
            norm_err = std::max(norm_err, std::abs(alloc.cell_norm(0) - 1.0));
            const RVector sinr = effective_sinr(set, Scheme::ZF, link, alloc, rho).stacked();
            for (Eigen::Index k = 0; k < sinr.size(); ++k)
                spread = std::max(spread, rel_diff(sinr(k), ctl.sinr));
            const auto mm = maxmin_common_target(set, Scheme::ZF, link, rho);
            bisect = std::max(bisect, rel_diff(mm.target, ctl.sinr));
        }
    }
    return {norm_err < ac5_norm_tol && spread < ac5_equal_tol && bisect < ac5_bisection_tol,
            fmt("single-cell ZF max-min, %d instances: | ||eta|| - 1 | %.1e, SINR spread %.2e (limit %.0e), "
                "bisection vs closed form %.2e (limit %.0e)",
                ac5_instances, norm_err, spread, ac5_equal_tol, bisect, ac5_bisection_tol),
            ac5_seconds};
}

Outcome ac6_anchors()
{
    const double fspl = fspl_db(60.0, 200.0);
    const auto lb = link_budget(RadioParameters{});
    const auto array = circular_array(4096, lb.wavelength, 30.0, {0.0, 0.0});
    double diameter = 0.0;
    for (const auto &p : array.positions)
        for (const auto &q : {array.positions.front(), array.positions[2048]})
            diameter = std::max(diameter, std::hypot(p.x - q.x, p.y - q.y));
    const double dl = to_db(lb.rho_dl), ul = to_db(lb.rho_ul);
    const bool ok = std::abs(fspl - ac6_fspl_target) <= ac6_fspl_tol &&
                    std::abs(diameter - ac6_diameter_target) <= ac6_diameter_tol &&
                    std::abs(dl - ac6_rho_dl_target) <= ac6_rho_tol && std::abs(ul - ac6_rho_ul_target) <= ac6_rho_tol;
    return {ok,
            fmt("fspl(60 GHz, 200 m) = %.4f dB, 4096-element diameter = %.4f m, rho_d = %.3f dB, rho_u = %.3f dB", fspl,
                diameter, dl, ul)};
}

Outcome ac7_reduced_pipeline()
{
    ScenarioConfig cfg;
    cfg.antennas_per_cell = 256;
    cfg.users_per_cell = 8;
    cfg.cell_count = 7;
    cfg.drops = 10;
    cfg.seed = 1;
    const auto res = run_scenario(cfg, 0);

    const std::vector<std::string> expected{"MR DL", "MR UL", "ZF DL", "ZF UL", "ZF DL-1", "ZF UL-1"};
    bool series_ok = res.cdf.series.size() == expected.size();
    bool monotone = true;
    for (std::size_t i = 0; series_ok && i < expected.size(); ++i)
    {
        const auto &s = res.cdf.series[i];
        series_ok = s.name == expected[i] && !s.sinr_db.empty();
        for (std::size_t j = 1; j < s.sinr_db.size(); ++j)
            monotone = monotone && s.sinr_db[j - 1] <= s.sinr_db[j] && std::isfinite(s.sinr_db[j]);
    }
    double spread = 0.0;
    for (const auto &d : res.drops)
        for (const auto &[name, target] : d.common_target)
        {
            const RVector &v = d.sinr.at(name);
            for (Eigen::Index j = 0; j < v.size(); ++j)
                spread = std::max(spread, rel_diff(v(j), target));
        }
    const bool degenerate = spread < ac7_degenerate_tol && res.drops.size() == 10;
    return {series_ok && monotone && degenerate,
            fmt("M=256 K=8 L=7, 10 drops: %zu series (%s), CDFs %s, max-min spread per drop %.2e (limit %.0e), "
                "%d redraws",
                res.cdf.series.size(), series_ok ? "all six" : "MISSING", monotone ? "monotone" : "NOT monotone", spread,
                ac7_degenerate_tol, res.resamples),
            ac7_seconds};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1", ac1_monte_carlo},      {"AC2", ac2_power_identity}, {"AC3", ac3_zf_nulling},
        {"AC4", ac4_round_trip},       {"AC5", ac5_single_cell_zf}, {"AC6", ac6_anchors},
        {"AC7", ac7_reduced_pipeline},
    };
    int failures = 0;
    for (const auto &[id, run] : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = o.limit_seconds <= 0.0 || secs < o.limit_seconds;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::string timing = fmt("%.2f s", secs);
        if (o.limit_seconds > 0.0)
            timing += fmt(" of %.0f s", o.limit_seconds);
        std::printf("%s %s  %s  [%s]\n", pass ? "PASS" : "FAIL", id.c_str(), o.detail.c_str(), timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
