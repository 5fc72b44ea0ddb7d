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

// End-to-end scenario driver: config file, drops, max-min power control per (scheme, link),
// single-cell ZF series for the centre cell, and the CDF table written as CSV.

#ifndef LMIMO_SCENARIO_HPP
#define LMIMO_SCENARIO_HPP

#include "channel.hpp"
#include "common.hpp"
#include "geometry.hpp"
#include "linproc.hpp"
#include "mcsim.hpp"
#include "powerctl.hpp"
#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace lmimo
{
// ---------- Configuration ----------

struct ScenarioConfig
{
    int antennas_per_cell = 4096;
    int users_per_cell = 18;
    int cell_count = 7;
    std::string array_type = "circular";
    double bs_height_m = 30.0;
    double user_height_m = 1.5;
    RadioParameters radio;
    double cell_radius_m = 200.0;
    double min_distance_m = 10.0;
    std::vector<Scheme> schemes{Scheme::MR, Scheme::ZF};
    std::vector<Link> links{Link::Downlink, Link::Uplink};
    bool single_cell_zf = true;
    int drops = 50;
    std::uint64_t seed = 1;
    std::string output;

    bool wants(Scheme s) const { return std::find(schemes.begin(), schemes.end(), s) != schemes.end(); }
    bool wants(Link l) const { return std::find(links.begin(), links.end(), l) != links.end(); }

    bool operator==(const ScenarioConfig &) const = default;
};

inline void validate(const ScenarioConfig &c)
{
    auto require = [](bool ok, const char *what) {
        if (!ok)
            throw ConfigError(what);
    };
    require(c.cell_count == 1 || c.cell_count == 7, "cell_count must be 1 or 7");
    require(c.antennas_per_cell >= 1, "antennas_per_cell must be positive");
    require(c.users_per_cell >= 1, "users_per_cell must be positive");
    require(c.array_type == "circular", "array_type must be 'circular'");
    require(c.cell_radius_m > 0.0, "cell_radius_m must be positive");
    require(c.min_distance_m >= 0.0 && c.min_distance_m < c.cell_radius_m,
            "min_distance_m must be in [0, cell_radius_m)");
    require(c.bs_height_m >= 0.0 && c.user_height_m >= 0.0, "heights must be nonnegative");
    require(c.radio.carrier_ghz > 0.0, "carrier_ghz must be positive");
    require(c.radio.bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(c.radio.bs_power_w > 0.0 && c.radio.mobile_power_w > 0.0, "radiated powers must be positive");
    require(!c.schemes.empty(), "schemes must name at least one of MR, ZF");
    require(!c.links.empty(), "links must name at least one of DL, UL");
    require(c.drops >= 1, "drops must be positive");
    require(!c.wants(Scheme::ZF) || c.users_per_cell <= c.antennas_per_cell,
            "ZF needs users_per_cell <= antennas_per_cell");
}

namespace detail
{
inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string &key, const std::string &v)
{
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config: bad value for '" + key + "': '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string &key, const std::string &v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("config: bad boolean for '" + key + "': '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string &v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace detail

inline Scheme parse_scheme(const std::string &s)
{
    if (s == "MR" || s == "mr")
        return Scheme::MR;
    if (s == "ZF" || s == "zf")
        return Scheme::ZF;
    throw ConfigError("unknown scheme '" + s + "'");
}

inline Link parse_link(const std::string &s)
{
    if (s == "DL" || s == "dl")
        return Link::Downlink;
    if (s == "UL" || s == "ul")
        return Link::Uplink;
    throw ConfigError("unknown link '" + s + "'");
}

/// Flat `key = value` text, one key per line, `#` starts a comment. Missing keys keep their
/// defaults (the 60 GHz 7-cell parameter set); unknown or repeated keys are errors.
inline ScenarioConfig parse_config(std::istream &is)
{
    using detail::parse_number;
    ScenarioConfig c;
    std::set<std::string> seen;
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw))
    {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string val = detail::trim(std::string_view(line).substr(eq + 1));
        if (!seen.insert(key).second)
            throw ConfigError("config: duplicate key '" + key + "'");

        if (key == "antennas_per_cell")
            c.antennas_per_cell = parse_number<int>(key, val);
        else if (key == "users_per_cell")
            c.users_per_cell = parse_number<int>(key, val);
        else if (key == "cell_count")
            c.cell_count = parse_number<int>(key, val);
        else if (key == "array_type")
            c.array_type = val;
        else if (key == "bs_height_m")
            c.bs_height_m = parse_number<double>(key, val);
        else if (key == "user_height_m")
            c.user_height_m = parse_number<double>(key, val);
        else if (key == "bs_power_w")
            c.radio.bs_power_w = parse_number<double>(key, val);
        else if (key == "mobile_power_w")
            c.radio.mobile_power_w = parse_number<double>(key, val);
        else if (key == "bs_noise_figure_db")
            c.radio.bs_noise_figure_db = parse_number<double>(key, val);
        else if (key == "mobile_noise_figure_db")
            c.radio.mobile_noise_figure_db = parse_number<double>(key, val);
        else if (key == "bs_antenna_gain_dbi")
            c.radio.bs_antenna_gain_dbi = parse_number<double>(key, val);
        else if (key == "mobile_antenna_gain_dbi")
            c.radio.mobile_antenna_gain_dbi = parse_number<double>(key, val);
        else if (key == "bandwidth_hz")
            c.radio.bandwidth_hz = parse_number<double>(key, val);
        else if (key == "carrier_ghz")
            c.radio.carrier_ghz = parse_number<double>(key, val);
        else if (key == "cell_radius_m")
            c.cell_radius_m = parse_number<double>(key, val);
        else if (key == "min_distance_m")
            c.min_distance_m = parse_number<double>(key, val);
        else if (key == "schemes")
        {
            c.schemes.clear();
            for (const auto &s : detail::split_list(val))
                c.schemes.push_back(parse_scheme(s));
        }
        else if (key == "links")
        {
            c.links.clear();
            for (const auto &s : detail::split_list(val))
                c.links.push_back(parse_link(s));
        }
        else if (key == "single_cell_zf")
            c.single_cell_zf = detail::parse_bool(key, val);
        else if (key == "drops")
            c.drops = parse_number<int>(key, val);
        else if (key == "seed")
            c.seed = parse_number<std::uint64_t>(key, val);
        else if (key == "output")
            c.output = val;
        else
            throw ConfigError("config: unknown key '" + key + "'");
    }
    return c;
}

inline ScenarioConfig parse_config(const std::string &text)
{
    std::istringstream is(text);
    return parse_config(is);
}

/// Canonical serialization; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ScenarioConfig &c)
{
    using detail::format_double;
    std::ostringstream os;
    auto join = [](const auto &items) {
        std::string s;
        for (const auto &i : items)
            s += (s.empty() ? "" : ",") + std::string(to_string(i));
        return s;
    };
    os << "antennas_per_cell = " << c.antennas_per_cell << '\n'
       << "users_per_cell = " << c.users_per_cell << '\n'
       << "cell_count = " << c.cell_count << '\n'
       << "array_type = " << c.array_type << '\n'
       << "bs_height_m = " << format_double(c.bs_height_m) << '\n'
       << "user_height_m = " << format_double(c.user_height_m) << '\n'
       << "bs_power_w = " << format_double(c.radio.bs_power_w) << '\n'
       << "mobile_power_w = " << format_double(c.radio.mobile_power_w) << '\n'
       << "bs_noise_figure_db = " << format_double(c.radio.bs_noise_figure_db) << '\n'
       << "mobile_noise_figure_db = " << format_double(c.radio.mobile_noise_figure_db) << '\n'
       << "bs_antenna_gain_dbi = " << format_double(c.radio.bs_antenna_gain_dbi) << '\n'
       << "mobile_antenna_gain_dbi = " << format_double(c.radio.mobile_antenna_gain_dbi) << '\n'
       << "bandwidth_hz = " << format_double(c.radio.bandwidth_hz) << '\n'
       << "carrier_ghz = " << format_double(c.radio.carrier_ghz) << '\n'
       << "cell_radius_m = " << format_double(c.cell_radius_m) << '\n'
       << "min_distance_m = " << format_double(c.min_distance_m) << '\n'
       << "schemes = " << join(c.schemes) << '\n'
       << "links = " << join(c.links) << '\n'
       << "single_cell_zf = " << (c.single_cell_zf ? "true" : "false") << '\n'
       << "drops = " << c.drops << '\n'
       << "seed = " << c.seed << '\n'
       << "output = " << c.output << '\n';
    return os.str();
}

// ---------- Scenario context and drops ----------

struct ScenarioContext
{
    ScenarioConfig config;
    CellLayout layout;
    std::vector<ArrayGeometry> arrays;
    LinkBudget budget;

    explicit ScenarioContext(ScenarioConfig cfg) : config(std::move(cfg))
    {
        validate(config);
        budget = link_budget(config.radio);
        layout = hex_centers(config.cell_count, config.cell_radius_m);
        for (const auto &c : layout.centers)
            arrays.push_back(circular_array(config.antennas_per_cell, budget.wavelength, config.bs_height_m, c));
    }

    double rho(Link link) const { return link == Link::Downlink ? budget.rho_dl : budget.rho_ul; }
};

struct DropChannels
{
    ChannelSet channels;
    std::vector<GramInverse> grams; // filled when ZF is requested
    UserDrop users;
    int resamples = 0;
    std::vector<std::string> log;
};

inline constexpr int max_drop_attempts = 1000;

/// Channels for drop `index`. A geometry that yields a singular ZF Gram matrix (or a user on an
/// antenna) is redrawn from the next derived seed; redraws are counted and logged.
inline DropChannels drop_channels(const ScenarioContext &ctx, int index)
{
    const auto &cfg = ctx.config;
    DropChannels out;
    for (int attempt = 0; attempt < max_drop_attempts; ++attempt)
    {
        const std::uint64_t seed =
            derive_seed(cfg.seed, {static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(attempt)});
        try
        {
            out.users = drop_users(ctx.layout, cfg.users_per_cell, cfg.min_distance_m, cfg.user_height_m, seed);
            out.channels = build_channel_set(ctx.layout, ctx.arrays, out.users, ctx.budget.wavelength);
            out.grams.clear();
            if (cfg.wants(Scheme::ZF))
                out.grams = invert_grams(out.channels);
            return out;
        }
        catch (const SingularChannelError &e)
        {
            out.log.push_back("drop " + std::to_string(index) + " attempt " + std::to_string(attempt) +
                              ": resampled (" + e.what() + ")");
        }
        catch (const SingularGeometryError &e)
        {
            out.log.push_back("drop " + std::to_string(index) + " attempt " + std::to_string(attempt) +
                              ": resampled (" + e.what() + ")");
        }
        ++out.resamples;
    }
    throw ConfigError("drop " + std::to_string(index) + ": no usable geometry after " +
                      std::to_string(max_drop_attempts) + " attempts");
}

inline std::string series_name(Scheme s, Link l, bool single_cell = false)
{
    return std::string(to_string(s)) + " " + std::string(to_string(l)) + (single_cell ? "-1" : "");
}

// Series in output order; only those the config asks for are produced.
inline std::vector<std::string> series_names(const ScenarioConfig &c)
{
    std::vector<std::string> out;
    for (Scheme s : {Scheme::MR, Scheme::ZF})
        for (Link l : {Link::Downlink, Link::Uplink})
            if (c.wants(s) && c.wants(l))
                out.push_back(series_name(s, l));
    if (c.wants(Scheme::ZF) && c.single_cell_zf)
        for (Link l : {Link::Downlink, Link::Uplink})
            if (c.wants(l))
                out.push_back(series_name(Scheme::ZF, l, true));
    return out;
}

struct DropRecord
{
    int index = 0;
    int resamples = 0;
    std::map<std::string, RVector> sinr;       // linear SINR samples per series
    std::map<std::string, double> common_target; // max-min common SINR per multi-cell series
    std::vector<std::string> log;
};

inline DropRecord evaluate_drop(const ScenarioContext &ctx, int index)
{
    const auto &cfg = ctx.config;
    DropChannels dc = drop_channels(ctx, index);

    DropRecord rec;
    rec.index = index;
    rec.resamples = dc.resamples;
    rec.log = std::move(dc.log);

    for (Scheme s : {Scheme::MR, Scheme::ZF})
        for (Link l : {Link::Downlink, Link::Uplink})
        {
            if (!cfg.wants(s) || !cfg.wants(l))
                continue;
            const double rho = ctx.rho(l);
            const PcSystem sys = build_pc_system(dc.channels, s, l, rho, dc.grams);
            const MaxMinResult mm = maxmin_common_target(sys);
            const SinrReport rep = effective_sinr(dc.channels, s, l, to_allocation(sys, mm.solution), rho, dc.grams);
            rec.sinr[series_name(s, l)] = rep.stacked();
            rec.common_target[series_name(s, l)] = mm.target;
        }

    if (cfg.wants(Scheme::ZF) && cfg.single_cell_zf)
        for (Link l : {Link::Downlink, Link::Uplink})
        {
            if (!cfg.wants(l))
                continue;
            const PowerAllocation alloc = single_cell_zf_allocation(dc.grams, l);
            const SinrReport rep = effective_sinr(dc.channels, Scheme::ZF, l, alloc, ctx.rho(l), dc.grams);
            rec.sinr[series_name(Scheme::ZF, l, true)] = rep.values.row(0).transpose(); // centre cell
        }
    return rec;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency).
/// Results land at their index, so the outcome does not depend on the worker count.
template <typename R, typename F>
std::vector<R> parallel_map(int n, int threads, F &&fn)
{
    std::vector<R> out(n);
    int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::max(1, std::min(workers, n));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (int i = next++; i < n; i = next++)
        {
            try
            {
                out[i] = fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = n;
            }
        }
    };
    if (workers == 1)
        work();
    else
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

// ---------- CDF table ----------

struct CdfSeries
{
    std::string name;
    std::vector<double> sinr_db; // ascending
};

struct CdfTable
{
    std::vector<CdfSeries> series;

    const CdfSeries *find(const std::string &name) const
    {
        for (const auto &s : series)
            if (s.name == name)
                return &s;
        return nullptr;
    }
};

/// `series,sinr_db,cdf` rows; within a series the i-th smallest of N samples has cdf i/N.
inline void write_cdf_csv(std::ostream &os, const CdfTable &t)
{
    os << "series,sinr_db,cdf\n";
    char buf[64];
    for (const auto &s : t.series)
    {
        const auto n = s.sinr_db.size();
        for (std::size_t i = 0; i < n; ++i)
        {
            std::snprintf(buf, sizeof buf, ",%.10g,%.10g\n", s.sinr_db[i], static_cast<double>(i + 1) / n);
            os << s.name << buf;
        }
    }
}

struct ScenarioResult
{
    CdfTable cdf;
    std::vector<DropRecord> drops;
    int resamples = 0;
    std::vector<std::string> log;
};

inline ScenarioResult run_scenario(const ScenarioConfig &config, int threads = 0)
{
    const ScenarioContext ctx(config);
    ScenarioResult res;
    res.drops = parallel_map<DropRecord>(config.drops, threads, [&](int i) { return evaluate_drop(ctx, i); });

    for (const auto &name : series_names(config))
    {
        CdfSeries s{name, {}};
        for (const auto &d : res.drops)
            for (double v : d.sinr.at(name))
                s.sinr_db.push_back(to_db(v));
        std::sort(s.sinr_db.begin(), s.sinr_db.end());
        res.cdf.series.push_back(std::move(s));
    }
    for (const auto &d : res.drops)
    {
        res.resamples += d.resamples;
        res.log.insert(res.log.end(), d.log.begin(), d.log.end());
    }
    return res;
}

inline void write_summary(std::ostream &os, const ScenarioResult &res)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %8s %10s %10s %10s %10s\n", "series", "samples", "min_db", "p05_db",
                  "median_db", "max_db");
    os << buf;
    for (const auto &s : res.cdf.series)
    {
        const auto &v = s.sinr_db;
        if (v.empty())
            continue;
        auto q = [&](double p) { return v[static_cast<std::size_t>(p * (v.size() - 1) + 0.5)]; };
        std::snprintf(buf, sizeof buf, "%-8s %8zu %10.3f %10.3f %10.3f %10.3f\n", s.name.c_str(), v.size(), v.front(),
                      q(0.05), q(0.5), v.back());
        os << buf;
    }
    os << "drops: " << res.drops.size() << ", resampled geometries: " << res.resamples << '\n';
}

// ---------- Closed form vs Monte Carlo ----------

inline constexpr double verify_sigma_limit = 5.0;

struct VerifyCheck
{
    int drop = 0;
    Scheme scheme = Scheme::MR;
    Link link = Link::Downlink;
    double max_abs_sigma = 0.0;
    int worst_cell = 0;
    int worst_user = 0;
    double closed_form_sinr = 0.0; // at the worst user
    double empirical_sinr = 0.0;
};

struct VerifyReport
{
    std::size_t symbols = 0;
    std::vector<VerifyCheck> checks;
    double max_abs_sigma = 0.0;

    bool passed() const { return max_abs_sigma <= verify_sigma_limit; }
};

/// Random admissible allocation: entries uniform in [0.1, 1], scaled to unit l1 norm downlink.
inline PowerAllocation random_allocation(Link link, int cells, int users, std::uint64_t seed)
{
    Engine eng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<RVector> per_cell;
    for (int l = 0; l < cells; ++l)
    {
        RVector e(users);
        for (int k = 0; k < users; ++k)
            e(k) = u(eng);
        if (link == Link::Downlink)
            e /= e.sum();
        per_cell.push_back(e);
    }
    return PowerAllocation(norm_for(link), std::move(per_cell));
}

inline VerifyCheck verify_one(const ChannelSet &channels, Scheme scheme, Link link, const PowerAllocation &alloc,
                              double rho, std::size_t n_symbols, std::uint64_t seed)
{
    const SinrReport cf = effective_sinr(channels, scheme, link, alloc, rho);
    const SimResult sim = simulate(channels, scheme, link, alloc, rho, n_symbols, seed);
    const RMatrix z = deviation_sigma(sim, cf);
    VerifyCheck chk;
    chk.scheme = scheme;
    chk.link = link;
    for (int l = 0; l < z.rows(); ++l)
        for (int k = 0; k < z.cols(); ++k)
            if (std::isfinite(z(l, k)) && std::abs(z(l, k)) >= chk.max_abs_sigma)
            {
                chk.max_abs_sigma = std::abs(z(l, k));
                chk.worst_cell = l;
                chk.worst_user = k;
                chk.closed_form_sinr = cf.at(l, k);
                chk.empirical_sinr = sim.sinr(l, k);
            }
    return chk;
}

inline VerifyReport verify(const ScenarioConfig &config, std::size_t n_symbols, int threads = 0)
{
    if (n_symbols < 2)
        throw ConfigError("verify: at least two symbols are needed for a standard error");
    const ScenarioContext ctx(config);

    struct Job
    {
        int drop;
        Scheme scheme;
        Link link;
    };
    std::vector<Job> jobs;
    for (int d = 0; d < config.drops; ++d)
        for (Scheme s : config.schemes)
            for (Link l : config.links)
                jobs.push_back({d, s, l});

    auto checks = parallel_map<VerifyCheck>(static_cast<int>(jobs.size()), threads, [&](int i) {
        const Job &j = jobs[i];
        const DropChannels dc = drop_channels(ctx, j.drop);
        const auto tag = static_cast<std::uint64_t>(static_cast<int>(j.scheme) * 2 + static_cast<int>(j.link));
        const PowerAllocation alloc =
            random_allocation(j.link, dc.channels.cells(), dc.channels.users(),
                              derive_seed(config.seed, {static_cast<std::uint64_t>(j.drop), tag, 0xa11cULL}));
        VerifyCheck c = verify_one(dc.channels, j.scheme, j.link, alloc, ctx.rho(j.link), n_symbols,
                                   derive_seed(config.seed, {static_cast<std::uint64_t>(j.drop), tag, 0x5eedULL}));
        c.drop = j.drop;
        return c;
    });

    VerifyReport rep;
    rep.symbols = n_symbols;
    rep.checks = std::move(checks);
    for (const auto &c : rep.checks)
        rep.max_abs_sigma = std::max(rep.max_abs_sigma, c.max_abs_sigma);
    return rep;
}

inline void write_verify_report(std::ostream &os, const VerifyReport &rep)
{
    char buf[200];
    os << "closed form vs Monte Carlo, " << rep.symbols << " symbols per check, limit " << verify_sigma_limit
       << " sigma\n";
    for (const auto &c : rep.checks)
    {
        std::snprintf(buf, sizeof buf, "drop %3d  %s %s  max|z| = %6.3f  (cell %d user %d: closed %.6g, empirical %.6g)  %s\n",
                      c.drop, std::string(to_string(c.scheme)).c_str(), std::string(to_string(c.link)).c_str(),
                      c.max_abs_sigma, c.worst_cell, c.worst_user, c.closed_form_sinr, c.empirical_sinr,
                      c.max_abs_sigma <= verify_sigma_limit ? "ok" : "FAIL");
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "overall max|z| = %.3f -> %s\n", rep.max_abs_sigma, rep.passed() ? "PASS" : "FAIL");
    os << buf;
}

} // namespace lmimo

#endif
