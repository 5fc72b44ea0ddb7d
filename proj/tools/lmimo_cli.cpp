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

// lmimo command line:
//   lmimo run           scenario -> CSV of per-user SINR CDFs
//   lmimo verify        closed-form SINRs against the Monte Carlo oracle
//   lmimo dump-channels matrix text dump of one drop's channel set
//
// Exit codes: 0 success, 1 usage/config error, 2 verification failure.

#include <lmimo/lmimo.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace
{
constexpr int exit_usage = 1;
constexpr int exit_verify_failed = 2;

struct CommonOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::string out;
    int threads = 0;
};

void add_common(CLI::App *cmd, CommonOptions &o)
{
    cmd->add_option("--config", o.config_path, "Scenario file (key = value); defaults to the 60 GHz 7-cell set")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Master seed (overrides the config)");
    cmd->add_option("--drops", o.drops, "Number of drops (overrides the config)")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "Output path (overrides the config; '-' for stdout)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

lmimo::ScenarioConfig load_config(const CommonOptions &o)
{
    lmimo::ScenarioConfig cfg;
    if (!o.config_path.empty())
    {
        std::ifstream in(o.config_path);
        if (!in)
            throw lmimo::ConfigError("cannot open config '" + o.config_path + "'");
        cfg = lmimo::parse_config(in);
    }
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.drops)
        cfg.drops = *o.drops;
    if (!o.out.empty())
        cfg.output = o.out;
    lmimo::validate(cfg);
    return cfg;
}

// Runs `body` against the configured output stream (stdout when the path is empty or "-").
template <typename F>
void with_output(const std::string &path, F &&body)
{
    if (path.empty() || path == "-")
    {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw lmimo::ConfigError("cannot write '" + path + "'");
    body(out);
}

int cmd_run(const CommonOptions &o)
{
    const auto cfg = load_config(o);
    const auto res = lmimo::run_scenario(cfg, o.threads);
    for (const auto &line : res.log)
        std::cerr << line << '\n';
    with_output(cfg.output, [&](std::ostream &os) { lmimo::write_cdf_csv(os, res.cdf); });
    lmimo::write_summary(std::cerr, res);
    return 0;
}

int cmd_verify(const CommonOptions &o, std::size_t symbols)
{
    const auto cfg = load_config(o);
    const auto rep = lmimo::verify(cfg, symbols, o.threads);
    with_output(o.out, [&](std::ostream &os) { lmimo::write_verify_report(os, rep); });
    return rep.passed() ? 0 : exit_verify_failed;
}

int cmd_dump(const CommonOptions &o, int drop)
{
    const auto cfg = load_config(o);
    const lmimo::ScenarioContext ctx(cfg);
    const auto dc = lmimo::drop_channels(ctx, drop);
    with_output(cfg.output, [&](std::ostream &os) { lmimo::write_channel_set(os, dc.channels); });
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multi-cell Massive MIMO in line-of-sight: closed-form SINRs, power control and Monte Carlo checks"};
    app.require_subcommand(1);

    CommonOptions run_opts, verify_opts, dump_opts;
    std::size_t symbols = 100000;
    int dump_drop = 0;

    auto *run = app.add_subcommand("run", "Run drops and write per-user SINR CDFs as CSV");
    add_common(run, run_opts);

    auto *ver = app.add_subcommand("verify", "Check closed-form SINRs against symbol-level simulation");
    add_common(ver, verify_opts);
    ver->add_option("--symbols", symbols, "Symbols per Monte Carlo check");

    auto *dump = app.add_subcommand("dump-channels", "Write one drop's channel matrices as text");
    add_common(dump, dump_opts);
    dump->add_option("--drop", dump_drop, "Drop index")->check(CLI::NonNegativeNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try
    {
        if (*run)
            return cmd_run(run_opts);
        if (*ver)
            return cmd_verify(verify_opts, symbols);
        if (*dump)
            return cmd_dump(dump_opts, dump_drop);
    }
    catch (const lmimo::ConfigError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const lmimo::Error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
