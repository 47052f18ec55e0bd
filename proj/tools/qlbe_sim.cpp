// Copyright 2026 The qlbe-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qlbe-sim: scenario runner for the quantum linear Boltzmann toolkit.
// Usage: qlbe-sim <scenario> --config <path> [--out <dir>] [--seed <u64>]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qlbe/run.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qlbe::ConfigError(0, "cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum linear Boltzmann equation scenario runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    const std::vector<std::string> scenarios = {"dsf",      "fdt",      "xsec",    "kinetic",
                                                "brownian", "friction", "covariance"};
    for (const std::string& name : scenarios) {
        CLI::App* sub = app.add_subcommand(name, name + " scenario");
        sub->add_option("--config", config_path, "config file (flat key = value)")
            ->required();
        sub->add_option("--out", out_dir, "output directory (overrides run.out)");
        sub->add_option("--seed", seed, "seed override (overrides run.seed)")
            ->each([&seed_set](const std::string&) { seed_set = true; });
    }

    CLI11_PARSE(app, argc, argv);
    const std::string scenario = app.get_subcommands().front()->get_name();

    try {
        qlbe::RunConfig cfg = qlbe::parse_config(read_file(config_path));
        if (std::string(qlbe::scenario_name(cfg.scenario)) != scenario) {
            std::fprintf(stderr, "error: config run.scenario is `%s` but subcommand is `%s`\n",
                         qlbe::scenario_name(cfg.scenario), scenario.c_str());
            return 2;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;
        if (cfg.scenario == qlbe::Scenario::kinetic && !cfg.seed) {
            std::fprintf(stderr, "error: kinetic scenario needs a seed\n");
            return 2;
        }

        const qlbe::RunSummary summary = qlbe::run(cfg);
        for (const auto& c : summary.checks)
            std::printf("%s  %s: value %.6e, tolerance %.6e\n", c.pass ? "pass" : "FAIL",
                        c.name.c_str(), c.value, c.tolerance);
        std::printf("%s: %zu checks, wall time %.2f s -> %s\n", summary.scenario.c_str(),
                    summary.checks.size(), summary.wall_time_s, cfg.out_dir.c_str());
        return summary.all_passed() ? 0 : 1;
    } catch (const qlbe::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error [%s]: %s\n", scenario.c_str(), e.what());
        return 3;
    }
}
