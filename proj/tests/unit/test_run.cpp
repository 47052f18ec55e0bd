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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "qlbe/run.hpp"

using namespace qlbe;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("qlbe_test_" + tag);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("dsf run is deterministic and passes its invariants") {
    const std::string text =
        "run.scenario = dsf\ndsf.q_count = 6\ndsf.e_count = 6\n";
    RunConfig cfg = parse_config(text);
    const fs::path dir_a = temp_dir("dsf_a");
    const fs::path dir_b = temp_dir("dsf_b");
    cfg.out_dir = dir_a.string();
    const RunSummary a = run(cfg);
    CHECK(a.all_passed());
    CHECK(a.scenario == "dsf");
    cfg.out_dir = dir_b.string();
    run(cfg);
    CHECK(slurp(dir_a / "dsf.csv") == slurp(dir_b / "dsf.csv"));
    CHECK(fs::exists(dir_a / "summary.json"));
}

TEST_CASE("kinetic run: byte-identical outputs for identical config and seed") {
    const std::string text =
        "run.scenario = kinetic\n"
        "particle.mass = 1\n"
        "run.seed = 12345\n"
        "kinetic.n_traj = 64\n"
        "kinetic.horizon = 20\n"
        "kinetic.snapshots = 11\n"
        "kinetic.band.count = 33\n"
        "kinetic.band.steps = 40\n"
        "kinetic.band.stride = 20\n";
    RunConfig cfg = parse_config(text);
    const fs::path dir_a = temp_dir("kin_a");
    const fs::path dir_b = temp_dir("kin_b");
    cfg.out_dir = dir_a.string();
    const RunSummary a = run(cfg);
    cfg.out_dir = dir_b.string();
    const RunSummary b = run(cfg);
    CHECK(a.all_passed());
    CHECK(b.all_passed());
    for (const char* name : {"kinetic.csv", "kinetic_histogram.csv", "kinetic_band.csv"})
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
}

TEST_CASE("friction run reproduces the committed regression value") {
    std::ifstream ref_in(std::string(QLBE_SOURCE_DIR) +
                         "/tests/data/friction_eta_reference.txt");
    REQUIRE(ref_in.good());
    std::string line;
    double reference = 0.0;
    while (std::getline(ref_in, line)) {
        if (line.empty() || line[0] == '#') continue;
        reference = std::stod(line);
        break;
    }

    const std::string text = slurp(std::string(QLBE_SOURCE_DIR) +
                                   "/configs/friction_reference.cfg");
    RunConfig cfg = parse_config(text);
    const fs::path dir = temp_dir("fric");
    cfg.out_dir = dir.string();
    const RunSummary s = run(cfg);
    CHECK(s.all_passed());
    CHECK(std::abs(s.scalars.at("eta") - reference) / reference < 1e-8);
    CHECK(fs::exists(dir / "friction.csv"));
}

TEST_CASE("covariance run passes all residual checks") {
    const std::string text = "run.scenario = covariance\nparticle.mass = 1\n";
    RunConfig cfg = parse_config(text);
    const fs::path dir = temp_dir("cov");
    cfg.out_dir = dir.string();
    const RunSummary s = run(cfg);
    CHECK(s.all_passed());
    CHECK(fs::exists(dir / "covariance.csv"));
}

TEST_CASE("summary json lists every check exactly once") {
    RunConfig cfg = parse_config("run.scenario = dsf\ndsf.q_count = 4\ndsf.e_count = 4\n");
    const fs::path dir = temp_dir("sum");
    cfg.out_dir = dir.string();
    const RunSummary s = run(cfg);
    std::vector<std::string> names;
    for (const auto& c : s.checks) names.push_back(c.name);
    std::sort(names.begin(), names.end());
    CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
    const std::string summary = slurp(dir / "summary.json");
    for (const auto& n : names) CHECK(summary.find(n) != std::string::npos);
}
