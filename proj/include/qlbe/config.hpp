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

#ifndef QLBE_CONFIG_HPP
#define QLBE_CONFIG_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qlbe/physcore.hpp"

namespace qlbe {

enum class Scenario { dsf, fdt, xsec, kinetic, brownian, friction, covariance };

const char* scenario_name(Scenario s);

/// Scenario numerics; every field has a default, config keys override.
struct Numerics {
    // dsf
    std::string dsf_variant = "both"; // mb_exact | mb_limit | both
    double dsf_q_min = 0.25, dsf_q_max = 8.0;
    double dsf_e_min = 0.05, dsf_e_max = 4.0;
    int dsf_q_count = 10, dsf_e_count = 10;
    std::string dsf_spacing = "log"; // log | linear
    // fdt
    std::vector<double> fdt_q_values = {0.5, 1.0, 2.0};
    std::vector<double> fdt_t_values = {0.0, 0.5, 1.0, 2.0};
    // xsec
    std::vector<double> xsec_p_values = {0.5, 1.5, 3.0};
    // kinetic
    std::string kinetic_variant = "mb_exact";
    std::string kinetic_initial = "maxwell"; // maxwell | fixed
    double kinetic_p0x = 0.0, kinetic_p0y = 0.0, kinetic_p0z = 0.0;
    double kinetic_horizon = 50.0;
    int kinetic_n_traj = 2000;
    int kinetic_snapshots = 51;
    int kinetic_band_enabled = 1;
    double kinetic_band_p_min = -8.0, kinetic_band_p_max = 8.0;
    int kinetic_band_count = 129;
    std::vector<double> kinetic_band_offsets = {0.0, 0.5};
    double kinetic_band_dt = 0.02;
    int kinetic_band_steps = 200;
    int kinetic_band_stride = 50;
    // brownian
    double brownian_eta = 1.0;
    double brownian_x_min = -10.0, brownian_x_max = 10.0;
    int brownian_count = 96;
    double brownian_dt = 0.0; // 0 = stability-bound automatic
    int brownian_steps = 0;   // 0 = sized to 3.6 relaxation times
    int brownian_stride = 10;
    double brownian_mean_x0 = 0.0;
    double brownian_mean_p0 = std::numeric_limits<double>::quiet_NaN(); // NaN = 2 dp_th
    double brownian_var_x0 = std::numeric_limits<double>::quiet_NaN();  // NaN = dx_th^2
    double brownian_var_p0 = std::numeric_limits<double>::quiet_NaN();  // NaN = dp_th^2
    double brownian_cov0 = 0.0;
    int brownian_snapshot = 0;
    // friction
    std::int64_t friction_trapezoid_points = 1000000;
};

struct RunConfig {
    Scenario scenario = Scenario::dsf;
    GasSpec gas;
    ParticleSpec particle;
    UnitSystem units;
    PotentialSpec potential = GaussianFourierPotential{};
    bool particle_mass_set = false;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    Numerics numerics;
    std::string raw_text;
};

/// Strict flat dotted-key config: `key = value` lines, '#' comments, UTF-8.
/// Unknown keys, duplicate keys, type mismatches and missing required keys
/// raise ConfigError with the offending line number.
RunConfig parse_config(const std::string& text);

/// 64-bit FNV-1a of the raw config text, as 16 hex digits.
std::string config_digest(const std::string& text);

} // namespace qlbe

#endif
