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

#include "qlbe/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

namespace qlbe {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::dsf: return "dsf";
        case Scenario::fdt: return "fdt";
        case Scenario::xsec: return "xsec";
        case Scenario::kinetic: return "kinetic";
        case Scenario::brownian: return "brownian";
        case Scenario::friction: return "friction";
        case Scenario::covariance: return "covariance";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

class KeyTable {
public:
    explicit KeyTable(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            const std::size_t hash = raw.find('#');
            if (hash != std::string::npos) raw = raw.substr(0, hash);
            const std::string stripped = trim(raw);
            if (stripped.empty()) continue;
            const std::size_t eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ConfigError(line, "expected `key = value`");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty()) throw ConfigError(line, "empty key");
            if (value.empty()) throw ConfigError(line, "empty value for key `" + key + "`");
            auto [it, inserted] = entries_.emplace(key, Entry{value, line, false});
            if (!inserted)
                throw ConfigError(line, "duplicate key `" + key + "` (first set on line " +
                                            std::to_string(it->second.line) + ")");
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> get_string(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.consumed = true;
        return it->second.value;
    }

    double get_double(const std::string& key, double fallback) {
        auto s = get_string(key);
        if (!s) return fallback;
        return parse_double(key, *s);
    }

    int get_int(const std::string& key, int fallback) {
        auto s = get_string(key);
        if (!s) return fallback;
        return static_cast<int>(parse_integer(key, *s));
    }

    std::int64_t get_int64(const std::string& key, std::int64_t fallback) {
        auto s = get_string(key);
        if (!s) return fallback;
        return parse_integer(key, *s);
    }

    std::uint64_t parse_u64(const std::string& key, const std::string& s) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ConfigError(line_of(key), "key `" + key + "`: expected unsigned integer, got `" +
                                                s + "`");
        return v;
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) {
        auto s = get_string(key);
        if (!s) return fallback;
        std::vector<double> out;
        std::istringstream in(*s);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            out.push_back(parse_double(key, item));
        }
        if (out.empty()) throw ConfigError(line_of(key), "key `" + key + "`: empty list");
        return out;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    double parse_double(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(line_of(key),
                              "key `" + key + "`: expected number, got `" + s + "`");
        }
    }

    std::int64_t parse_integer(const std::string& key, const std::string& s) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ConfigError(line_of(key),
                              "key `" + key + "`: expected integer, got `" + s + "`");
        return v;
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.consumed)
                throw ConfigError(entry.line, "unknown key `" + key + "`");
    }

private:
    std::map<std::string, Entry> entries_;
};

Scenario parse_scenario(KeyTable& keys) {
    auto s = keys.get_string("run.scenario");
    if (!s) throw ConfigError(0, "missing required key: run.scenario");
    static const std::map<std::string, Scenario> names = {
        {"dsf", Scenario::dsf},           {"fdt", Scenario::fdt},
        {"xsec", Scenario::xsec},         {"kinetic", Scenario::kinetic},
        {"brownian", Scenario::brownian}, {"friction", Scenario::friction},
        {"covariance", Scenario::covariance}};
    auto it = names.find(*s);
    if (it == names.end())
        throw ConfigError(keys.line_of("run.scenario"), "unknown scenario `" + *s + "`");
    return it->second;
}

PotentialSpec parse_potential(KeyTable& keys) {
    const std::string kind = keys.get_string("potential.kind").value_or("gaussian");
    if (kind == "gaussian") {
        GaussianFourierPotential g;
        g.strength_g = keys.get_double("potential.g", 1.0);
        g.range_r = keys.get_double("potential.r", 1.0);
        return g;
    }
    if (kind == "tabulated") {
        auto table = keys.get_string("potential.table");
        if (!table) throw ConfigError(0, "missing required key: potential.table");
        TabulatedPotential tab;
        std::istringstream in(*table);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            const std::size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError(keys.line_of("potential.table"),
                                  "potential.table entries must be `q:value`");
            tab.q.push_back(keys.parse_double("potential.table", trim(item.substr(0, colon))));
            tab.value.push_back(
                keys.parse_double("potential.table", trim(item.substr(colon + 1))));
        }
        if (auto err = validate(PotentialSpec(tab)))
            throw ConfigError(keys.line_of("potential.table"), "potential.table: " + *err);
        return tab;
    }
    throw ConfigError(keys.line_of("potential.kind"),
                      "potential.kind must be `gaussian` or `tabulated`");
}

bool scenario_needs_particle(Scenario s) {
    return s == Scenario::xsec || s == Scenario::kinetic || s == Scenario::brownian ||
           s == Scenario::friction || s == Scenario::covariance;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    KeyTable keys(text);
    RunConfig cfg;
    cfg.raw_text = text;
    cfg.scenario = parse_scenario(keys);

    cfg.units.hbar = keys.get_double("units.hbar", 1.0);
    cfg.gas.mass_m = keys.get_double("gas.mass", 1.0);
    cfg.gas.inverse_temperature_beta = keys.get_double("gas.beta", 1.0);
    cfg.gas.number_density_n = keys.get_double("gas.density", 1.0);

    cfg.particle_mass_set = keys.has("particle.mass");
    cfg.particle.mass_M = keys.get_double("particle.mass", 1.0);
    if (scenario_needs_particle(cfg.scenario) && !cfg.particle_mass_set)
        throw ConfigError(0, "missing required key: particle.mass (needed by scenario " +
                                 std::string(scenario_name(cfg.scenario)) + ")");

    cfg.potential = parse_potential(keys);

    if (auto s = keys.get_string("run.seed")) cfg.seed = keys.parse_u64("run.seed", *s);
    if (cfg.scenario == Scenario::kinetic && !cfg.seed)
        throw ConfigError(0, "missing required key: run.seed (stochastic scenario)");
    cfg.out_dir = keys.get_string("run.out").value_or("out");

    Numerics& n = cfg.numerics;
    n.dsf_variant = keys.get_string("dsf.variant").value_or(n.dsf_variant);
    n.dsf_q_min = keys.get_double("dsf.q_min", n.dsf_q_min);
    n.dsf_q_max = keys.get_double("dsf.q_max", n.dsf_q_max);
    n.dsf_q_count = keys.get_int("dsf.q_count", n.dsf_q_count);
    n.dsf_e_min = keys.get_double("dsf.e_min", n.dsf_e_min);
    n.dsf_e_max = keys.get_double("dsf.e_max", n.dsf_e_max);
    n.dsf_e_count = keys.get_int("dsf.e_count", n.dsf_e_count);
    n.dsf_spacing = keys.get_string("dsf.spacing").value_or(n.dsf_spacing);
    n.fdt_q_values = keys.get_double_list("fdt.q_values", n.fdt_q_values);
    n.fdt_t_values = keys.get_double_list("fdt.t_values", n.fdt_t_values);
    n.xsec_p_values = keys.get_double_list("xsec.p_values", n.xsec_p_values);
    n.kinetic_variant = keys.get_string("kinetic.variant").value_or(n.kinetic_variant);
    n.kinetic_initial = keys.get_string("kinetic.initial").value_or(n.kinetic_initial);
    n.kinetic_p0x = keys.get_double("kinetic.p0x", n.kinetic_p0x);
    n.kinetic_p0y = keys.get_double("kinetic.p0y", n.kinetic_p0y);
    n.kinetic_p0z = keys.get_double("kinetic.p0z", n.kinetic_p0z);
    n.kinetic_horizon = keys.get_double("kinetic.horizon", n.kinetic_horizon);
    n.kinetic_n_traj = keys.get_int("kinetic.n_traj", n.kinetic_n_traj);
    n.kinetic_snapshots = keys.get_int("kinetic.snapshots", n.kinetic_snapshots);
    n.kinetic_band_enabled = keys.get_int("kinetic.band.enabled", n.kinetic_band_enabled);
    n.kinetic_band_p_min = keys.get_double("kinetic.band.p_min", n.kinetic_band_p_min);
    n.kinetic_band_p_max = keys.get_double("kinetic.band.p_max", n.kinetic_band_p_max);
    n.kinetic_band_count = keys.get_int("kinetic.band.count", n.kinetic_band_count);
    n.kinetic_band_offsets =
        keys.get_double_list("kinetic.band.offsets", n.kinetic_band_offsets);
    n.kinetic_band_dt = keys.get_double("kinetic.band.dt", n.kinetic_band_dt);
    n.kinetic_band_steps = keys.get_int("kinetic.band.steps", n.kinetic_band_steps);
    n.kinetic_band_stride = keys.get_int("kinetic.band.stride", n.kinetic_band_stride);
    n.brownian_eta = keys.get_double("brownian.eta", n.brownian_eta);
    n.brownian_x_min = keys.get_double("brownian.x_min", n.brownian_x_min);
    n.brownian_x_max = keys.get_double("brownian.x_max", n.brownian_x_max);
    n.brownian_count = keys.get_int("brownian.count", n.brownian_count);
    n.brownian_dt = keys.get_double("brownian.dt", n.brownian_dt);
    n.brownian_steps = keys.get_int("brownian.steps", n.brownian_steps);
    n.brownian_stride = keys.get_int("brownian.stride", n.brownian_stride);
    n.brownian_mean_x0 = keys.get_double("brownian.mean_x0", n.brownian_mean_x0);
    n.brownian_mean_p0 = keys.get_double("brownian.mean_p0", n.brownian_mean_p0);
    n.brownian_var_x0 = keys.get_double("brownian.var_x0", n.brownian_var_x0);
    n.brownian_var_p0 = keys.get_double("brownian.var_p0", n.brownian_var_p0);
    n.brownian_cov0 = keys.get_double("brownian.cov0", n.brownian_cov0);
    n.brownian_snapshot = keys.get_int("brownian.snapshot", n.brownian_snapshot);
    n.friction_trapezoid_points =
        keys.get_int64("friction.trapezoid_points", n.friction_trapezoid_points);

    keys.reject_unknown();

    if (auto err = validate(cfg.gas))
        throw ConfigError(0, "gas: " + *err);
    if (auto err = validate(cfg.particle))
        throw ConfigError(0, "particle: " + *err);
    if (auto err = validate(cfg.units))
        throw ConfigError(0, "units: " + *err);
    if (auto err = validate(cfg.potential))
        throw ConfigError(0, "potential: " + *err);
    return cfg;
}

std::string config_digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace qlbe
