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

#include "qlbe/physcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qlbe {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

std::optional<std::string> validate(const GasSpec& gas) {
    if (!finite_positive(gas.mass_m)) return "mass_m must be finite and > 0";
    if (!finite_positive(gas.inverse_temperature_beta))
        return "inverse_temperature_beta must be finite and > 0";
    if (!finite_positive(gas.number_density_n))
        return "number_density_n must be finite and > 0";
    return std::nullopt;
}

std::optional<std::string> validate(const ParticleSpec& particle) {
    if (!finite_positive(particle.mass_M)) return "mass_M must be finite and > 0";
    return std::nullopt;
}

std::optional<std::string> validate(const UnitSystem& units) {
    if (!finite_positive(units.hbar)) return "hbar must be finite and > 0";
    return std::nullopt;
}

std::optional<std::string> validate(const PotentialSpec& potential) {
    if (const auto* g = std::get_if<GaussianFourierPotential>(&potential)) {
        if (!std::isfinite(g->strength_g)) return "strength_g must be finite";
        if (!(std::isfinite(g->range_r) && g->range_r >= 0.0))
            return "range_r must be finite and >= 0";
        return std::nullopt;
    }
    const auto& tab = std::get<TabulatedPotential>(potential);
    if (tab.q.size() != tab.value.size()) return "q/value tables must have equal length";
    if (tab.q.empty()) return "tabulated potential must have at least one sample";
    for (std::size_t i = 0; i < tab.q.size(); ++i) {
        if (!std::isfinite(tab.q[i]) || tab.q[i] < 0.0)
            return "q samples must be finite and >= 0 (ordering)";
        if (i > 0 && tab.q[i] <= tab.q[i - 1])
            return "q samples must be strictly increasing (ordering)";
        if (!std::isfinite(tab.value[i])) return "value samples must be finite";
    }
    return std::nullopt;
}

double potential_ft(const PotentialSpec& potential, double q, const UnitSystem& units) {
    if (q < 0.0) throw DomainError("potential_ft: q must be >= 0");
    if (const auto* g = std::get_if<GaussianFourierPotential>(&potential)) {
        const double h = units.hbar;
        const double norm = std::pow(2.0 * std::numbers::pi * h, 3);
        const double arg = q * g->range_r / h;
        return g->strength_g * std::exp(-0.5 * arg * arg) / norm;
    }
    const auto& tab = std::get<TabulatedPotential>(potential);
    if (q < tab.q.front() || q > tab.q.back()) return 0.0;
    auto it = std::upper_bound(tab.q.begin(), tab.q.end(), q);
    if (it == tab.q.begin()) return tab.value.front();
    if (it == tab.q.end()) return tab.value.back();
    const std::size_t hi = static_cast<std::size_t>(it - tab.q.begin());
    const std::size_t lo = hi - 1;
    const double w = (q - tab.q[lo]) / (tab.q[hi] - tab.q[lo]);
    return tab.value[lo] + w * (tab.value[hi] - tab.value[lo]);
}

double potential_ft_bound(const PotentialSpec& potential, const UnitSystem& units) {
    if (const auto* g = std::get_if<GaussianFourierPotential>(&potential)) {
        const double norm = std::pow(2.0 * std::numbers::pi * units.hbar, 3);
        return std::abs(g->strength_g) / norm;
    }
    const auto& tab = std::get<TabulatedPotential>(potential);
    double m = 0.0;
    for (double v : tab.value) m = std::max(m, std::abs(v));
    return m;
}

double potential_support_radius(const PotentialSpec& potential, const UnitSystem& units) {
    if (const auto* g = std::get_if<GaussianFourierPotential>(&potential)) {
        if (g->range_r <= 0.0) return std::numeric_limits<double>::infinity();
        // |t~|^2 falls below ~1e-20 of its peak past q r / hbar ~ 7
        return 7.0 * units.hbar / g->range_r;
    }
    return std::get<TabulatedPotential>(potential).q.back();
}

bool is_zero_potential(const PotentialSpec& potential) {
    if (const auto* g = std::get_if<GaussianFourierPotential>(&potential))
        return g->strength_g == 0.0;
    const auto& tab = std::get<TabulatedPotential>(potential);
    return std::all_of(tab.value.begin(), tab.value.end(),
                       [](double v) { return v == 0.0; });
}

} // namespace qlbe
