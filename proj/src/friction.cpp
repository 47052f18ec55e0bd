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

#include "qlbe/friction.hpp"

#include <cmath>
#include <numbers>

#include "qlbe/stats.hpp"
#include "qlbe/structure_factor.hpp"

namespace qlbe {

namespace {

constexpr double kPi = std::numbers::pi;

struct RadialSetup {
    SpectralFunction spectral;
    double q_max = 0.0;
    std::vector<double> breaks; // forced breakpoints (tabulated knots)
};

RadialSetup radial_setup(const GasSpec& gas, const ParticleSpec& particle,
                         const PotentialSpec& potential, const UnitSystem& units) {
    require_valid(gas);
    require_valid(particle);
    require_valid(potential);
    require_valid(units);

    RadialSetup setup;
    setup.spectral = MBExact{gas};

    auto integrand = [&](double q) {
        const double tq = potential_ft(potential, q, units);
        if (tq == 0.0) return 0.0;
        return q * q * q * q * tq * tq * s_eval(setup.spectral, q, 0.0);
    };

    double hard_max = potential_support_radius(potential, units);
    if (!std::isfinite(hard_max))
        hard_max = 10.0 * std::sqrt(8.0 * gas.mass_m / gas.inverse_temperature_beta);
    setup.q_max = truncation_point(integrand, hard_max);

    setup.breaks.push_back(0.0);
    if (const auto* tab = std::get_if<TabulatedPotential>(&potential)) {
        for (double qk : tab->q)
            if (qk > 0.0 && qk < setup.q_max) setup.breaks.push_back(qk);
    }
    setup.breaks.push_back(setup.q_max);
    return setup;
}

} // namespace

FrictionReport friction_eta(const GasSpec& gas, const ParticleSpec& particle,
                            const PotentialSpec& potential, const UnitSystem& units,
                            const QuadratureSpec& quad) {
    FrictionReport report;
    if (is_zero_potential(potential)) {
        require_valid(gas);
        require_valid(particle);
        require_valid(units);
        return report;
    }
    const RadialSetup setup = radial_setup(gas, particle, potential, units);
    const double h = units.hbar;
    const double beta = gas.inverse_temperature_beta;
    const double M = particle.mass_M;
    const double pref = (beta / (2.0 * M)) * (2.0 * kPi / h) * std::pow(2.0 * kPi * h, 3) *
                        gas.number_density_n * (4.0 * kPi / 3.0);

    auto integrand = [&](double q) {
        const double tq = potential_ft(potential, q, units);
        if (tq == 0.0) return 0.0;
        return q * q * q * q * tq * tq * s_eval(setup.spectral, q, 0.0);
    };

    const QuadratureResult r = integrate_segments(integrand, setup.breaks, quad);
    report.eta = pref * r.value;
    report.error_estimate = pref * r.error_estimate;
    report.q_max = setup.q_max;

    const int n_samples = 256;
    report.integrand_samples.reserve(n_samples);
    for (int i = 1; i <= n_samples; ++i) {
        const double q = setup.q_max * i / n_samples;
        const double tq = potential_ft(potential, q, units);
        report.integrand_samples.emplace_back(
            q, q * q * tq * tq * s_eval(setup.spectral, q, 0.0));
    }
    return report;
}

double friction_eta_trapezoid(const GasSpec& gas, const ParticleSpec& particle,
                              const PotentialSpec& potential, const UnitSystem& units,
                              std::int64_t n_points) {
    if (is_zero_potential(potential)) return 0.0;
    if (n_points < 2) throw DomainError("friction_eta_trapezoid: need >= 2 points");
    const RadialSetup setup = radial_setup(gas, particle, potential, units);
    const double h = units.hbar;
    const double beta = gas.inverse_temperature_beta;
    const double M = particle.mass_M;
    const double pref = (beta / (2.0 * M)) * (2.0 * kPi / h) * std::pow(2.0 * kPi * h, 3) *
                        gas.number_density_n * (4.0 * kPi / 3.0);

    auto integrand = [&](double q) {
        if (q == 0.0) return 0.0;
        const double tq = potential_ft(potential, q, units);
        if (tq == 0.0) return 0.0;
        return q * q * q * q * tq * tq * s_eval(setup.spectral, q, 0.0);
    };

    const double dq = setup.q_max / static_cast<double>(n_points - 1);
    double sum = 0.5 * (integrand(0.0) + integrand(setup.q_max));
    for (std::int64_t i = 1; i + 1 < n_points; ++i)
        sum += integrand(dq * static_cast<double>(i));
    return pref * sum * dq;
}

double eta_gradient_form_residual(const GasSpec& gas, const ParticleSpec& particle,
                                  const PotentialSpec& potential, const UnitSystem& units,
                                  const QuadratureSpec& quad) {
    const FrictionReport direct = friction_eta(gas, particle, potential, units, quad);
    if (direct.eta == 0.0) return 0.0;

    // Gradient-density route: the q-component of the density gradient carries
    // the factor q, and the time-integrated autocorrelation equals
    // 2 pi hbar N S(q,0); composed with its own (beta/6M)(2 pi/hbar)(2 pi hbar)^2 n
    // prefactor this must reproduce eta.
    const RadialSetup setup = radial_setup(gas, particle, potential, units);
    const double h = units.hbar;
    const double beta = gas.inverse_temperature_beta;
    const double M = particle.mass_M;
    const double pref2 = (beta / (6.0 * M)) * (2.0 * kPi / h) * std::pow(2.0 * kPi * h, 2) *
                         gas.number_density_n * 4.0 * kPi;

    auto integrand = [&](double q) {
        const double tq = potential_ft(potential, q, units);
        if (tq == 0.0) return 0.0;
        const double grad_weight = q * q; // |q rho_q|^2
        const double time_correlation = 2.0 * kPi * h * s_eval(setup.spectral, q, 0.0);
        return q * q * tq * tq * grad_weight * time_correlation;
    };

    const QuadratureResult r = integrate_segments(integrand, setup.breaks, quad);
    const double eta_gradient = pref2 * r.value;
    return std::abs(direct.eta - eta_gradient) / direct.eta;
}

std::optional<double> compare_with_mc(FrictionReport& report,
                                      const DiagonalEnsemble& ensemble) {
    if (ensemble.variant != KernelVariant::mb_limit)
        throw DomainError("compare_with_mc: ensemble must use the Brownian-limit kernel");
    if (report.eta == 0.0) return std::nullopt; // <p> is constant, comparison skipped
    if (ensemble.trajectories.empty())
        throw DomainError("compare_with_mc: empty ensemble");

    const Vec3 mean0 = ensemble_mean(ensemble, 0);
    if (!(mean0.norm() > 0.0))
        throw DomainError("compare_with_mc: initial mean momentum must be non-zero");
    const Vec3 axis = mean0.normalized();

    const std::vector<double>& times = ensemble.trajectories.front().times;
    std::vector<double> t, m;
    t.reserve(times.size());
    m.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        t.push_back(times[k]);
        m.push_back(ensemble_mean(ensemble, static_cast<int>(k)).dot(axis));
    }
    const double rate = fit_exponential_decay(t, m);
    report.mc_rate = rate;
    report.mc_relative_deviation = std::abs(rate - report.eta) / report.eta;
    return report.mc_relative_deviation;
}

} // namespace qlbe
