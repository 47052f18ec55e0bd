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

// Acceptance suite: one criterion per entry, each printing a pass/fail line
// with the measured value and its pinned tolerance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "qlbe/brownian.hpp"
#include "qlbe/friction.hpp"
#include "qlbe/kinetics.hpp"
#include "qlbe/rng.hpp"
#include "qlbe/stats.hpp"
#include "qlbe/structure_factor.hpp"

using namespace qlbe;

namespace {

const GasSpec kGas{1.0, 1.0, 1.0};
const UnitSystem kUnits;
const PotentialSpec kPot = GaussianFourierPotential{1.0, 1.0};

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

std::string fmt(const char* pattern, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

// 1. Detailed balance of both MB forms on a 10x10 log-spaced lattice.
Outcome criterion_detailed_balance() {
    double worst = 0.0;
    for (const SpectralFunction& S :
         {SpectralFunction(MBExact{kGas}), SpectralFunction(MBLimit{kGas})}) {
        for (double q : log_grid(0.25, 8.0, 10))
            for (double e : log_grid(0.05, 4.0, 10)) {
                worst = std::max(worst, std::abs(detailed_balance_residual(S, q, e)));
                worst = std::max(worst, std::abs(detailed_balance_residual(S, q, -e)));
            }
    }
    return {worst < 1e-12, fmt("max relative residual %.3e < %.0e", worst, 1e-12)};
}

// 2. FDT cross-form agreement at 5 (q,t) points.
Outcome criterion_fdt_cross_form() {
    const SpectralFunction S = MBExact{kGas};
    const QuadratureSpec quad{1e-12, 1e-12, 4000};
    const std::pair<double, double> points[5] = {
        {0.5, 0.7}, {1.0, 0.0}, {1.0, 1.3}, {2.0, 0.5}, {2.0, 2.5}};
    double worst = 0.0;
    for (const auto& [q, t] : points) {
        const CorrelationPair a = fdt_phi(S, q, t, kUnits, quad);
        const CorrelationPair b = fdt_phi_via_response(S, q, t, kUnits, quad);
        worst = std::max({worst, std::abs(a.phi_minus - b.phi_minus),
                          std::abs(a.phi_plus - b.phi_plus)});
    }
    return {worst < 1e-8, fmt("max absolute deviation %.3e < %.0e", worst, 1e-8)};
}

// 3. Loss-term identity: (n/2M)|p| sigma(p) vs half the loss-coefficient quadrature.
Outcome criterion_loss_identity() {
    const ParticleSpec particle{1.0};
    const SpectralFunction S = MBExact{kGas};
    const CollisionKernel kernel(kGas, particle, kPot, KernelVariant::mb_exact, kUnits);
    const QuadratureSpec quad{0.0, 1e-10, 4000};
    double worst = 0.0;
    for (double p : {0.5, 1.5, 3.0}) {
        const Vec3 pv(p, 0.0, 0.0);
        const CrossSectionResult xs =
            total_cross_section(kPot, S, pv, particle.mass_M, kUnits, quad);
        const double direct = 0.5 * kernel.rate(pv, quad);
        worst = std::max(worst, std::abs(xs.loss_rate - direct) / direct);
    }
    return {worst < 1e-6, fmt("max relative deviation %.3e < %.0e", worst, 1e-6)};
}

// 4. Maxwell stationarity of the jump process, KS < 3/sqrt(n) at 5 mean free times.
Outcome criterion_stationarity() {
    const ParticleSpec particle{1.0};
    const CollisionKernel kernel(kGas, particle, kPot, KernelVariant::mb_exact, kUnits);
    const double M = particle.mass_M;
    const double beta = kGas.inverse_temperature_beta;
    const double sigma = std::sqrt(M / beta);
    const double rate = kernel.rate(Vec3(0.0, 0.0, sigma));
    const int n = 10000;
    const DiagonalEnsemble e = mc_evolve(
        kernel, [&](std::mt19937_64& rng) { return maxwell_sample(M, beta, rng); },
        5.0 / rate, n, 71804, 3);
    double worst = 0.0;
    for (int comp = 0; comp < 3; ++comp)
        worst = std::max(worst,
                         ks_distance_to_normal(ensemble_component(e, 2, comp), 0.0, sigma));
    const double bound = 3.0 / std::sqrt(static_cast<double>(n));
    return {worst < bound, fmt("max KS distance %.4f < %.4f", worst, bound)};
}

// 5. Friction consistency: MC relaxation of <p> vs the eta quadrature,
//    10% at m/M = 0.01 and shrinking at m/M = 0.001.
Outcome criterion_friction_mc() {
    auto deviation = [&](double mass_M, int n_traj, std::uint64_t seed) {
        const ParticleSpec particle{mass_M};
        FrictionReport report = friction_eta(kGas, particle, kPot, kUnits, {0.0, 1e-12, 4000});
        const CollisionKernel kernel(kGas, particle, kPot, KernelVariant::mb_limit, kUnits);
        const double p0 = 2.0 * std::sqrt(mass_M / kGas.inverse_temperature_beta);
        const DiagonalEnsemble e = mc_evolve(kernel, Vec3(p0, 0.0, 0.0),
                                             2.0 / report.eta, n_traj, seed, 41);
        return *compare_with_mc(report, e);
    };
    const double dev1 = deviation(100.0, 10000, 2311);
    const double dev2 = deviation(1000.0, 30000, 2312);
    const bool pass = dev1 < 0.10 && dev2 < dev1;
    return {pass, fmt("deviation %.4f (m/M=0.01) < 0.10 and %.4f (m/M=0.001) smaller",
                      dev1, dev2)};
}

// 6. Diffusive-limit thermalization from three initial states, plus the exact
//    coefficient identities.
Outcome criterion_thermalization() {
    const double M = 1.0, beta = 1.0, eta = 3.0;
    const Coefficients c = coefficients(eta, M, beta, kUnits);
    const ThermalSpreads th = thermal_spreads(M, beta, kUnits);

    const double hp = kUnits.hbar * eta / 4.0;
    if (std::abs(c.D_pp * c.D_xx - hp * hp) > 4e-16 * hp * hp)
        return {false, "D_pp * D_xx != (hbar eta / 4)^2"};
    if (std::abs(th.dp_th * th.dx_th - 0.5 * kUnits.hbar) > 1e-16)
        return {false, "dp_th * dx_th != hbar / 2"};

    GaussianState1D cold, hot, displaced;
    cold.var_x = th.dx_th * th.dx_th * 2.0;
    cold.var_p = 0.5 * M / beta;
    hot.var_x = th.dx_th * th.dx_th * 2.0;
    hot.var_p = 2.0 * M / beta;
    displaced.var_x = th.dx_th * th.dx_th;
    displaced.var_p = M / beta;
    displaced.mean_p = 3.0 * th.dp_th;

    const double T = 4.2 / eta;
    double worst_moment = 0.0, worst_grid = 0.0;
    PositionGrid grid{-6.5, 6.5, 48};
    const double dt = grid_step_bound(grid, c, M, kUnits);
    const int steps = static_cast<int>(std::ceil(T / dt));
    for (const GaussianState1D& init : {cold, hot, displaced}) {
        const GaussianState1D closed = evolve_moments(init, c, M, 10.0 / eta);
        worst_moment = std::max(worst_moment,
                                std::abs(closed.var_p - M / beta) / (M / beta));
        GridDensityMatrix rho = gaussian_grid_state(grid, init, kUnits);
        rho = evolve_grid(rho, c, M, kUnits, T / steps, steps);
        const GaussianState1D m = grid_moments(rho, kUnits);
        worst_grid = std::max(worst_grid, std::abs(m.var_p - M / beta) / (M / beta));
    }
    const double worst = std::max(worst_moment, worst_grid);
    return {worst < 1e-3, fmt("max relative var_p deviation %.2e < %.0e", worst, 1e-3)};
}

// 7. Positivity and trace preservation over 1000 grid steps.
Outcome criterion_positivity_trace() {
    const double M = 1.0, beta = 1.0, eta = 1.0;
    const Coefficients c = coefficients(eta, M, beta, kUnits);
    const ThermalSpreads th = thermal_spreads(M, beta, kUnits);
    GaussianState1D init;
    init.mean_p = 2.0 * th.dp_th;
    init.mean_x = -0.5;
    init.var_x = th.dx_th * th.dx_th;
    init.var_p = th.dp_th * th.dp_th;
    PositionGrid grid{-8.0, 8.0, 64};
    GridDensityMatrix rho = gaussian_grid_state(grid, init, kUnits);
    const double dt = grid_step_bound(grid, c, M, kUnits);
    GridEvolutionLog log;
    rho = evolve_grid(rho, c, M, kUnits, dt, 1000, &log);
    double trace_dev = 0.0, min_eig = 0.0;
    for (double tr : log.trace) trace_dev = std::max(trace_dev, std::abs(tr - 1.0));
    for (double e : log.min_eig) min_eig = std::min(min_eig, e);
    const bool pass = trace_dev < 1e-8 && min_eig >= -1e-7;
    return {pass, fmt("trace drift %.2e < 1e-08, min eigenvalue %.2e >= -1e-07",
                      trace_dev, min_eig)};
}

// 8. Translation covariance: banded kinetics and position-grid generators.
Outcome criterion_translation_covariance() {
    const ParticleSpec particle{1.0};
    const CollisionKernel kernel(kGas, particle, kPot, KernelVariant::mb_exact, kUnits);
    MomentumGrid1D grid{-8.0, 8.0, 129};

    auto band_of = [&](double k, double scale) {
        BandState band;
        band.grid = grid;
        band.offset_k = k;
        band.gas = kGas;
        band.particle = particle;
        band.potential = kPot;
        band.values.resize(grid.count);
        double norm = 0.0;
        for (int i = 0; i < grid.count; ++i) {
            band.values[i] = std::exp(-0.5 * grid.p(i) * grid.p(i));
            norm += band.values[i].real();
        }
        band.values *= scale / (norm * grid.spacing());
        return band;
    };
    std::vector<BandState> multi;
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double k : {0.0, 0.6, -1.3, 2.2}) {
        BandState band = band_of(k, k == 0.0 ? 1.0 : 0.4);
        if (k != 0.0)
            for (int i = 0; i < band.values.size(); ++i)
                band.values[i] *= Complex(1.0 + 0.5 * uni(rng), 0.5 * uni(rng));
        multi.push_back(band);
    }
    const double band_residual = covariance_test(kernel, multi, 1.0, 0.05, 40);

    const Coefficients c = coefficients(1.0, 1.0, 1.0, kUnits);
    const ThermalSpreads th = thermal_spreads(1.0, 1.0, kUnits);
    GaussianState1D init;
    init.mean_p = th.dp_th;
    init.var_x = th.dx_th * th.dx_th;
    init.var_p = th.dp_th * th.dp_th;
    PositionGrid pos{-8.0, 8.0, 64};
    const GridDensityMatrix rho = gaussian_grid_state(pos, init, kUnits);
    const double gdt = grid_step_bound(pos, c, 1.0, kUnits);
    const double grid_residual = translation_covariance_grid(c, 1.0, kUnits, rho, 1, gdt, 25);

    const bool pass = band_residual < 1e-10 && grid_residual < 1e-8;
    return {pass, fmt("band residual %.2e < 1e-10, grid residual %.2e < 1e-08",
                      band_residual, grid_residual)};
}

// 9. Collision sampler against the quadrature-normalized target density.
Outcome criterion_sampler_chi_square() {
    const ParticleSpec particle{1.0};
    const CollisionKernel kernel(kGas, particle, kPot, KernelVariant::mb_exact, kUnits);
    const SpectralFunction S = MBExact{kGas};
    const Vec3 p(0.8, 0.3, -0.2);
    const double pn = p.norm();

    const int n_draws = 100000;
    std::mt19937_64 rng(31415);
    std::vector<Vec3> draws;
    draws.reserve(n_draws);
    for (int i = 0; i < n_draws; ++i) draws.push_back(kernel.sample_jump(p, rng));

    // joint (|q|, cos angle to p) histogram with quadrature-normalized cells
    const int qbins = 10, cbins = 6;
    const double q_hi = 4.0;
    auto cell_mass = [&](double qlo, double qhi2, double clo, double chi) {
        auto radial = [&](double q) {
            const double tq = potential_ft(kPot, q, kUnits);
            auto over_c = [&](double cc) {
                const double E =
                    (q * q + 2.0 * pn * q * cc) / (2.0 * particle.mass_M);
                return s_eval(S, q, E);
            };
            return q * q * tq * tq *
                   integrate(over_c, clo, chi, {1e-13, 1e-12, 1000}).value;
        };
        return integrate(radial, std::max(qlo, 1e-9), qhi2, {0.0, 1e-10, 2000}).value;
    };
    const double total = cell_mass(0.0, 8.0, -1.0, 1.0);

    double chi2 = 0.0;
    int cells = 0;
    double rest_expected = n_draws;
    int rest_observed = n_draws;
    for (int qb = 0; qb < qbins; ++qb) {
        for (int cb = 0; cb < cbins; ++cb) {
            const double qlo = q_hi * qb / qbins, qhi2 = q_hi * (qb + 1) / qbins;
            const double clo = -1.0 + 2.0 * cb / cbins, chi = -1.0 + 2.0 * (cb + 1) / cbins;
            const double expected = n_draws * cell_mass(qlo, qhi2, clo, chi) / total;
            if (expected < 10.0) continue;
            int observed = 0;
            for (const Vec3& q : draws) {
                const double qn = q.norm();
                const double c = q.dot(p) / (qn * pn);
                if (qn >= qlo && qn < qhi2 && c >= clo && c < chi) ++observed;
            }
            chi2 += (observed - expected) * (observed - expected) / expected;
            ++cells;
            rest_expected -= expected;
            rest_observed -= observed;
        }
    }
    if (rest_expected > 10.0) {
        chi2 += (rest_observed - rest_expected) * (rest_observed - rest_expected) /
                rest_expected;
        ++cells;
    }

    // azimuthal angle about p must be uniform
    Vec3 e1 = p.cross(Vec3(0.0, 0.0, 1.0)).normalized();
    Vec3 e2 = p.cross(e1).normalized();
    const int abins = 12;
    std::vector<int> acounts(abins, 0);
    for (const Vec3& q : draws) {
        const double phi = std::atan2(q.dot(e2), q.dot(e1));
        int b = static_cast<int>((phi + M_PI) / (2.0 * M_PI) * abins);
        if (b == abins) b = abins - 1;
        ++acounts[static_cast<std::size_t>(b)];
    }
    const double a_expected = static_cast<double>(n_draws) / abins;
    for (int b = 0; b < abins; ++b) {
        chi2 += (acounts[static_cast<std::size_t>(b)] - a_expected) *
                (acounts[static_cast<std::size_t>(b)] - a_expected) / a_expected;
    }
    cells += abins;

    const double p_value = chi_square_pvalue(chi2, cells - 2);
    return {p_value > 0.01, fmt("chi-square p-value %.3f > %.2f", p_value, 0.01)};
}

// 10. Gradient-form identity for the friction integrand.
Outcome criterion_gradient_form() {
    const ParticleSpec heavy{100.0};
    const QuadratureSpec quad{0.0, 1e-12, 4000};
    const double r1 = eta_gradient_form_residual(kGas, heavy, kPot, kUnits, quad);

    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    TabulatedPotential tab;
    double q = 0.0;
    for (int i = 0; i < 24; ++i) {
        tab.q.push_back(q);
        tab.value.push_back(uni(rng));
        q += uni(rng) * 0.3;
    }
    const double r2 = eta_gradient_form_residual(kGas, heavy, tab, kUnits, quad);
    const double worst = std::max(r1, r2);
    return {worst < 1e-10, fmt("max relative residual %.2e < %.0e", worst, 1e-10)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "detailed balance", criterion_detailed_balance},
        {2, "fdt cross-form", criterion_fdt_cross_form},
        {3, "loss-term identity", criterion_loss_identity},
        {4, "maxwell stationarity", criterion_stationarity},
        {5, "friction vs mc relaxation", criterion_friction_mc},
        {6, "diffusive-limit thermalization", criterion_thermalization},
        {7, "positivity and trace", criterion_positivity_trace},
        {8, "translation covariance", criterion_translation_covariance},
        {9, "sampler chi-square", criterion_sampler_chi_square},
        {10, "gradient-form identity", criterion_gradient_form},
    };
    return list;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));

    bool all_pass = true;
    for (const Criterion& c : criteria()) {
        if (!ids.empty() &&
            std::find(ids.begin(), ids.end(), c.id) == ids.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s [%2d] %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", c.id,
                    c.name, out.detail.c_str(), secs);
        std::fflush(stdout);
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
