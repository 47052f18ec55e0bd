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

#include "qlbe/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qlbe/brownian.hpp"
#include "qlbe/friction.hpp"
#include "qlbe/kinetics.hpp"
#include "qlbe/rng.hpp"
#include "qlbe/stats.hpp"
#include "qlbe/structure_factor.hpp"

namespace qlbe {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunSummary::all_passed() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

// CSV contract: header row, '.' decimal, scientific with 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw NumericError("cannot open " + path.string() + " for writing");
        out_ << header << "\n";
    }
    void field(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.16e", v);
        sep();
        out_ << buf;
    }
    void field(std::int64_t v) {
        sep();
        out_ << v;
    }
    void field(const std::string& v) {
        sep();
        out_ << v;
    }
    void end_row() {
        out_ << "\n";
        first_ = true;
    }

private:
    void sep() {
        if (!first_) out_ << ",";
        first_ = false;
    }
    std::ofstream out_;
    bool first_ = true;
};

struct ScenarioContext {
    const RunConfig& cfg;
    fs::path dir;
    RunSummary& summary;

    void check(const std::string& name, double value, double tolerance, bool pass) {
        summary.checks.push_back({name, value, tolerance, pass});
    }
    void check_below(const std::string& name, double value, double tolerance) {
        check(name, value, tolerance, value <= tolerance);
    }
    fs::path file(const std::string& name) {
        summary.outputs.push_back(name);
        return dir / name;
    }
};

std::vector<double> spaced_grid(double lo, double hi, int count, bool log_spacing) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double w = static_cast<double>(i) / (count - 1);
        if (log_spacing)
            out.push_back(lo * std::pow(hi / lo, w));
        else
            out.push_back(lo + (hi - lo) * w);
    }
    return out;
}

KernelVariant parse_variant(const std::string& name) {
    if (name == "mb_exact") return KernelVariant::mb_exact;
    if (name == "mb_limit") return KernelVariant::mb_limit;
    throw ConfigError(0, "unknown kernel variant `" + name + "`");
}

// ---------------------------------------------------------------------------
// dsf

void run_dsf(ScenarioContext& ctx) {
    const Numerics& n = ctx.cfg.numerics;
    const bool log_spacing = n.dsf_spacing == "log";
    const auto qs = spaced_grid(n.dsf_q_min, n.dsf_q_max, n.dsf_q_count, log_spacing);
    const auto es = spaced_grid(n.dsf_e_min, n.dsf_e_max, n.dsf_e_count, log_spacing);

    std::vector<std::pair<std::string, SpectralFunction>> variants;
    if (n.dsf_variant == "mb_exact" || n.dsf_variant == "both")
        variants.emplace_back("mb_exact", MBExact{ctx.cfg.gas});
    if (n.dsf_variant == "mb_limit" || n.dsf_variant == "both")
        variants.emplace_back("mb_limit", MBLimit{ctx.cfg.gas});
    if (variants.empty()) throw ConfigError(0, "dsf.variant must be mb_exact, mb_limit or both");

    CsvWriter csv(ctx.file("dsf.csv"), "q,E,value,variant");
    double min_value = std::numeric_limits<double>::infinity();
    std::map<std::string, double> max_db;
    for (const auto& [name, S] : variants) {
        double db = 0.0;
        for (double q : qs) {
            for (double e : es) {
                const double v = s_eval(S, q, e);
                min_value = std::min(min_value, v);
                db = std::max(db, std::abs(detailed_balance_residual(S, q, e)));
                csv.field(q);
                csv.field(e);
                csv.field(v);
                csv.field(name);
                csv.end_row();
            }
        }
        max_db[name] = db;
        ctx.check_below("detailed_balance_" + name, db, 1e-12);
    }
    ctx.check("positivity", min_value, 0.0, min_value > 0.0);

    // zeroth moment in E of the exact MB form (Gaussian of unit weight)
    const SpectralFunction exact = MBExact{ctx.cfg.gas};
    const GasSpec& gas = ctx.cfg.gas;
    double worst = 0.0;
    for (double q : qs) {
        const double center = -q * q / (2.0 * gas.mass_m);
        const double width = q / std::sqrt(gas.inverse_temperature_beta * gas.mass_m);
        auto f = [&](double e) { return s_eval(exact, q, e); };
        const double total =
            integrate(f, center - 10.0 * width, center + 10.0 * width, {}).value;
        worst = std::max(worst, std::abs(total - 1.0));
    }
    ctx.check_below("normalization_mb_exact", worst, 1e-8);
    ctx.summary.scalars["min_value"] = min_value;
}

// ---------------------------------------------------------------------------
// fdt

void run_fdt(ScenarioContext& ctx) {
    const Numerics& n = ctx.cfg.numerics;
    const SpectralFunction S = MBExact{ctx.cfg.gas};
    const QuadratureSpec quad{1e-12, 1e-12, 4000};

    CsvWriter csv(ctx.file("fdt.csv"), "q,t,value,variant");
    double cross = 0.0;
    double minus_at_zero = 0.0;
    double plus_at_zero = std::numeric_limits<double>::infinity();
    for (double q : n.fdt_q_values) {
        const CorrelationPair zero = fdt_phi(S, q, 0.0, ctx.cfg.units, quad);
        minus_at_zero = std::max(minus_at_zero, std::abs(zero.phi_minus));
        plus_at_zero = std::min(plus_at_zero, zero.phi_plus);
        for (double t : n.fdt_t_values) {
            const CorrelationPair a = fdt_phi(S, q, t, ctx.cfg.units, quad);
            const CorrelationPair b = fdt_phi_via_response(S, q, t, ctx.cfg.units, quad);
            cross = std::max({cross, std::abs(a.phi_minus - b.phi_minus),
                              std::abs(a.phi_plus - b.phi_plus)});
            csv.field(q), csv.field(t), csv.field(a.phi_minus), csv.field("phi_minus_dsf");
            csv.end_row();
            csv.field(q), csv.field(t), csv.field(a.phi_plus), csv.field("phi_plus_dsf");
            csv.end_row();
            csv.field(q), csv.field(t), csv.field(b.phi_minus), csv.field("phi_minus_response");
            csv.end_row();
            csv.field(q), csv.field(t), csv.field(b.phi_plus), csv.field("phi_plus_response");
            csv.end_row();
        }
    }
    ctx.check_below("fdt_cross_form", cross, 1e-8);
    ctx.check_below("phi_minus_at_zero", minus_at_zero, 1e-9);
    ctx.check("phi_plus_positive_at_zero", plus_at_zero, 0.0, plus_at_zero > 0.0);
}

// ---------------------------------------------------------------------------
// xsec

void run_xsec(ScenarioContext& ctx) {
    const SpectralFunction S = MBExact{ctx.cfg.gas};
    const CollisionKernel kernel(ctx.cfg.gas, ctx.cfg.particle, ctx.cfg.potential,
                                 KernelVariant::mb_exact, ctx.cfg.units);
    const QuadratureSpec quad{0.0, 1e-9, 4000};

    CsvWriter csv(ctx.file("xsec.csv"), "p,sigma,loss_rate,anticommutator_loss,rel_dev");
    double worst = 0.0;
    double min_sigma = std::numeric_limits<double>::infinity();
    for (double p : ctx.cfg.numerics.xsec_p_values) {
        const Vec3 pv(p, 0.0, 0.0);
        const CrossSectionResult xs = total_cross_section(
            ctx.cfg.potential, S, pv, ctx.cfg.particle.mass_M, ctx.cfg.units, quad);
        const double direct_half = 0.5 * kernel.rate(pv, quad);
        const double dev = std::abs(xs.loss_rate - direct_half) /
                           std::max(std::abs(direct_half), 1e-300);
        worst = std::max(worst, dev);
        min_sigma = std::min(min_sigma, xs.sigma);
        csv.field(p), csv.field(xs.sigma), csv.field(xs.loss_rate), csv.field(direct_half),
            csv.field(dev);
        csv.end_row();
    }
    ctx.check_below("loss_term_identity", worst, 1e-6);
    ctx.check("sigma_positive", min_sigma, 0.0, min_sigma > 0.0);
}

// ---------------------------------------------------------------------------
// kinetic

void run_kinetic(ScenarioContext& ctx) {
    const Numerics& n = ctx.cfg.numerics;
    const GasSpec& gas = ctx.cfg.gas;
    const double M = ctx.cfg.particle.mass_M;
    const double beta = gas.inverse_temperature_beta;
    const CollisionKernel kernel(gas, ctx.cfg.particle, ctx.cfg.potential,
                                 parse_variant(n.kinetic_variant), ctx.cfg.units);

    DiagonalEnsemble ensemble;
    const std::uint64_t seed = *ctx.cfg.seed;
    if (n.kinetic_initial == "maxwell") {
        ensemble = mc_evolve(
            kernel,
            [M, beta](std::mt19937_64& rng) { return maxwell_sample(M, beta, rng); },
            n.kinetic_horizon, n.kinetic_n_traj, seed, n.kinetic_snapshots);
    } else if (n.kinetic_initial == "fixed") {
        ensemble = mc_evolve(kernel, Vec3(n.kinetic_p0x, n.kinetic_p0y, n.kinetic_p0z),
                             n.kinetic_horizon, n.kinetic_n_traj, seed, n.kinetic_snapshots);
    } else {
        throw ConfigError(0, "kinetic.initial must be maxwell or fixed");
    }

    {
        CsvWriter csv(ctx.file("kinetic.csv"), "t,px,py,pz,traj_id");
        for (std::size_t i = 0; i < ensemble.trajectories.size(); ++i) {
            const Trajectory& tr = ensemble.trajectories[i];
            for (std::size_t k = 0; k < tr.times.size(); ++k) {
                csv.field(tr.times[k]);
                csv.field(tr.momenta[k].x());
                csv.field(tr.momenta[k].y());
                csv.field(tr.momenta[k].z());
                csv.field(static_cast<std::int64_t>(i));
                csv.end_row();
            }
        }
    }
    ctx.check("trajectory_count",
              static_cast<double>(ensemble.trajectories.size()), 0.0,
              static_cast<int>(ensemble.trajectories.size()) == n.kinetic_n_traj);

    // final-time p_x histogram
    {
        const auto px = ensemble_component(ensemble, n.kinetic_snapshots - 1, 0);
        const double sigma = std::sqrt(M / beta);
        const int bins = 41;
        const double lo = -5.0 * sigma, hi = 5.0 * sigma;
        std::vector<std::int64_t> counts(bins, 0);
        for (double v : px) {
            if (v < lo || v >= hi) continue;
            counts[static_cast<std::size_t>((v - lo) / (hi - lo) * bins)]++;
        }
        CsvWriter csv(ctx.file("kinetic_histogram.csv"), "p_lo,p_hi,count,density");
        const double width = (hi - lo) / bins;
        for (int b = 0; b < bins; ++b) {
            csv.field(lo + b * width);
            csv.field(lo + (b + 1) * width);
            csv.field(counts[static_cast<std::size_t>(b)]);
            csv.field(static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                      (static_cast<double>(px.size()) * width));
            csv.end_row();
        }
        if (n.kinetic_initial == "maxwell") {
            const double ks = ks_distance_to_normal(px, 0.0, sigma);
            ctx.check_below("ks_maxwell_stationarity", ks,
                            3.0 / std::sqrt(static_cast<double>(px.size())));
        }
    }

    if (n.kinetic_band_enabled) {
        MomentumGrid1D grid{n.kinetic_band_p_min, n.kinetic_band_p_max, n.kinetic_band_count};
        if (auto err = validate(grid)) throw ConfigError(0, "kinetic.band: " + *err);
        CsvWriter csv(ctx.file("kinetic_band.csv"), "p,re,im,k,t");
        double trace_drift_rate = 0.0;
        double min_diag = 0.0;
        double l1_increase = 0.0;
        for (double k : n.kinetic_band_offsets) {
            BandState band;
            band.grid = grid;
            band.offset_k = k;
            band.gas = gas;
            band.particle = ctx.cfg.particle;
            band.potential = ctx.cfg.potential;
            band.values.resize(grid.count);
            double norm = 0.0;
            for (int i = 0; i < grid.count; ++i) {
                const double p = grid.p(i);
                band.values[i] = std::exp(-beta * p * p / (2.0 * M));
                norm += band.values[i].real();
            }
            band.values /= norm * grid.spacing();
            if (k != 0.0) band.values *= 0.5;

            const double trace0 = band_trace(band);
            double l1_prev = band_l1_mass(band);
            BandState current = band;
            const int chunks = std::max(1, n.kinetic_band_steps / n.kinetic_band_stride);
            for (int c = 0; c <= chunks; ++c) {
                const double t = c * n.kinetic_band_stride * n.kinetic_band_dt;
                for (int i = 0; i < grid.count; ++i) {
                    csv.field(grid.p(i));
                    csv.field(current.values[i].real());
                    csv.field(current.values[i].imag());
                    csv.field(k);
                    csv.field(t);
                    csv.end_row();
                }
                if (c == chunks) break;
                current = band_evolve(current, kernel, n.kinetic_band_dt,
                                      n.kinetic_band_stride);
                if (k != 0.0) {
                    const double l1 = band_l1_mass(current);
                    l1_increase = std::max(l1_increase, l1 - l1_prev);
                    l1_prev = l1;
                }
            }
            if (k == 0.0) {
                const double duration = chunks * n.kinetic_band_stride * n.kinetic_band_dt;
                trace_drift_rate = std::max(
                    trace_drift_rate, std::abs(band_trace(current) - trace0) / duration);
                for (int i = 0; i < grid.count; ++i)
                    min_diag = std::min(min_diag, current.values[i].real());
            }
        }
        ctx.check_below("band_trace_drift_per_time", trace_drift_rate, 1e-8);
        ctx.check_below("band_diagonal_negativity", std::max(0.0, -min_diag), 1e-12);
        ctx.check_below("band_l1_monotone", std::max(0.0, l1_increase), 1e-10);
    }
    ctx.summary.scalars["mean_jumps"] = [&] {
        double s = 0.0;
        for (const auto& tr : ensemble.trajectories) s += static_cast<double>(tr.jump_count);
        return s / static_cast<double>(ensemble.trajectories.size());
    }();
}

// ---------------------------------------------------------------------------
// brownian

void run_brownian(ScenarioContext& ctx) {
    const Numerics& n = ctx.cfg.numerics;
    const double M = ctx.cfg.particle.mass_M;
    const double beta = ctx.cfg.gas.inverse_temperature_beta;
    const UnitSystem& units = ctx.cfg.units;

    const Coefficients coeff = coefficients(n.brownian_eta, M, beta, units);
    const ThermalSpreads th = thermal_spreads(M, beta, units);

    const double hp = units.hbar * coeff.eta / 4.0;
    ctx.check_below("diffusion_product_identity",
                    std::abs(coeff.D_pp * coeff.D_xx - hp * hp) / (hp * hp), 1e-13);
    ctx.check_below("minimum_uncertainty",
                    std::abs(th.dp_th * th.dx_th - 0.5 * units.hbar) / (0.5 * units.hbar),
                    1e-15);

    GaussianState1D init;
    init.mean_x = n.brownian_mean_x0;
    init.mean_p = std::isnan(n.brownian_mean_p0) ? 2.0 * th.dp_th : n.brownian_mean_p0;
    init.var_x = std::isnan(n.brownian_var_x0) ? th.dx_th * th.dx_th : n.brownian_var_x0;
    init.var_p = std::isnan(n.brownian_var_p0) ? th.dp_th * th.dp_th : n.brownian_var_p0;
    init.cov_xp = n.brownian_cov0;
    if (auto err = validate(init, units)) throw ConfigError(0, "brownian initial state: " + *err);

    PositionGrid grid{n.brownian_x_min, n.brownian_x_max, n.brownian_count};
    if (auto err = validate(grid)) throw ConfigError(0, "brownian grid: " + *err);

    double dt = n.brownian_dt;
    if (dt <= 0.0) dt = grid_step_bound(grid, coeff, M, units);
    int steps = n.brownian_steps;
    if (steps <= 0) steps = static_cast<int>(std::ceil(3.6 / (coeff.eta * dt)));
    const int stride = std::max(1, n.brownian_stride);

    GridDensityMatrix rho = gaussian_grid_state(grid, init, units);
    const double trace0 = rho.rho.trace().real();

    CsvWriter csv(ctx.file("brownian.csv"), "t,mean_x,mean_p,var_x,var_p,cov_xp,min_eig");
    auto emit = [&](double t, const GridDensityMatrix& state) {
        const GaussianState1D m = grid_moments(state, units);
        csv.field(t), csv.field(m.mean_x), csv.field(m.mean_p), csv.field(m.var_x),
            csv.field(m.var_p), csv.field(m.cov_xp), csv.field(positivity_check(state));
        csv.end_row();
    };
    emit(0.0, rho);

    GridEvolutionLog log;
    int done = 0;
    while (done < steps) {
        const int chunk = std::min(stride, steps - done);
        rho = evolve_grid(rho, coeff, M, units, dt, chunk, &log);
        done += chunk;
        emit(done * dt, rho);
    }

    double worst_trace = 0.0, worst_eig = 0.0;
    for (double tr : log.trace) worst_trace = std::max(worst_trace, std::abs(tr - trace0));
    for (double e : log.min_eig) worst_eig = std::min(worst_eig, e);
    ctx.check_below("trace_drift", worst_trace, 1e-8);
    ctx.check("min_eigenvalue", worst_eig, -1e-7, worst_eig >= -1e-7);

    const double T = steps * dt;
    const GaussianState1D closed = evolve_moments(init, coeff, M, T);
    const GaussianState1D gridm = grid_moments(rho, units);
    const double scale = th.dp_th * th.dp_th;
    const double dev = std::max(
        {std::abs(gridm.mean_p - closed.mean_p) / th.dp_th,
         std::abs(gridm.mean_x - closed.mean_x) / th.dx_th,
         std::abs(gridm.var_p - closed.var_p) / scale,
         std::abs(gridm.var_x - closed.var_x) / std::max(closed.var_x, th.dx_th * th.dx_th),
         std::abs(gridm.cov_xp - closed.cov_xp) / (th.dp_th * th.dx_th)});
    ctx.check_below("cross_solver_moments", dev, 1e-4);

    const double vp_target = M / beta;
    if (T * coeff.eta >= 3.5) {
        ctx.check_below("var_p_stationary",
                        std::abs(gridm.var_p - vp_target) / vp_target, 1e-3);
    }
    ctx.summary.scalars["var_p_final"] = gridm.var_p;
    ctx.summary.scalars["dt"] = dt;
    ctx.summary.scalars["steps"] = steps;

    if (n.brownian_snapshot) {
        std::ofstream snap(ctx.file("brownian_rho_final.txt"));
        snap << "# row-major rho(x_i, x_j), re im pairs, n = " << grid.count << "\n";
        char buf[64];
        for (int i = 0; i < grid.count; ++i) {
            for (int j = 0; j < grid.count; ++j) {
                std::snprintf(buf, sizeof buf, "%.16e %.16e", rho.rho(i, j).real(),
                              rho.rho(i, j).imag());
                snap << buf << (j + 1 == grid.count ? "" : " ");
            }
            snap << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// friction

void run_friction(ScenarioContext& ctx) {
    const QuadratureSpec quad{0.0, 1e-12, 4000};
    FrictionReport report = friction_eta(ctx.cfg.gas, ctx.cfg.particle, ctx.cfg.potential,
                                         ctx.cfg.units, quad);
    const double trap =
        friction_eta_trapezoid(ctx.cfg.gas, ctx.cfg.particle, ctx.cfg.potential,
                               ctx.cfg.units, ctx.cfg.numerics.friction_trapezoid_points);
    const double residual = eta_gradient_form_residual(ctx.cfg.gas, ctx.cfg.particle,
                                                       ctx.cfg.potential, ctx.cfg.units, quad);

    {
        CsvWriter csv(ctx.file("friction.csv"), "q,integrand");
        for (const auto& [q, v] : report.integrand_samples) {
            csv.field(q);
            csv.field(v);
            csv.end_row();
        }
    }

    const bool inert = is_zero_potential(ctx.cfg.potential);
    if (!inert) {
        ctx.check_below("dual_quadrature_agreement",
                        std::abs(report.eta - trap) / report.eta, 1e-8);
        ctx.check("eta_positive", report.eta, 0.0, report.eta > 0.0);

        GasSpec hot = ctx.cfg.gas;
        hot.inverse_temperature_beta *= 2.0;
        const double eta_hot =
            friction_eta(hot, ctx.cfg.particle, ctx.cfg.potential, ctx.cfg.units, quad).eta;
        const double tdep = std::abs(eta_hot - report.eta) / report.eta;
        ctx.check("temperature_dependence", tdep, 1e-3, tdep > 1e-3);
    }
    ctx.check_below("gradient_form_residual", residual, 1e-10);

    ctx.summary.scalars["eta"] = report.eta;
    ctx.summary.scalars["eta_trapezoid"] = trap;
    ctx.summary.scalars["error_estimate"] = report.error_estimate;
    ctx.summary.scalars["q_max"] = report.q_max;
    ctx.summary.scalars["gradient_form_residual"] = residual;
}

// ---------------------------------------------------------------------------
// covariance

void run_covariance(ScenarioContext& ctx) {
    const GasSpec& gas = ctx.cfg.gas;
    const double M = ctx.cfg.particle.mass_M;
    const double beta = gas.inverse_temperature_beta;
    const UnitSystem& units = ctx.cfg.units;
    const double pth = std::sqrt(M / beta);

    const CollisionKernel kernel(gas, ctx.cfg.particle, ctx.cfg.potential,
                                 KernelVariant::mb_exact, units);
    MomentumGrid1D grid{-8.0 * pth, 8.0 * pth, 129};

    auto gaussian_band = [&](double k, double scale) {
        BandState band;
        band.grid = grid;
        band.offset_k = k;
        band.gas = gas;
        band.particle = ctx.cfg.particle;
        band.potential = ctx.cfg.potential;
        band.values.resize(grid.count);
        double norm = 0.0;
        for (int i = 0; i < grid.count; ++i) {
            const double p = grid.p(i);
            band.values[i] = std::exp(-beta * p * p / (2.0 * M));
            norm += band.values[i].real();
        }
        band.values *= scale / (norm * grid.spacing());
        return band;
    };

    // step size bounded by the lattice loss rate and the free-phase frequencies
    const double rate_scale =
        std::max(kernel.rate(Vec3(0.0, 0.0, pth)), kernel.rate(Vec3::Zero()) + 1e-300);
    const double k_max = 2.4 * pth;
    const double p_edge = 8.0 * pth;
    const double omega_max =
        k_max * (2.0 * p_edge + k_max) / (2.0 * M * ctx.cfg.units.hbar);
    const double dt = std::min(0.02 / rate_scale, 0.4 / omega_max);
    const int steps = 20;
    const double shift = 1.0;

    const double r_k0 = covariance_test(kernel, {gaussian_band(0.0, 1.0)}, shift, dt, steps);
    const double r_k1 =
        covariance_test(kernel, {gaussian_band(0.7 * pth, 0.5)}, shift, dt, steps);
    std::vector<BandState> multi;
    std::mt19937_64 rng(0xC0FFEEULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double k : {0.3 * pth, -1.1 * pth, 2.4 * pth}) {
        BandState band = gaussian_band(k, 0.3);
        for (int i = 0; i < band.values.size(); ++i)
            band.values[i] *= Complex(1.0 + 0.5 * uni(rng), 0.5 * uni(rng));
        multi.push_back(band);
    }
    const double r_multi = covariance_test(kernel, multi, shift, dt, steps);

    const Coefficients coeff = coefficients(ctx.cfg.numerics.brownian_eta, M, beta, units);
    const ThermalSpreads th = thermal_spreads(M, beta, units);
    GaussianState1D init;
    init.mean_p = th.dp_th;
    init.var_x = th.dx_th * th.dx_th;
    init.var_p = th.dp_th * th.dp_th;
    PositionGrid pos_grid{-10.0 * th.dx_th * 2.0, 10.0 * th.dx_th * 2.0, 64};
    const GridDensityMatrix rho = gaussian_grid_state(pos_grid, init, units);
    const double gdt = grid_step_bound(pos_grid, coeff, M, units);
    const double r_grid = translation_covariance_grid(coeff, M, units, rho, 1, gdt, 20);
    const double r_grid_zero = translation_covariance_grid(coeff, M, units, rho, 0, gdt, 5);

    CsvWriter csv(ctx.file("covariance.csv"), "test,residual,tolerance");
    auto row = [&](const std::string& name, double value, double tol) {
        csv.field(name);
        csv.field(value);
        csv.field(tol);
        csv.end_row();
        ctx.check_below(name, value, tol);
    };
    row("band_k0", r_k0, 1e-15);
    row("band_single_offset", r_k1, 1e-12);
    row("band_multi_offset", r_multi, 1e-10);
    row("grid_zero_shift", r_grid_zero, 0.0);
    row("grid_one_cell", r_grid, 1e-8);
}

} // namespace

RunSummary run(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    RunSummary summary;
    summary.scenario = scenario_name(config.scenario);
    summary.config_digest = config_digest(config.raw_text);
    summary.seed = config.seed;

    fs::path dir(config.out_dir);
    fs::create_directories(dir);
    ScenarioContext ctx{config, dir, summary};

    switch (config.scenario) {
        case Scenario::dsf: run_dsf(ctx); break;
        case Scenario::fdt: run_fdt(ctx); break;
        case Scenario::xsec: run_xsec(ctx); break;
        case Scenario::kinetic: run_kinetic(ctx); break;
        case Scenario::brownian: run_brownian(ctx); break;
        case Scenario::friction: run_friction(ctx); break;
        case Scenario::covariance: run_covariance(ctx); break;
    }

    summary.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json j;
    j["scenario"] = summary.scenario;
    j["config_digest"] = summary.config_digest;
    if (summary.seed) j["seed"] = *summary.seed;
    j["scalars"] = summary.scalars;
    j["checks"] = json::array();
    for (const auto& c : summary.checks)
        j["checks"].push_back({{"name", c.name},
                               {"value", c.value},
                               {"tolerance", c.tolerance},
                               {"pass", c.pass}});
    j["outputs"] = summary.outputs;
    j["wall_time_s"] = summary.wall_time_s;
    j["all_passed"] = summary.all_passed();
    if (config.scenario == Scenario::friction) {
        j["report"] = {{"eta", summary.scalars.at("eta")},
                       {"error_estimate", summary.scalars.at("error_estimate")},
                       {"q_max", summary.scalars.at("q_max")},
                       {"samples_path", "friction.csv"}};
    }

    // summary.json is written last, through a temp file + rename
    const fs::path tmp = dir / "summary.json.tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, dir / "summary.json");
    summary.outputs.push_back("summary.json");
    return summary;
}

} // namespace qlbe
