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

#include "qlbe/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlbe/parallel.hpp"
#include "qlbe/rng.hpp"

namespace qlbe {

namespace {

constexpr double kPi = std::numbers::pi;

SpectralFunction make_spectral(const GasSpec& gas, KernelVariant variant) {
    if (variant == KernelVariant::mb_exact) return MBExact{gas};
    return MBLimit{gas};
}

double uniform_open(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double u = dist(rng);
    while (u <= 0.0) u = dist(rng);
    return u;
}

Vec3 uniform_direction(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const double z = 2.0 * dist(rng) - 1.0;
    const double phi = 2.0 * kPi * dist(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(s * std::cos(phi), s * std::sin(phi), z);
}

} // namespace

std::optional<std::string> validate(const MomentumGrid1D& grid) {
    if (!(std::isfinite(grid.p_min) && std::isfinite(grid.p_max)))
        return "p_min/p_max must be finite";
    if (!(grid.p_min < grid.p_max)) return "p_min must be < p_max";
    if (grid.count < 16) return "count must be >= 16";
    return std::nullopt;
}

std::optional<std::string> validate(const BandState& state) {
    if (auto err = validate(state.grid)) return err;
    if (state.values.size() != state.grid.count)
        return "values length must equal grid count";
    for (int i = 0; i < state.values.size(); ++i) {
        if (!std::isfinite(state.values[i].real()) || !std::isfinite(state.values[i].imag()))
            return "values must be finite";
    }
    if (state.offset_k == 0.0) {
        const double dp = state.grid.spacing();
        double sum = 0.0;
        for (int i = 0; i < state.values.size(); ++i) {
            if (std::abs(state.values[i].imag()) > 1e-9)
                return "k=0 band must be real";
            if (state.values[i].real() < -1e-9) return "k=0 band must be non-negative";
            sum += state.values[i].real();
        }
        if (sum * dp > 1.0 + 1e-6) return "k=0 band trace must be <= 1";
    }
    return std::nullopt;
}

double band_trace(const BandState& state) {
    return state.values.real().sum() * state.grid.spacing();
}

double band_l1_mass(const BandState& state) {
    double sum = 0.0;
    for (int i = 0; i < state.values.size(); ++i) sum += std::abs(state.values[i]);
    return sum * state.grid.spacing();
}

CollisionKernel::CollisionKernel(const GasSpec& gas, const ParticleSpec& particle,
                                 const PotentialSpec& potential, KernelVariant variant,
                                 const UnitSystem& units)
    : gas_(gas), particle_(particle), potential_(potential), units_(units),
      variant_(variant), spectral_(make_spectral(gas, variant)) {
    require_valid(gas_);
    require_valid(particle_);
    require_valid(potential_);
    require_valid(units_);
    const double h = units.hbar;
    prefactor_ = (2.0 * kPi / h) * std::pow(2.0 * kPi * h, 3) * gas.number_density_n;
    inert_ = is_zero_potential(potential_);
}

CollisionKernel kernel_build(const GasSpec& gas, const ParticleSpec& particle,
                             const PotentialSpec& potential, KernelVariant variant,
                             const UnitSystem& units) {
    return CollisionKernel(gas, particle, potential, variant, units);
}

double CollisionKernel::jump_density(const Vec3& q, const Vec3& p) const {
    if (inert_) return 0.0;
    const double qn = q.norm();
    if (!(qn > 0.0)) throw DomainError("jump_density: q must be non-zero");
    const double tq = potential_ft(potential_, qn, units_);
    if (tq == 0.0) return 0.0;
    const double E = energy_transfer(q, p, particle_.mass_M);
    return prefactor_ * tq * tq * s_eval(spectral_, qn, E);
}

double CollisionKernel::rate(const Vec3& p, const QuadratureSpec& quad) const {
    if (inert_) return 0.0;
    const double m = gas_.mass_m;
    const double beta = gas_.inverse_temperature_beta;
    const double M = particle_.mass_M;
    const double pn = p.norm();
    const double amp = std::sqrt(beta * m / (2.0 * kPi));

    // angular integral of S(q, E(q,p)) over the cosine, closed form
    auto angular = [&](double q) {
        if (variant_ == KernelVariant::mb_exact) {
            const double kappa = beta / (8.0 * m);
            const double s = std::sqrt(kappa) / q;
            const double u0 = q * q * (1.0 + m / M);
            const double u1 = 2.0 * m * pn * q / M;
            if (u1 < 1e-12 * u0) {
                const double w = s * u0;
                return 2.0 * std::exp(-w * w);
            }
            const double wp = s * (u0 + u1);
            const double wm = s * (u0 - u1);
            double diff;
            if (wm > 0.0)
                diff = std::erfc(wm) - std::erfc(wp);
            else
                diff = std::erf(wp) - std::erf(wm);
            return std::sqrt(kPi) / 2.0 * diff / (s * u1);
        }
        // limit variant: exp(-beta q^2(1/8m + 1/4M)) * int exp(-beta p q c / 2M) dc
        const double gexp = beta * q * q * (1.0 / (8.0 * m) + 1.0 / (4.0 * M));
        const double kap = beta * pn * q / (2.0 * M);
        if (kap < 1e-8) return 2.0 * std::exp(-gexp) * (1.0 + kap * kap / 6.0);
        return (std::exp(kap - gexp) - std::exp(-kap - gexp)) / kap;
    };

    auto radial = [&](double q) {
        const double tq = potential_ft(potential_, q, units_);
        if (tq == 0.0) return 0.0;
        return q * q * tq * tq * amp / q * angular(q);
    };

    double hard_max = potential_support_radius(potential_, units_);
    if (!std::isfinite(hard_max)) {
        const double q0 = 2.0 * (m / M) * pn / (1.0 + m / M);
        hard_max = q0 + 10.0 * std::sqrt(8.0 * m / beta) / (1.0 + m / M);
    }
    const double q_hi = truncation_point(radial, hard_max);

    QuadratureResult r;
    if (const auto* tab = std::get_if<TabulatedPotential>(&potential_)) {
        std::vector<double> breaks;
        breaks.push_back(0.0);
        for (double qk : tab->q)
            if (qk > 0.0 && qk < q_hi) breaks.push_back(qk);
        breaks.push_back(q_hi);
        r = integrate_segments(radial, breaks, quad);
    } else {
        r = integrate(radial, 0.0, q_hi, quad);
    }
    return prefactor_ * 2.0 * kPi * r.value;
}

CollisionKernel::Envelope CollisionKernel::make_envelope(double p_cap) const {
    Envelope env;
    if (inert_) {
        env.total_rate = 0.0;
        env.p_cap = std::numeric_limits<double>::infinity();
        return env;
    }
    const double m = gas_.mass_m;
    const double beta = gas_.inverse_temperature_beta;
    const double M = particle_.mass_M;
    const double h = units_.hbar;
    const double amp_s = std::sqrt(beta * m / (2.0 * kPi));
    const double t_bound = potential_ft_bound(potential_, units_);
    const double base = prefactor_ * t_bound * t_bound * amp_s;

    if (const auto* g = std::get_if<GaussianFourierPotential>(&potential_)) {
        const double alpha = g->range_r * g->range_r / (h * h);
        env.gaussian_radial = true;
        if (variant_ == KernelVariant::mb_exact) {
            if (alpha > 0.0) {
                // S-exponential bounded by 1; p-independent envelope
                env.gamma = alpha;
                env.amplitude = base;
                env.p_cap = std::numeric_limits<double>::infinity();
            } else {
                // flat potential: bound the S-exponential by a shifted Gaussian,
                // exp(-g1 (q - q0)^2) <= exp(g1 q0^2) exp(-g1 q^2 / 2)
                const double g1 = (beta / (8.0 * m)) * (1.0 + m / M) * (1.0 + m / M);
                const double q0 = 2.0 * (m / M) * p_cap / (1.0 + m / M);
                env.gamma = 0.5 * g1;
                env.amplitude = base * std::exp(g1 * q0 * q0);
                env.p_cap = p_cap;
            }
        } else {
            // exp(delta q) <= exp(delta^2/2g2) exp(g2 q^2/2), g2 = alpha + Gamma
            const double Gamma = (beta / (8.0 * m)) * (1.0 + 2.0 * m / M);
            const double delta = beta * p_cap / (2.0 * M);
            const double g2 = alpha + Gamma;
            env.gamma = 0.5 * g2;
            env.amplitude = base * std::exp(delta * delta / (2.0 * g2));
            env.p_cap = p_cap;
        }
        env.total_rate = env.amplitude * 2.0 * kPi / env.gamma;
        return env;
    }

    const auto& tab = std::get<TabulatedPotential>(potential_);
    env.gaussian_radial = false;
    env.q_cap = tab.q.back();
    if (variant_ == KernelVariant::mb_exact) {
        env.amplitude = base;
        env.p_cap = std::numeric_limits<double>::infinity();
    } else {
        const double delta = beta * p_cap / (2.0 * M);
        env.amplitude = base * std::exp(delta * env.q_cap);
        env.p_cap = p_cap;
    }
    env.total_rate = env.amplitude * 2.0 * kPi * env.q_cap * env.q_cap;
    return env;
}

Vec3 CollisionKernel::Envelope::propose(std::mt19937_64& rng) const {
    double q;
    if (gaussian_radial) {
        q = std::sqrt(-std::log(uniform_open(rng)) / gamma);
    } else {
        q = q_cap * std::sqrt(uniform_open(rng));
    }
    return q * uniform_direction(rng);
}

double CollisionKernel::Envelope::density(double q_mag) const {
    if (gaussian_radial) return amplitude / q_mag * std::exp(-gamma * q_mag * q_mag);
    return q_mag <= q_cap ? amplitude / q_mag : 0.0;
}

Vec3 CollisionKernel::sample_jump(const Vec3& p, std::mt19937_64& rng) const {
    if (inert_) throw DomainError("sample_jump: kernel has zero rate");
    const Envelope env = make_envelope(p.norm());
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int it = 0; it < 1000000; ++it) {
        const Vec3 q = env.propose(rng);
        const double ratio = jump_density(q, p) / env.density(q.norm());
        if (dist(rng) < ratio) return q;
    }
    throw NumericError("sample_jump: rejection sampler exceeded iteration budget");
}

namespace {

double initial_cap(const Vec3& p0, const GasSpec& gas, const ParticleSpec& particle) {
    const double thermal = std::sqrt(particle.mass_M / gas.inverse_temperature_beta);
    return std::max(1.1 * p0.norm(), 4.0 * thermal);
}

Trajectory simulate_trajectory(const CollisionKernel& kernel, const Vec3& p0,
                               const std::vector<double>& times, double horizon,
                               std::uint64_t seed) {
    Trajectory tr;
    tr.seed = seed;
    tr.times = times;
    tr.momenta.assign(times.size(), p0);

    std::mt19937_64 rng(seed);
    Vec3 p = p0;
    std::size_t snap = 0;
    // cadlag convention: a snapshot exactly at a jump time sees the post-jump state
    auto record_before = [&](double t_now) {
        while (snap < times.size() && times[snap] < t_now) tr.momenta[snap++] = p;
    };
    auto record_through = [&](double t_now) {
        while (snap < times.size() && times[snap] <= t_now) tr.momenta[snap++] = p;
    };

    if (kernel.inert()) {
        record_through(horizon);
        return tr;
    }

    CollisionKernel::Envelope env = kernel.make_envelope(initial_cap(p0, kernel.gas(), kernel.particle()));
    if (!(env.total_rate > 0.0) || !std::isfinite(env.total_rate))
        throw NumericError("mc_evolve: envelope rate invalid (pathological potential)");

    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double t = 0.0;
    while (true) {
        const double wait = -std::log(uniform_open(rng)) / env.total_rate;
        const double t_next = t + wait;
        if (t_next >= horizon) {
            record_through(horizon);
            break;
        }
        record_before(t_next);
        const Vec3 q = env.propose(rng);
        const double ratio = kernel.jump_density(q, p) / env.density(q.norm());
        if (dist(rng) < ratio) {
            p += q;
            ++tr.jump_count;
            if (p.norm() > env.p_cap) {
                env = kernel.make_envelope(std::max(1.3 * p.norm(), env.p_cap));
                if (!std::isfinite(env.total_rate))
                    throw NumericError("mc_evolve: rate overflow (pathological potential)");
            }
        }
        t = t_next;
    }
    return tr;
}

DiagonalEnsemble run_ensemble(const CollisionKernel& kernel, const InitialSampler& initial,
                              double horizon, int n_traj, std::uint64_t seed,
                              int snapshots) {
    if (!(horizon > 0.0)) throw DomainError("mc_evolve: horizon must be > 0");
    if (n_traj < 1) throw DomainError("mc_evolve: n_traj must be >= 1");
    if (snapshots < 2) throw DomainError("mc_evolve: need at least 2 snapshots");

    std::vector<double> times(static_cast<std::size_t>(snapshots));
    for (int k = 0; k < snapshots; ++k)
        times[static_cast<std::size_t>(k)] = horizon * k / (snapshots - 1);
    times.back() = horizon; // guard against the division rounding past the horizon

    DiagonalEnsemble out;
    out.horizon = horizon;
    out.variant = kernel.variant();
    out.trajectories.resize(static_cast<std::size_t>(n_traj));
    parallel_for(n_traj, [&](int i) {
        const std::uint64_t s = trajectory_seed(seed, static_cast<std::uint64_t>(i));
        std::mt19937_64 init_rng(splitmix64(s));
        const Vec3 p0 = initial(init_rng);
        out.trajectories[static_cast<std::size_t>(i)] =
            simulate_trajectory(kernel, p0, times, horizon, s);
    });
    return out;
}

} // namespace

DiagonalEnsemble mc_evolve(const CollisionKernel& kernel, const Vec3& initial,
                           double horizon, int n_traj, std::uint64_t seed, int snapshots) {
    return run_ensemble(
        kernel, [&initial](std::mt19937_64&) { return initial; }, horizon, n_traj, seed,
        snapshots);
}

DiagonalEnsemble mc_evolve(const CollisionKernel& kernel, const InitialSampler& initial,
                           double horizon, int n_traj, std::uint64_t seed, int snapshots) {
    return run_ensemble(kernel, initial, horizon, n_traj, seed, snapshots);
}

Vec3 maxwell_sample(double mass, double beta, std::mt19937_64& rng) {
    std::normal_distribution<double> comp(0.0, std::sqrt(mass / beta));
    return Vec3(comp(rng), comp(rng), comp(rng));
}

Vec3 ensemble_mean(const DiagonalEnsemble& ensemble, int snapshot) {
    Vec3 sum = Vec3::Zero();
    for (const auto& tr : ensemble.trajectories)
        sum += tr.momenta[static_cast<std::size_t>(snapshot)];
    return sum / static_cast<double>(ensemble.trajectories.size());
}

std::vector<double> ensemble_component(const DiagonalEnsemble& ensemble, int snapshot,
                                       int component) {
    std::vector<double> out;
    out.reserve(ensemble.trajectories.size());
    for (const auto& tr : ensemble.trajectories)
        out.push_back(tr.momenta[static_cast<std::size_t>(snapshot)][component]);
    return out;
}

namespace {

// Precomputed lattice tables of the banded generator at fixed offset k.
struct BandTables {
    int reach = 0;              // q_j = j * dp, j in [-reach, reach], j != 0
    std::vector<double> w;      // 2*reach+1 weights, index j+reach
    Eigen::MatrixXd sqrt_s0;    // (2*reach+1) x N, sqrt S(q_j, E(q_j, p_i))
    Eigen::MatrixXd sqrt_sk;    // same at p_i - k
    VecX loss;                  // N
    VecX phase;                 // free-evolution frequencies
};

BandTables build_band_tables(const BandState& state, const CollisionKernel& kernel) {
    const MomentumGrid1D& grid = state.grid;
    const int n = grid.count;
    const double dp = grid.spacing();
    const double M = kernel.particle().mass_M;
    const double h = kernel.units().hbar;
    const SpectralFunction& S = kernel.spectral();

    // lattice weights w_j = prefactor |t~(q_j)|^2 dp; drop negligible tails
    double support = potential_support_radius(kernel.potential(), kernel.units());
    if (!std::isfinite(support)) support = grid.p_max - grid.p_min;
    int reach = std::min(n - 1, static_cast<int>(std::ceil(support / dp)));
    reach = std::max(reach, 1);

    BandTables t;
    t.reach = reach;
    t.w.assign(static_cast<std::size_t>(2 * reach + 1), 0.0);
    for (int j = -reach; j <= reach; ++j) {
        if (j == 0) continue;
        const double q = std::abs(j) * dp;
        const double tq = potential_ft(kernel.potential(), q, kernel.units());
        t.w[static_cast<std::size_t>(j + reach)] = kernel.prefactor() * tq * tq * dp;
    }

    t.sqrt_s0.resize(2 * reach + 1, n);
    t.sqrt_sk.resize(2 * reach + 1, n);
    for (int j = -reach; j <= reach; ++j) {
        const int row = j + reach;
        if (j == 0 || t.w[static_cast<std::size_t>(row)] == 0.0) {
            t.sqrt_s0.row(row).setZero();
            t.sqrt_sk.row(row).setZero();
            continue;
        }
        const double q = j * dp;
        for (int i = 0; i < n; ++i) {
            const double p = grid.p(i);
            t.sqrt_s0(row, i) = std::sqrt(s_eval(S, std::abs(q), energy_transfer_1d(q, p, M)));
            t.sqrt_sk(row, i) =
                std::sqrt(s_eval(S, std::abs(q), energy_transfer_1d(q, p - state.offset_k, M)));
        }
    }

    t.loss.resize(n);
    t.phase.resize(n);
    const double k = state.offset_k;
    for (int i = 0; i < n; ++i) {
        double loss = 0.0;
        for (int j = -reach; j <= reach; ++j) {
            if (j == 0) continue;
            const int row = j + reach;
            const double s0 = t.sqrt_s0(row, i);
            const double sk = t.sqrt_sk(row, i);
            loss += t.w[static_cast<std::size_t>(row)] * 0.5 * (s0 * s0 + sk * sk);
        }
        t.loss[i] = loss;
        const double p = grid.p(i);
        t.phase[i] = (p * p - (p - k) * (p - k)) / (2.0 * M * h);
    }
    return t;
}

void band_rhs(const BandTables& t, const VecXc& v, VecXc& out) {
    const int n = static_cast<int>(v.size());
    const int reach = t.reach;
    for (int i = 0; i < n; ++i) {
        Complex acc = Complex(0.0, -t.phase[i]) * v[i] - t.loss[i] * v[i];
        const int jlo = std::max(-reach, i - (n - 1));
        const int jhi = std::min(reach, i);
        for (int j = jlo; j <= jhi; ++j) {
            if (j == 0) continue;
            const double w = t.w[static_cast<std::size_t>(j + reach)];
            if (w == 0.0) continue;
            const int src = i - j;
            acc += w * t.sqrt_s0(j + reach, src) * t.sqrt_sk(j + reach, src) * v[src];
        }
        out[i] = acc;
    }
}

} // namespace

BandState band_evolve(const BandState& state, const CollisionKernel& kernel, double dt,
                      int steps) {
    if (auto err = validate(state)) throw ValidationError("band_evolve: " + *err);
    if (!(dt > 0.0) || steps < 0) throw DomainError("band_evolve: dt must be > 0, steps >= 0");

    const BandTables tables = build_band_tables(state, kernel);
    const double max_rate = tables.loss.size() ? tables.loss.maxCoeff() : 0.0;
    if (dt * max_rate >= 0.1)
        throw NumericError("band_evolve: dt * max-rate = " + std::to_string(dt * max_rate) +
                           " violates the stability bound dt * max-rate < 0.1");
    const double max_phase = tables.phase.size() ? tables.phase.cwiseAbs().maxCoeff() : 0.0;
    if (dt * max_phase >= 2.5)
        throw NumericError("band_evolve: dt * max free-evolution frequency = " +
                           std::to_string(dt * max_phase) +
                           " outside the RK4 stability region (< 2.5)");

    BandState out = state;
    const int n = state.grid.count;
    VecXc k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (int s = 0; s < steps; ++s) {
        band_rhs(tables, out.values, k1);
        tmp = out.values + 0.5 * dt * k1;
        band_rhs(tables, tmp, k2);
        tmp = out.values + 0.5 * dt * k2;
        band_rhs(tables, tmp, k3);
        tmp = out.values + dt * k3;
        band_rhs(tables, tmp, k4);
        out.values += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

double covariance_test(const CollisionKernel& kernel, const std::vector<BandState>& bands,
                       double shift_a, double dt, int steps) {
    double residual = 0.0;
    const double h = kernel.units().hbar;
    for (const BandState& band : bands) {
        const Complex phase = std::exp(Complex(0.0, -band.offset_k * shift_a / h));
        BandState shifted = band;
        shifted.values *= phase;
        const BandState evolved_then_shifted = [&] {
            BandState e = band_evolve(band, kernel, dt, steps);
            e.values *= phase;
            return e;
        }();
        const BandState shifted_then_evolved = band_evolve(shifted, kernel, dt, steps);
        residual = std::max(residual, (evolved_then_shifted.values - shifted_then_evolved.values)
                                          .cwiseAbs()
                                          .maxCoeff());
    }
    return residual;
}

} // namespace qlbe
