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

#include "qlbe/brownian.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace qlbe {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

Coefficients coefficients(double eta, double M, double beta, const UnitSystem& units) {
    if (!(eta > 0.0 && M > 0.0 && beta > 0.0 && units.hbar > 0.0))
        throw DomainError("coefficients: eta, M, beta, hbar must all be > 0");
    Coefficients c;
    c.eta = eta;
    c.D_pp = M * eta / beta;
    c.D_xx = beta * units.hbar * units.hbar * eta / (16.0 * M);
    return c;
}

ThermalSpreads thermal_spreads(double M, double beta, const UnitSystem& units) {
    if (!(M > 0.0 && beta > 0.0 && units.hbar > 0.0))
        throw DomainError("thermal_spreads: M, beta, hbar must be > 0");
    ThermalSpreads s;
    s.dp_th = std::sqrt(M / beta);
    s.dx_th = units.hbar * std::sqrt(beta / (4.0 * M));
    return s;
}

std::optional<std::string> validate(const GaussianState1D& state, const UnitSystem& units) {
    const double vals[] = {state.mean_x, state.mean_p, state.var_x, state.var_p,
                           state.cov_xp};
    for (double v : vals)
        if (!std::isfinite(v)) return "moments must be finite";
    if (state.var_x < 0.0) return "var_x must be >= 0";
    if (state.var_p < 0.0) return "var_p must be >= 0";
    const double det = state.var_x * state.var_p - state.cov_xp * state.cov_xp;
    if (det < -1e-10) return "covariance matrix must be positive semidefinite";
    const double bound = 0.25 * units.hbar * units.hbar;
    if (det < bound - 1e-10) return "Heisenberg bound var_x var_p - cov^2 >= hbar^2/4 violated";
    return std::nullopt;
}

GaussianState1D evolve_moments(const GaussianState1D& state, const Coefficients& coeff,
                               double M, double t) {
    if (!(M > 0.0)) throw DomainError("evolve_moments: M must be > 0");
    const double eta = coeff.eta;
    GaussianState1D out;
    if (eta == 0.0) {
        out.mean_p = state.mean_p;
        out.mean_x = state.mean_x + state.mean_p * t / M;
        out.var_p = state.var_p + 2.0 * coeff.D_pp * t;
        out.cov_xp = state.cov_xp + (state.var_p * t + coeff.D_pp * t * t) / M;
        out.var_x = state.var_x + 2.0 * coeff.D_xx * t +
                    (2.0 / M) * (state.cov_xp * t +
                                 (state.var_p * t * t / 2.0 + coeff.D_pp * t * t * t / 3.0) / M);
        return out;
    }
    const double e1 = std::exp(-eta * t);
    const double e2 = std::exp(-2.0 * eta * t);
    const double d1 = -std::expm1(-eta * t);       // 1 - e1
    const double d2 = -std::expm1(-2.0 * eta * t); // 1 - e2
    const double v_inf = coeff.D_pp / eta;

    out.mean_p = state.mean_p * e1;
    out.mean_x = state.mean_x + state.mean_p * d1 / (M * eta);
    out.var_p = v_inf + (state.var_p - v_inf) * e2;
    out.cov_xp = state.cov_xp * e1 +
                 (v_inf * d1 + (state.var_p - v_inf) * (e1 - e2)) / (M * eta);
    const double cov_integral =
        state.cov_xp * d1 / eta +
        (v_inf * (t - d1 / eta) + (state.var_p - v_inf) * (d1 / eta - d2 / (2.0 * eta))) /
            (M * eta);
    out.var_x = state.var_x + 2.0 * coeff.D_xx * t + (2.0 / M) * cov_integral;
    return out;
}

std::optional<std::string> validate(const PositionGrid& grid) {
    if (!(std::isfinite(grid.x_min) && std::isfinite(grid.x_max)))
        return "x_min/x_max must be finite";
    if (!(grid.x_min < grid.x_max)) return "x_min must be < x_max";
    if (grid.count < 8 || grid.count > 256) return "count must be in [8, 256]";
    return std::nullopt;
}

namespace {

// Periodic spectral representation of the momentum operator: p = F^dag D F
// with FFT frequencies. Cyclic shifts commute with it exactly.
struct GridOperators {
    VecX x;
    MatXc P;
    MatXc P2;
    double p_max = 0.0;
};

GridOperators build_operators(const PositionGrid& grid, const UnitSystem& units) {
    const int n = grid.count;
    const double L = grid.x_max - grid.x_min;
    GridOperators ops;
    ops.x.resize(n);
    for (int i = 0; i < n; ++i) ops.x[i] = grid.x(i);

    MatXc F(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            F(j, i) = norm * std::exp(Complex(0.0, -2.0 * kPi * j * i / n));

    VecX pvals(n);
    for (int j = 0; j < n; ++j) {
        const int m = (j <= n / 2) ? j : j - n;
        pvals[j] = 2.0 * kPi * units.hbar / L * m;
    }
    ops.p_max = pvals.cwiseAbs().maxCoeff();

    const MatXc Fd = F.adjoint();
    ops.P = Fd * pvals.asDiagonal() * F;
    ops.P2 = Fd * pvals.cwiseAbs2().asDiagonal() * F;
    // exact Hermiticity of the operator matrices
    ops.P = Complex(0.5, 0.0) * (ops.P + MatXc(ops.P.adjoint()));
    ops.P2 = Complex(0.5, 0.0) * (ops.P2 + MatXc(ops.P2.adjoint()));
    return ops;
}

MatXc liouvillian(const GridOperators& ops, const Coefficients& coeff, double M,
                  const UnitSystem& units, const MatXc& rho) {
    const double h = units.hbar;
    const int n = static_cast<int>(rho.rows());

    MatXc P_rho(n, n), rho_P(n, n), P_rho_P(n, n), P2_rho(n, n), rho_P2(n, n);
    P_rho.noalias() = ops.P * rho;
    rho_P.noalias() = rho * ops.P;
    P_rho_P.noalias() = P_rho * ops.P;
    P2_rho.noalias() = ops.P2 * rho;
    rho_P2.noalias() = rho * ops.P2;

    MatXc out = Complex(0.0, -1.0 / (2.0 * M * h)) * (P2_rho - rho_P2);

    if (coeff.eta != 0.0 || coeff.D_pp != 0.0) {
        const MatXc anti = P_rho + rho_P;
        const Complex fric(0.0, -0.5 * coeff.eta / h);
        const double dpp = coeff.D_pp / (h * h);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const double dx = ops.x[i] - ops.x[j];
                out(i, j) += fric * dx * anti(i, j) - dpp * dx * dx * rho(i, j);
            }
        }
    }
    if (coeff.D_xx != 0.0) {
        out -= (coeff.D_xx / (h * h)) * (P2_rho + rho_P2 - 2.0 * P_rho_P);
    }
    return out;
}

void hermitize(MatXc& rho) { rho = Complex(0.5, 0.0) * (rho + MatXc(rho.adjoint())); }

double min_eigenvalue(const MatXc& rho) {
    Eigen::SelfAdjointEigenSolver<MatXc> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace

std::optional<std::string> validate(const GridDensityMatrix& state) {
    if (auto err = validate(state.grid)) return err;
    if (state.rho.rows() != state.grid.count || state.rho.cols() != state.grid.count)
        return "matrix shape must match grid";
    const double herm = (state.rho - MatXc(state.rho.adjoint())).cwiseAbs().maxCoeff();
    if (herm > 1e-9) return "matrix must be Hermitian";
    if (std::abs(state.rho.trace().real() - 1.0) > 1e-8) return "trace must be 1 (within 1e-8)";
    if (min_eigenvalue(state.rho) < -1e-7) return "minimum eigenvalue must be >= -1e-7";
    return std::nullopt;
}

GridDensityMatrix gaussian_grid_state(const PositionGrid& grid, const GaussianState1D& moments,
                                      const UnitSystem& units) {
    if (auto err = validate(grid)) throw ValidationError("gaussian_grid_state: " + *err);
    if (auto err = validate(moments, units)) throw ValidationError("gaussian_grid_state: " + *err);
    if (!(moments.var_x > 0.0)) throw ValidationError("gaussian_grid_state: var_x must be > 0");
    const double h = units.hbar;
    const int n = grid.count;
    const double sxx = moments.var_x;
    const double spp_cond = moments.var_p - moments.cov_xp * moments.cov_xp / sxx;

    GridDensityMatrix out;
    out.grid = grid;
    out.rho.resize(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double u = 0.5 * (grid.x(i) + grid.x(j)) - moments.mean_x;
            const double v = grid.x(i) - grid.x(j);
            const double mag =
                std::exp(-u * u / (2.0 * sxx) - spp_cond * v * v / (2.0 * h * h));
            const double phase = (moments.mean_p + moments.cov_xp / sxx * u) * v / h;
            out.rho(i, j) = mag * std::exp(Complex(0.0, phase));
        }
    }
    out.rho /= out.rho.trace();
    return out;
}

double grid_step_bound(const PositionGrid& grid, const Coefficients& coeff, double M,
                       const UnitSystem& units) {
    const double h = units.hbar;
    const double L = grid.x_max - grid.x_min;
    const double p_max = kPi * units.hbar * grid.count / L;
    const double lam_h = p_max * p_max / (M * h);
    const double lam_dpp = coeff.D_pp / (h * h) * L * L;
    const double lam_dxx = coeff.D_xx / (h * h) * 4.0 * p_max * p_max;
    const double lam_fric = coeff.eta / h * L * p_max;
    const double lam = lam_h + lam_dpp + lam_dxx + lam_fric;
    return 1.4 / lam; // half the RK4 real-axis stability reach
}

GridDensityMatrix evolve_grid(const GridDensityMatrix& state, const Coefficients& coeff,
                              double M, const UnitSystem& units, double dt, int steps,
                              GridEvolutionLog* log) {
    if (!(dt > 0.0) || steps < 0)
        throw DomainError("evolve_grid: dt must be > 0 and steps >= 0");
    const GridOperators ops = build_operators(state.grid, units);

    GridDensityMatrix out;
    out.grid = state.grid;
    out.rho = state.rho;
    hermitize(out.rho);

    for (int s = 0; s < steps; ++s) {
        const MatXc k1 = liouvillian(ops, coeff, M, units, out.rho);
        const MatXc k2 = liouvillian(ops, coeff, M, units, out.rho + 0.5 * dt * k1);
        const MatXc k3 = liouvillian(ops, coeff, M, units, out.rho + 0.5 * dt * k2);
        const MatXc k4 = liouvillian(ops, coeff, M, units, out.rho + dt * k3);
        out.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        hermitize(out.rho);
        const double tr = out.rho.trace().real();
        const double eig = min_eigenvalue(out.rho);
        if (log) {
            log->trace.push_back(tr);
            log->min_eig.push_back(eig);
        }
        if (eig < -1e-5)
            throw NumericError("evolve_grid: positivity violated (min eigenvalue " +
                               std::to_string(eig) + "); reduce the step size");
    }
    return out;
}

double positivity_check(const GridDensityMatrix& state) {
    MatXc rho = state.rho;
    hermitize(rho);
    return min_eigenvalue(rho);
}

GaussianState1D grid_moments(const GridDensityMatrix& state, const UnitSystem& units) {
    const GridOperators ops = build_operators(state.grid, units);
    const int n = state.grid.count;
    const MatXc& rho = state.rho;

    double mean_x = 0.0, x2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pop = rho(i, i).real();
        mean_x += ops.x[i] * pop;
        x2 += ops.x[i] * ops.x[i] * pop;
    }
    MatXc p_rho = ops.P * rho;
    MatXc rho_p = rho * ops.P;
    MatXc p2_rho = ops.P2 * rho;
    const double mean_p = p_rho.trace().real();
    const double p2 = p2_rho.trace().real();
    double xp = 0.0;
    for (int i = 0; i < n; ++i) xp += 0.5 * ops.x[i] * (p_rho(i, i) + rho_p(i, i)).real();

    GaussianState1D m;
    m.mean_x = mean_x;
    m.mean_p = mean_p;
    m.var_x = x2 - mean_x * mean_x;
    m.var_p = p2 - mean_p * mean_p;
    m.cov_xp = xp - mean_x * mean_p;
    return m;
}

namespace {

MatXc cyclic_shift(const MatXc& rho, int cells) {
    const int n = static_cast<int>(rho.rows());
    MatXc out(n, n);
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = rho(wrap(i - cells), wrap(j - cells));
    return out;
}

} // namespace

double translation_covariance_grid(const Coefficients& coeff, double M,
                                   const UnitSystem& units, const GridDensityMatrix& state,
                                   int shift_cells, double dt, int steps) {
    GridDensityMatrix shifted;
    shifted.grid = state.grid;
    shifted.rho = cyclic_shift(state.rho, shift_cells);

    const GridDensityMatrix a = evolve_grid(shifted, coeff, M, units, dt, steps);
    GridDensityMatrix b = evolve_grid(state, coeff, M, units, dt, steps);
    b.rho = cyclic_shift(b.rho, shift_cells);
    return (a.rho - b.rho).cwiseAbs().maxCoeff();
}

} // namespace qlbe
