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

#ifndef QLBE_BROWNIAN_HPP
#define QLBE_BROWNIAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "qlbe/physcore.hpp"
#include "qlbe/types.hpp"

namespace qlbe {

// Diffusive-limit master equation (per Cartesian axis):
//   drho/dt = -(i/hbar)[H0, rho] - (i/hbar)(eta/2)[x, {p, rho}]
//             - (D_pp/hbar^2)[x, [x, rho]] - (D_xx/hbar^2)[p, [p, rho]]
// with D_pp = M eta / beta and D_xx = beta hbar^2 eta / (16 M), the
// minimal-invasiveness point D_pp * D_xx = (hbar eta / 4)^2.

struct Coefficients {
    double eta = 0.0;  // 1/time
    double D_pp = 0.0; // momentum^2/time
    double D_xx = 0.0; // length^2/time
};

Coefficients coefficients(double eta, double M, double beta, const UnitSystem& units);

/// Thermal spreads dp_th = sqrt(M/beta), dx_th = hbar sqrt(beta/4M);
/// minimum-uncertainty pair, dp_th * dx_th = hbar/2 exactly.
struct ThermalSpreads {
    double dp_th = 0.0;
    double dx_th = 0.0;
};

ThermalSpreads thermal_spreads(double M, double beta, const UnitSystem& units);

/// First and second moments of a 1D Gaussian state. The generator is
/// quadratic, so Gaussians are closed under it.
struct GaussianState1D {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    double cov_xp = 0.0;
};

/// Positive-semidefinite covariance and Heisenberg bound
/// var_x var_p - cov^2 >= hbar^2/4 (within 1e-10).
std::optional<std::string> validate(const GaussianState1D& state, const UnitSystem& units);

/// Closed-form moment flow of the diffusive-limit equation:
///   d<p>/dt   = -eta <p>
///   d<x>/dt   = <p>/M
///   dvar_p/dt = -2 eta var_p + 2 D_pp
///   dcov/dt   = var_p/M - eta cov
///   dvar_x/dt = 2 cov/M + 2 D_xx
/// (coefficients cross-checked against the grid integrator).
GaussianState1D evolve_moments(const GaussianState1D& state, const Coefficients& coeff,
                               double M, double t);

/// Uniform position grid of the matrix representation.
struct PositionGrid {
    double x_min = -8.0;
    double x_max = 8.0;
    int count = 128;

    double spacing() const { return (x_max - x_min) / count; }
    double x(int i) const { return x_min + (i + 0.5) * spacing(); }
};

std::optional<std::string> validate(const PositionGrid& grid);

/// Position-representation density matrix rho(x_i, x_j) * dx (unit trace).
struct GridDensityMatrix {
    PositionGrid grid;
    MatXc rho;
};

/// Hermitian, trace within 1e-8 of one, min eigenvalue >= -1e-7.
std::optional<std::string> validate(const GridDensityMatrix& state);

/// Gaussian state discretized on the grid, normalized to unit trace.
GridDensityMatrix gaussian_grid_state(const PositionGrid& grid, const GaussianState1D& moments,
                                      const UnitSystem& units);

struct GridEvolutionLog {
    std::vector<double> trace;   // per recorded step
    std::vector<double> min_eig; // per recorded step
};

/// RK4 integration of the diffusive-limit generator on the grid. The momentum
/// operator is the periodic spectral matrix, so interior-supported states see
/// full-line dynamics to spectral accuracy. Hermiticity is enforced by
/// construction; trace conservation and the minimum-eigenvalue monitor are
/// recorded in the log each step. A minimum eigenvalue below -1e-5 aborts
/// (step size too large for the Lindblad-form generator).
GridDensityMatrix evolve_grid(const GridDensityMatrix& state, const Coefficients& coeff,
                              double M, const UnitSystem& units, double dt, int steps,
                              GridEvolutionLog* log = nullptr);

/// Largest stable RK4 step for this grid and coefficient set (stability-bound
/// estimate with a 0.5 safety factor).
double grid_step_bound(const PositionGrid& grid, const Coefficients& coeff, double M,
                       const UnitSystem& units);

/// Smallest eigenvalue of the (Hermitized) density matrix.
double positivity_check(const GridDensityMatrix& state);

/// Moments extracted from the grid representation.
GaussianState1D grid_moments(const GridDensityMatrix& state, const UnitSystem& units);

/// Translation-covariance residual on the grid: cyclic shift by an integer
/// number of cells versus evolution, max-abs difference of the two orders.
/// Periodic wrap makes this exact up to boundary terms; states touching the
/// boundary report large residuals (documented caveat). Non-integer shifts are
/// rejected at the API level by taking cells.
double translation_covariance_grid(const Coefficients& coeff, double M,
                                   const UnitSystem& units, const GridDensityMatrix& state,
                                   int shift_cells, double dt, int steps);

} // namespace qlbe

#endif
