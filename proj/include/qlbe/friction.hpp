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

#ifndef QLBE_FRICTION_HPP
#define QLBE_FRICTION_HPP

#include <optional>
#include <utility>
#include <vector>

#include "qlbe/kinetics.hpp"
#include "qlbe/physcore.hpp"
#include "qlbe/quadrature.hpp"

namespace qlbe {

/// Microphysical friction coefficient
///   eta = (beta/2M) (2 pi/hbar) (2 pi hbar)^3 n Int d^3q |t~(q)|^2 (q^2/3) S(q,0),
/// reduced by isotropy to a radial integral.
struct FrictionReport {
    double eta = 0.0;
    double error_estimate = 0.0;
    double q_max = 0.0; // radial truncation actually used
    std::vector<std::pair<double, double>> integrand_samples; // (q, q^2 |t~|^2 S(q,0))
    std::optional<double> mc_rate;
    std::optional<double> mc_relative_deviation;
};

FrictionReport friction_eta(const GasSpec& gas, const ParticleSpec& particle,
                            const PotentialSpec& potential, const UnitSystem& units,
                            const QuadratureSpec& quad = {});

/// Independent cross-check route: composite trapezoid with n_points nodes on
/// the same truncated radial domain. Dual-quadrature agreement with
/// friction_eta pins the regression value.
double friction_eta_trapezoid(const GasSpec& gas, const ParticleSpec& particle,
                              const PotentialSpec& potential, const UnitSystem& units,
                              std::int64_t n_points = 1000000);

/// Relative residual between the direct form of eta and the gradient-density
/// form (momentum-weighted autocorrelation route): the two integrands are
/// algebraically identical, so the residual is a machine-level check of the
/// prefactor chain.
double eta_gradient_form_residual(const GasSpec& gas, const ParticleSpec& particle,
                                  const PotentialSpec& potential, const UnitSystem& units,
                                  const QuadratureSpec& quad = {});

/// Fits <p(t)> of a Brownian-limit ensemble to exponential decay and returns
/// the relative deviation |fit - eta| / eta (also stored in the report).
/// Returns nullopt (comparison skipped) for an inert kernel with eta = 0.
std::optional<double> compare_with_mc(FrictionReport& report,
                                      const DiagonalEnsemble& ensemble);

} // namespace qlbe

#endif
