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

#ifndef QLBE_PHYSCORE_HPP
#define QLBE_PHYSCORE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qlbe/errors.hpp"

namespace qlbe {

/// Homogeneous background gas: mass m of a gas particle, inverse temperature
/// beta, number density n. All strictly positive.
struct GasSpec {
    double mass_m = 1.0;
    double inverse_temperature_beta = 1.0;
    double number_density_n = 1.0;
};

/// Test particle of mass M (the heavy particle of the Brownian limit m/M << 1).
struct ParticleSpec {
    double mass_M = 1.0;
};

/// hbar is kept explicit so every prefactor can be written exactly as in the
/// physics; the default hbar = 1 gives the dimensionless unit system used by
/// the tests.
struct UnitSystem {
    double hbar = 1.0;
};

/// Fourier transform of the collision potential,
///   t~(q) = g * exp(-q^2 r^2 / (2 hbar^2)) / (2 pi hbar)^3,
/// real, even and isotropic. r = 0 gives the flat (contact) limit.
struct GaussianFourierPotential {
    double strength_g = 1.0;
    double range_r = 1.0;
};

/// t~(q) sampled on a strictly increasing q-grid; linear interpolation
/// in between, zero outside the table.
struct TabulatedPotential {
    std::vector<double> q;
    std::vector<double> value;
};

using PotentialSpec = std::variant<GaussianFourierPotential, TabulatedPotential>;

/// First violated invariant (naming the field), or nullopt if valid.
std::optional<std::string> validate(const GasSpec& gas);
std::optional<std::string> validate(const ParticleSpec& particle);
std::optional<std::string> validate(const UnitSystem& units);
std::optional<std::string> validate(const PotentialSpec& potential);

/// Throws ValidationError with the message from validate().
template <typename Spec>
void require_valid(const Spec& spec) {
    if (auto err = validate(spec)) throw ValidationError(*err);
}

/// t~(q) for momentum-transfer magnitude q >= 0. Evenness t~(-q) = t~(q) is
/// guaranteed by the magnitude signature. Pure function of its arguments.
double potential_ft(const PotentialSpec& potential, double q, const UnitSystem& units);

/// Upper bound of |t~| over all q (envelope construction for samplers).
double potential_ft_bound(const PotentialSpec& potential, const UnitSystem& units);

/// Largest q with t~ possibly non-zero: table end for tabulated potentials,
/// +inf for Gaussian ones (represented as a large decay-based radius).
double potential_support_radius(const PotentialSpec& potential, const UnitSystem& units);

/// True if t~ vanishes identically (inert kernel).
bool is_zero_potential(const PotentialSpec& potential);

} // namespace qlbe

#endif
