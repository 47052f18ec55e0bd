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

#ifndef QLBE_STRUCTURE_FACTOR_HPP
#define QLBE_STRUCTURE_FACTOR_HPP

#include <array>
#include <functional>
#include <variant>

#include "qlbe/physcore.hpp"
#include "qlbe/quadrature.hpp"
#include "qlbe/types.hpp"

namespace qlbe {

// Sign convention, shared by every module: momentum q and energy E are
// positive when transferred TO the test particle.

/// Dynamic structure factor of a free Maxwell-Boltzmann gas,
///   S(q,E) = sqrt(beta m / 2 pi) (1/q) exp(-(beta/8m) (2mE+q^2)^2 / q^2).
struct MBExact {
    GasSpec gas;
};

/// Its small-energy-transfer / heavy-particle limit,
///   S(q,E) = sqrt(beta m / 2 pi) (1/q) exp(-beta q^2 / 8m) exp(-beta E / 2).
struct MBLimit {
    GasSpec gas;
};

/// Phonon-bath spectral function: a pair of delta atoms at -+ hbar*omega_q.
/// Represented as atoms, never as function values.
struct PhononSpectral {
    std::function<double(double)> dispersion; // q -> omega_q > 0
    double inverse_temperature_beta = 1.0;
};

using SpectralFunction = std::variant<MBExact, MBLimit, PhononSpectral>;

double beta_of(const SpectralFunction& S);
/// Gas parameters of an MB variant; DomainError for the phonon kernel.
const GasSpec& gas_of(const SpectralFunction& S);

/// Energy gained by the test particle in a collision of momentum transfer q:
/// E(q,p) = ((p+q)^2 - p^2) / 2M.
double energy_transfer(const Vec3& q, const Vec3& p, double M);
double energy_transfer_1d(double q, double p, double M);

/// S(q,E) for the smooth MB variants; q is a magnitude (> 0), evenness in q
/// holds by construction. Strictly positive. q = 0 or a phonon kernel raise
/// DomainError.
double s_eval(const SpectralFunction& S, double q_mag, double E);
double s_eval(const SpectralFunction& S, const Vec3& q, double E);

/// (S(q,E) - e^(-beta E) S(-q,-E)) / S(q,E); identically zero in exact
/// arithmetic for both MB variants.
double detailed_balance_residual(const SpectralFunction& S, double q_mag, double E);
double detailed_balance_residual(const SpectralFunction& S, const Vec3& q, double E);

/// Dynamic response function chi''(q,E) = pi (1 - e^(beta E)) S(q,E).
/// E = 0 is a removable point: use response_derivative_at_zero.
double response_function(const SpectralFunction& S, double q_mag, double E);

/// d(chi'')/dE at E = 0, i.e. -pi beta S(q,0); chi''(q,0) itself is 0.
double response_derivative_at_zero(const SpectralFunction& S, double q_mag);

/// Real correlation functions phi-(q,t) (commutator) and phi+(q,t)
/// (anticommutator); phi-(q,0) = 0.
struct CorrelationPair {
    double phi_minus = 0.0;
    double phi_plus = 0.0;
};

/// phi-+ by quadrature of the structure-factor form over E in (-inf, 0]:
///   phi- = -(2/hbar) Int sin(Et/hbar) (1 - e^(beta E)) S(q,E) dE
///   phi+ = -(2/hbar) Int cos(Et/hbar) coth(beta E/2) (1 - e^(beta E)) S(q,E) dE
/// Defined for MBExact only: the limit variant grows like e^(-beta E/2) for
/// E -> -inf and its integral diverges.
CorrelationPair fdt_phi(const SpectralFunction& S, double q_mag, double t,
                        const UnitSystem& units, const QuadratureSpec& quad = {});

/// Same correlations through the response function,
///   phi- = -(2/(pi hbar)) Int sin(Et/hbar) chi''(q,E) dE
///   phi+ = -(2/(pi hbar)) Int cos(Et/hbar) coth(beta E/2) chi''(q,E) dE,
/// the cross-check route for fdt_phi.
CorrelationPair fdt_phi_via_response(const SpectralFunction& S, double q_mag, double t,
                                     const UnitSystem& units,
                                     const QuadratureSpec& quad = {});

struct SpectralAtom {
    double energy;
    double weight;
};

/// Atoms of the phonon spectral function at momentum transfer q:
/// {(-hbar w_q, 1+N), (+hbar w_q, N)} with N = 1/(e^(beta hbar w_q) - 1).
std::array<SpectralAtom, 2> phonon_spectral(const PhononSpectral& S, double q_mag,
                                            const UnitSystem& units);

/// van Hove Born-approximation cross-section
///   d2sigma/dOmega dE' = (2 pi hbar)^6 (M / 2 pi hbar^2)^2 (p'/p) |t~(q)|^2 S(q, E(q,p))
/// for a particle scattering p -> p' = p + q. |p| = 0 raises DomainError.
double born_cross_section(const PotentialSpec& potential, const SpectralFunction& S,
                          const Vec3& p, const Vec3& q, double M,
                          const UnitSystem& units);

struct CrossSectionResult {
    double sigma = 0.0;          // total cross-section, Int d2sigma dOmega' dE'
    double loss_rate = 0.0;      // (n / 2M) |p| sigma(p)
    double error_estimate = 0.0; // quadrature error on sigma
};

/// Total cross-section by quadrature over outgoing directions and energies,
/// plus the anticommutator loss rate (n/2M)|p| sigma(p).
CrossSectionResult total_cross_section(const PotentialSpec& potential,
                                       const SpectralFunction& S, const Vec3& p,
                                       double M, const UnitSystem& units,
                                       const QuadratureSpec& quad = {});

} // namespace qlbe

#endif
