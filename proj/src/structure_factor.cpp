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

#include "qlbe/structure_factor.hpp"

#include <cmath>
#include <numbers>

namespace qlbe {

namespace {

constexpr double kPi = std::numbers::pi;

double coth(double x) { return 1.0 / std::tanh(x); }

} // namespace

double beta_of(const SpectralFunction& S) {
    if (const auto* e = std::get_if<MBExact>(&S)) return e->gas.inverse_temperature_beta;
    if (const auto* l = std::get_if<MBLimit>(&S)) return l->gas.inverse_temperature_beta;
    return std::get<PhononSpectral>(S).inverse_temperature_beta;
}

const GasSpec& gas_of(const SpectralFunction& S) {
    if (const auto* e = std::get_if<MBExact>(&S)) return e->gas;
    if (const auto* l = std::get_if<MBLimit>(&S)) return l->gas;
    throw DomainError("gas_of: phonon spectral function has no gas parameters");
}

double energy_transfer(const Vec3& q, const Vec3& p, double M) {
    if (M <= 0.0) throw DomainError("energy_transfer: M must be > 0");
    return ((p + q).squaredNorm() - p.squaredNorm()) / (2.0 * M);
}

double energy_transfer_1d(double q, double p, double M) {
    if (M <= 0.0) throw DomainError("energy_transfer: M must be > 0");
    return ((p + q) * (p + q) - p * p) / (2.0 * M);
}

double s_eval(const SpectralFunction& S, double q_mag, double E) {
    if (std::holds_alternative<PhononSpectral>(S))
        throw DomainError("s_eval: phonon kernel is atomic; use phonon_spectral");
    if (!(q_mag > 0.0))
        throw DomainError("s_eval: MB structure factor requires q != 0");
    const GasSpec& gas = gas_of(S);
    const double m = gas.mass_m;
    const double beta = gas.inverse_temperature_beta;
    const double amp = std::sqrt(beta * m / (2.0 * kPi)) / q_mag;
    if (std::holds_alternative<MBExact>(S)) {
        const double u = 2.0 * m * E + q_mag * q_mag;
        return amp * std::exp(-(beta / (8.0 * m)) * u * u / (q_mag * q_mag));
    }
    return amp * std::exp(-beta * q_mag * q_mag / (8.0 * m)) * std::exp(-0.5 * beta * E);
}

double s_eval(const SpectralFunction& S, const Vec3& q, double E) {
    return s_eval(S, q.norm(), E);
}

double detailed_balance_residual(const SpectralFunction& S, double q_mag, double E) {
    const double beta = beta_of(S);
    const double direct = s_eval(S, q_mag, E);
    const double reversed = s_eval(S, q_mag, -E); // |-q| = |q|, isotropy
    return (direct - std::exp(-beta * E) * reversed) / direct;
}

double detailed_balance_residual(const SpectralFunction& S, const Vec3& q, double E) {
    return detailed_balance_residual(S, q.norm(), E);
}

double response_function(const SpectralFunction& S, double q_mag, double E) {
    const double beta = beta_of(S);
    if (E == 0.0 || 1.0 == std::exp(beta * E))
        throw DomainError(
            "response_function: E = 0 is a removable point; use response_derivative_at_zero");
    return kPi * (-std::expm1(beta * E)) * s_eval(S, q_mag, E);
}

double response_derivative_at_zero(const SpectralFunction& S, double q_mag) {
    return -kPi * beta_of(S) * s_eval(S, q_mag, 0.0);
}

namespace {

// Truncation of the E-quadratures: the exact MB kernel is a Gaussian in E
// centred at -q^2/2m with width q/sqrt(beta m); 9.5 widths put the tail
// below 1e-19 of the peak.
double fdt_lower_limit(const GasSpec& gas, double q) {
    const double m = gas.mass_m;
    const double beta = gas.inverse_temperature_beta;
    const double center = -q * q / (2.0 * m);
    const double width = q / std::sqrt(beta * m);
    return center - 9.5 * width;
}

const MBExact& require_mb_exact(const SpectralFunction& S, const char* who) {
    const auto* e = std::get_if<MBExact>(&S);
    if (!e)
        throw DomainError(std::string(who) +
                          ": defined for the exact MB structure factor only "
                          "(the limit form is not integrable over E in (-inf,0])");
    return *e;
}

} // namespace

CorrelationPair fdt_phi(const SpectralFunction& S, double q_mag, double t,
                        const UnitSystem& units, const QuadratureSpec& quad) {
    const MBExact& mb = require_mb_exact(S, "fdt_phi");
    const double beta = mb.gas.inverse_temperature_beta;
    const double h = units.hbar;
    const double lo = fdt_lower_limit(mb.gas, q_mag);

    auto minus_integrand = [&](double E) {
        return std::sin(E * t / h) * (-std::expm1(beta * E)) * s_eval(S, q_mag, E);
    };
    auto plus_integrand = [&](double E) {
        return std::cos(E * t / h) * coth(0.5 * beta * E) * (-std::expm1(beta * E)) *
               s_eval(S, q_mag, E);
    };
    CorrelationPair out;
    out.phi_minus = -(2.0 / h) * integrate(minus_integrand, lo, 0.0, quad).value;
    out.phi_plus = -(2.0 / h) * integrate(plus_integrand, lo, 0.0, quad).value;
    return out;
}

CorrelationPair fdt_phi_via_response(const SpectralFunction& S, double q_mag, double t,
                                     const UnitSystem& units, const QuadratureSpec& quad) {
    const MBExact& mb = require_mb_exact(S, "fdt_phi_via_response");
    const double beta = mb.gas.inverse_temperature_beta;
    const double h = units.hbar;
    const double lo = fdt_lower_limit(mb.gas, q_mag);

    auto minus_integrand = [&](double E) {
        return std::sin(E * t / h) * response_function(S, q_mag, E);
    };
    auto plus_integrand = [&](double E) {
        return std::cos(E * t / h) * coth(0.5 * beta * E) * response_function(S, q_mag, E);
    };
    CorrelationPair out;
    out.phi_minus = -(2.0 / (kPi * h)) * integrate(minus_integrand, lo, 0.0, quad).value;
    out.phi_plus = -(2.0 / (kPi * h)) * integrate(plus_integrand, lo, 0.0, quad).value;
    return out;
}

std::array<SpectralAtom, 2> phonon_spectral(const PhononSpectral& S, double q_mag,
                                            const UnitSystem& units) {
    if (!S.dispersion) throw DomainError("phonon_spectral: empty dispersion");
    const double w = S.dispersion(q_mag);
    if (!(std::isfinite(w) && w > 0.0))
        throw DomainError("phonon_spectral: dispersion must give omega_q > 0");
    const double x = S.inverse_temperature_beta * units.hbar * w;
    if (!(std::isfinite(x) && x > 0.0))
        throw DomainError("phonon_spectral: beta*hbar*omega_q must be > 0");
    const double occupation = 1.0 / std::expm1(x);
    const double e = units.hbar * w;
    return {SpectralAtom{-e, 1.0 + occupation}, SpectralAtom{e, occupation}};
}

namespace {

double born_prefactor(double M, double h) {
    const double a = std::pow(2.0 * kPi * h, 6);
    const double b = M / (2.0 * kPi * h * h);
    return a * b * b;
}

} // namespace

double born_cross_section(const PotentialSpec& potential, const SpectralFunction& S,
                          const Vec3& p, const Vec3& q, double M,
                          const UnitSystem& units) {
    const double pn = p.norm();
    if (!(pn > 0.0)) throw DomainError("born_cross_section: incoming flux undefined at p = 0");
    const double qn = q.norm();
    const double tq = potential_ft(potential, qn, units);
    if (tq == 0.0) return 0.0;
    const double E = energy_transfer(q, p, M);
    const double pprime = (p + q).norm();
    return born_prefactor(M, units.hbar) * (pprime / pn) * tq * tq * s_eval(S, qn, E);
}

CrossSectionResult total_cross_section(const PotentialSpec& potential,
                                       const SpectralFunction& S, const Vec3& p,
                                       double M, const UnitSystem& units,
                                       const QuadratureSpec& quad) {
    const double pn = p.norm();
    if (!(pn > 0.0)) throw DomainError("total_cross_section: incoming flux undefined at p = 0");
    const GasSpec& gas = gas_of(S);
    if (is_zero_potential(potential)) return {0.0, 0.0, 0.0};

    // Momentum-transfer reach: the potential truncates the q integral; a flat
    // (r = 0) potential falls back to the Gaussian decay of S itself.
    double q_hi = potential_support_radius(potential, units);
    if (!std::isfinite(q_hi)) {
        const double m = gas.mass_m;
        const double beta = gas.inverse_temperature_beta;
        q_hi = 2.0 * pn * (m / M) / (1.0 + m / M) + 10.0 * std::sqrt(8.0 * m / beta);
    }

    const double elastic = pn * pn / (2.0 * M);
    const double ep_hi = (pn + q_hi) * (pn + q_hi) / (2.0 * M);

    QuadratureSpec inner = quad;
    inner.abs_tol = 0.0;
    inner.rel_tol = std::max(quad.rel_tol * 0.1, 1e-12);
    inner.max_panels = 400;

    auto outgoing_energy_slice = [&](double ep) {
        const double pprime = std::sqrt(2.0 * M * ep);
        const double qlo = std::abs(pprime - pn);
        const double qhi = std::min(pprime + pn, q_hi);
        if (qhi <= qlo) return 0.0;
        const double E = ep - elastic;
        auto f = [&](double qq) {
            const double tq = potential_ft(potential, qq, units);
            if (tq == 0.0) return 0.0;
            return qq * tq * tq * s_eval(S, qq, E);
        };
        return integrate(f, qlo, qhi, inner).value;
    };

    QuadratureSpec outer = quad;
    outer.abs_tol = 0.0;
    outer.rel_tol = std::max(quad.rel_tol, 1e-12);

    QuadratureResult r = integrate(outgoing_energy_slice, 0.0, ep_hi, outer);
    const double scale = born_prefactor(M, units.hbar) * 2.0 * kPi / (pn * pn);

    CrossSectionResult out;
    out.sigma = scale * r.value;
    out.error_estimate = scale * r.error_estimate;
    out.loss_rate = gas.number_density_n / (2.0 * M) * pn * out.sigma;
    return out;
}

} // namespace qlbe
