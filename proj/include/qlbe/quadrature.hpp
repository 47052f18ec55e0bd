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

#ifndef QLBE_QUADRATURE_HPP
#define QLBE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "qlbe/errors.hpp"

namespace qlbe {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_panels = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair on [-1,1].
// Abscissae and weights as in QUADPACK's dqk15.
inline constexpr double kGK15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0000000000000000};
inline constexpr double kGK15KronrodW[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kGK15GaussW[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gk15_panel(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    double fval[15];
    const double fc = f(mid);
    double resg = kGK15GaussW[3] * fc;
    double resk = kGK15KronrodW[7] * fc;
    double resabs = std::abs(resk);
    fval[14] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kGK15Nodes[j];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        fval[2 * j] = f1;
        fval[2 * j + 1] = f2;
        const double sum = f1 + f2;
        resk += kGK15KronrodW[j] * sum;
        resabs += kGK15KronrodW[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kGK15GaussW[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kGK15KronrodW[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kGK15KronrodW[j] *
                  (std::abs(fval[2 * j] - reskh) + std::abs(fval[2 * j + 1] - reskh));
    }
    resasc *= std::abs(half);
    resabs *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    err = std::max(err, round_floor);

    return Panel{a, b, resk * half, err};
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a,b]. Panels are bisected
/// worst-error-first until sum(err) <= max(abs_tol, rel_tol*|value|); failing
/// that within spec.max_panels panels raises NumericError with diagnostics.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (a == b) return {0.0, 0.0, 0};
    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gk15_panel(f, a, b));
    double total = panels.top().value;
    double total_err = panels.top().error;
    int count = 1;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (count >= spec.max_panels) {
            std::ostringstream os;
            os << "quadrature did not converge on [" << a << ", " << b << "]: "
               << count << " panels, error estimate " << total_err
               << ", value " << total << ", abs_tol " << spec.abs_tol
               << ", rel_tol " << spec.rel_tol;
            throw NumericError(os.str());
        }
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating-point resolution; accept its estimate
            panels.push(detail::Panel{worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.error;
            continue;
        }
        detail::Panel left = detail::gk15_panel(f, worst.a, mid);
        detail::Panel right = detail::gk15_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }
    return {total, total_err, count};
}

/// Same, but with forced breakpoints (e.g. knots of a tabulated potential).
template <typename F>
QuadratureResult integrate_segments(F&& f, const std::vector<double>& breaks,
                                    const QuadratureSpec& spec = {}) {
    QuadratureResult out;
    if (breaks.size() < 2) return out;
    QuadratureSpec per = spec;
    per.abs_tol = spec.abs_tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        QuadratureResult r = integrate(f, breaks[i], breaks[i + 1], per);
        out.value += r.value;
        out.error_estimate += r.error_estimate;
        out.panels += r.panels;
    }
    return out;
}

/// Smallest q beyond which |f| stays below peak*cutoff, searched on
/// a uniform scan grid out to hard_max and then bracket-refined. Used to
/// truncate radial integrands that decay like Gaussians.
template <typename F>
double truncation_point(F&& f, double hard_max, double cutoff = 1e-18, int scan = 2048) {
    double peak = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double q = hard_max * static_cast<double>(i) / scan;
        peak = std::max(peak, std::abs(f(q)));
    }
    if (peak == 0.0) return hard_max;
    const double floor = peak * cutoff;
    for (int i = scan; i >= 1; --i) {
        const double q = hard_max * static_cast<double>(i) / scan;
        if (std::abs(f(q)) > floor) {
            return hard_max * static_cast<double>(std::min(i + 1, scan)) / scan;
        }
    }
    return hard_max;
}

} // namespace qlbe

#endif
