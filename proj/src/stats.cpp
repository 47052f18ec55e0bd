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

#include "qlbe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlbe/errors.hpp"

namespace qlbe {

double ks_distance_to_normal(std::vector<double> sample, double mean, double sigma) {
    if (sample.empty()) throw DomainError("ks_distance_to_normal: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double z = (sample[i] - mean) / (sigma * std::numbers::sqrt2);
        const double cdf = 0.5 * std::erfc(-z);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::abs(cdf - lo), std::abs(cdf - hi)));
    }
    return d;
}

double chi_square_pvalue(double x, int dof) {
    if (dof < 1) throw DomainError("chi_square_pvalue: dof must be >= 1");
    if (x <= 0.0) return 1.0;
    const double half_x = 0.5 * x;
    // Q(a, half_x) with a = dof/2, by upward recurrence
    //   Q(a+1, y) = Q(a, y) + y^a e^(-y) / Gamma(a+1)
    double a, q;
    if (dof % 2 == 0) {
        a = 1.0;
        q = std::exp(-half_x);
    } else {
        a = 0.5;
        q = std::erfc(std::sqrt(half_x));
    }
    while (a < 0.5 * dof - 0.25) {
        q += std::exp(a * std::log(half_x) - half_x - std::lgamma(a + 1.0));
        a += 1.0;
    }
    return std::min(1.0, q);
}

double fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2)
        throw DomainError("fit_exponential_decay: need matching samples (>= 2)");
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    const double n = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(y[i] > 0.0))
            throw NumericError("fit_exponential_decay: non-positive mean at t = " +
                               std::to_string(t[i]) + " (non-exponential regime)");
        const double l = std::log(y[i]);
        st += t[i];
        sl += l;
        stt += t[i] * t[i];
        stl += t[i] * l;
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw NumericError("fit_exponential_decay: degenerate time grid");
    const double slope = (n * stl - st * sl) / denom;
    return -slope;
}

} // namespace qlbe
