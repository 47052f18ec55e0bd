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

#ifndef QLBE_STATS_HPP
#define QLBE_STATS_HPP

#include <vector>

namespace qlbe {

/// Kolmogorov-Smirnov distance of a sample to the normal CDF with the given
/// mean and standard deviation.
double ks_distance_to_normal(std::vector<double> sample, double mean, double sigma);

/// Upper tail P(chi2_dof > x), via the half-integer incomplete-gamma
/// recurrence (exact closed forms, no series truncation).
double chi_square_pvalue(double x, int dof);

/// Least-squares exponential decay rate: fits ln(y) = ln(y0) - rate*t and
/// returns rate. Throws NumericError when any y <= 0 (non-exponential regime).
double fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y);

} // namespace qlbe

#endif
