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

#include <cmath>
#include <random>

#include <doctest.h>

#include "qlbe/stats.hpp"
#include "qlbe/errors.hpp"

using namespace qlbe;

TEST_CASE("ks distance accepts true normal samples and flags shifted ones") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(0.0, 2.0);
    std::vector<double> sample(5000);
    for (double& v : sample) v = normal(rng);
    CHECK(ks_distance_to_normal(sample, 0.0, 2.0) < 3.0 / std::sqrt(5000.0));
    CHECK(ks_distance_to_normal(sample, 1.5, 2.0) > 0.2);
}

TEST_CASE("chi-square upper tail matches reference values") {
    // reference values from an independent implementation of the chi-square
    // survival function
    CHECK(chi_square_pvalue(2.0, 2) == doctest::Approx(0.36787944117144245).epsilon(1e-12));
    CHECK(chi_square_pvalue(1.0, 1) == doctest::Approx(0.31731050786291115).epsilon(1e-12));
    CHECK(chi_square_pvalue(5.0, 5) == doctest::Approx(0.4158801869955079).epsilon(1e-12));
    CHECK(chi_square_pvalue(30.0, 20) == doctest::Approx(0.06985366069940986).epsilon(1e-12));
    CHECK(chi_square_pvalue(123.4, 99) ==
          doctest::Approx(0.048902311511807336).epsilon(1e-11));
    CHECK(chi_square_pvalue(0.0, 3) == 1.0);
}

TEST_CASE("exponential decay fit recovers the rate") {
    std::vector<double> t, y;
    for (int i = 0; i <= 20; ++i) {
        t.push_back(0.25 * i);
        y.push_back(3.0 * std::exp(-0.7 * 0.25 * i));
    }
    CHECK(fit_exponential_decay(t, y) == doctest::Approx(0.7).epsilon(1e-12));
    y[4] = -1.0;
    CHECK_THROWS_AS(fit_exponential_decay(t, y), NumericError);
}
