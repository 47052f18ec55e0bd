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
#include <numbers>

#include <doctest.h>

#include "qlbe/physcore.hpp"

using namespace qlbe;

TEST_CASE("validation accepts positive specs and names violated fields") {
    CHECK(!validate(GasSpec{1.0, 1.0, 1.0}));
    const auto err = validate(GasSpec{-1.0, 1.0, 1.0});
    REQUIRE(err.has_value());
    CHECK(err->find("mass_m") != std::string::npos);

    CHECK(validate(GasSpec{1.0, 0.0, 1.0}).has_value());
    CHECK(validate(ParticleSpec{-2.0}).has_value());
    CHECK(!validate(ParticleSpec{2.0}));
    CHECK(validate(UnitSystem{0.0}).has_value());
    CHECK(!validate(UnitSystem{}));

    TabulatedPotential bad;
    bad.q = {0.0, 2.0, 1.0};
    bad.value = {1.0, 0.5, 0.2};
    const auto terr = validate(PotentialSpec{bad});
    REQUIRE(terr.has_value());
    CHECK(terr->find("ordering") != std::string::npos);
    CHECK_THROWS_AS(require_valid(PotentialSpec{bad}), ValidationError);
}

TEST_CASE("gaussian fourier transform value at q = 0") {
    const PotentialSpec pot = GaussianFourierPotential{1.0, 1.0};
    const UnitSystem units;
    const double expected = 1.0 / std::pow(2.0 * std::numbers::pi, 3);
    CHECK(potential_ft(pot, 0.0, units) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(potential_ft(pot, 0.0, units) == doctest::Approx(4.0314e-3).epsilon(1e-4));
}

TEST_CASE("zero-range potential is flat") {
    const PotentialSpec pot = GaussianFourierPotential{1.0, 0.0};
    const UnitSystem units;
    const double at0 = potential_ft(pot, 0.0, units);
    for (double q : {0.5, 3.0, 40.0}) CHECK(potential_ft(pot, q, units) == at0);
}

TEST_CASE("tabulated interpolation and zero extrapolation") {
    TabulatedPotential tab;
    tab.q = {0.0, 2.0};
    tab.value = {1.0, 0.0};
    const PotentialSpec pot = tab;
    const UnitSystem units;
    CHECK(potential_ft(pot, 1.0, units) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(potential_ft(pot, 3.0, units) == 0.0);
    CHECK(potential_ft(pot, 0.0, units) == 1.0);
    CHECK(potential_ft(pot, 2.0, units) == 0.0);
}

TEST_CASE("gaussian form is monotone non-increasing and strictly positive") {
    const PotentialSpec pot = GaussianFourierPotential{2.5, 0.7};
    const UnitSystem units;
    double prev = potential_ft(pot, 0.0, units);
    for (int i = 1; i <= 200; ++i) {
        const double q = 0.05 * i;
        const double v = potential_ft(pot, q, units);
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("evaluation is pure") {
    const PotentialSpec pot = GaussianFourierPotential{1.3, 1.1};
    const UnitSystem units{0.8};
    CHECK(potential_ft(pot, 1.7, units) == potential_ft(pot, 1.7, units));
}

TEST_CASE("zero potential detection") {
    CHECK(is_zero_potential(GaussianFourierPotential{0.0, 1.0}));
    CHECK(!is_zero_potential(GaussianFourierPotential{1.0, 1.0}));
    TabulatedPotential z;
    z.q = {0.0, 1.0};
    z.value = {0.0, 0.0};
    CHECK(is_zero_potential(PotentialSpec{z}));
}
