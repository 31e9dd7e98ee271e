// dris c++ library for double-RIS MIMO channel simulation and optimization
// Copyright (C) 2026 The dris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dris/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dris;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("reference layout 100/200/2")
{
    const ScenarioLayout s = build_scenario(100.0, 200.0, 2.0);

    CHECK(s.h1.aoa_az == doctest::Approx(pi / 4.0).epsilon(1e-15));
    CHECK(s.h1.aoa_el == 0.0);
    CHECK(s.h1.aod_az == doctest::Approx(pi / 2.0).epsilon(1e-15));

    CHECK(s.h1.distance == 100.0);
    CHECK(s.d.distance == 200.0);
    CHECK(s.h2.distance == doctest::Approx(std::sqrt(100.0 * 100.0 + 200.0 * 200.0))
                               .epsilon(1e-14));
    CHECK(s.h2.distance == doctest::Approx(223.6068).epsilon(1e-6));
    CHECK(s.g1.distance ==
          doctest::Approx(std::sqrt(100.0 * 100.0 + 200.0 * 200.0 + 4.0)).epsilon(1e-14));
    CHECK(s.g2.distance == doctest::Approx(std::sqrt(100.0 * 100.0 + 4.0)).epsilon(1e-14));

    CHECK(s.h2.aoa_az ==
          doctest::Approx(pi / 4.0 - std::atan(2.0)).epsilon(1e-15));
    CHECK(s.g1.aod_el ==
          doctest::Approx(std::atan(2.0 / std::sqrt(50000.0))).epsilon(1e-15));
    CHECK(s.g2.aod_el == doctest::Approx(std::atan(0.02)).epsilon(1e-15));
    CHECK(s.g2.aoa_az == 0.0);
    CHECK(s.d.aoa_az == doctest::Approx(pi / 4.0).epsilon(1e-15));
    CHECK(s.d.aod_az == doctest::Approx(pi / 4.0).epsilon(1e-15));
}

TEST_CASE("equal arms put the second panel broadside")
{
    const ScenarioLayout s = build_scenario(50.0, 50.0, 1.0);
    CHECK(s.h2.aoa_az == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("distance identities hold for random layouts")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(1.0, 500.0);
    for (int i = 0; i < 200; ++i) {
        const double d1 = dist(gen), d2 = dist(gen), dh = dist(gen) / 50.0;
        const ScenarioLayout s = build_scenario(d1, d2, dh);
        CHECK(s.h1.distance == d1);
        CHECK(s.d.distance == d2);
        CHECK(s.h2.distance == doctest::Approx(std::sqrt(d1 * d1 + d2 * d2)).epsilon(1e-14));
        CHECK(s.g1.distance ==
              doctest::Approx(std::sqrt(d1 * d1 + d2 * d2 + dh * dh)).epsilon(1e-14));
        CHECK(s.g2.distance == doctest::Approx(std::sqrt(d1 * d1 + dh * dh)).epsilon(1e-14));
        for (const LinkGeometry *lg : {&s.h1, &s.h2, &s.g1, &s.g2, &s.d}) {
            CHECK(lg->distance > 0.0);
            for (double a : {lg->aoa_az, lg->aoa_el, lg->aod_az, lg->aod_el}) {
                CHECK(a > -pi);
                CHECK(a <= pi);
            }
        }
    }
}

TEST_CASE("coplanar layout zeroes the elevations")
{
    const ScenarioLayout s = build_scenario(10.0, 20.0, 0.0);
    CHECK(s.g1.aod_el == 0.0);
    CHECK(s.g2.aod_el == 0.0);
}

TEST_CASE("invalid inputs are rejected")
{
    CHECK_THROWS_AS(build_scenario(0.0, 10.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(build_scenario(10.0, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(build_scenario(10.0, 10.0, -0.5), std::domain_error);
}

TEST_CASE("build_scenario is deterministic")
{
    const ScenarioLayout a = build_scenario(123.0, 45.0, 1.5);
    const ScenarioLayout b = build_scenario(123.0, 45.0, 1.5);
    CHECK(a.h2.aoa_az == b.h2.aoa_az);
    CHECK(a.g1.distance == b.g1.distance);
    CHECK(a.g2.aod_el == b.g2.aod_el);
}

TEST_CASE("pathloss reference values")
{
    CHECK(pathloss_db(100.0) == doctest::Approx(79.6).epsilon(1e-13));
    CHECK(pathloss_db(1.0) == doctest::Approx(35.6).epsilon(1e-13));
    // 35.6 + 22 log10(sqrt(100^2 + 200^2)), evaluated independently.
    const double expected = 35.6 + 22.0 * std::log10(223.6068);
    CHECK(expected == doctest::Approx(87.288670).epsilon(1e-8));
    CHECK(pathloss_db(223.6068) == doctest::Approx(expected).epsilon(1e-15));

    CHECK(pathloss_linear(1.0) == doctest::Approx(2.7542e-4).epsilon(1e-4));
    CHECK(pathloss_linear(100.0) == doctest::Approx(1.0965e-8).epsilon(1e-4));
}

TEST_CASE("pathloss properties")
{
    CHECK(pathloss_linear(200.0) < pathloss_linear(100.0));
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dist(1.0, 1000.0);
    for (int i = 0; i < 100; ++i) {
        const double d = dist(gen);
        CHECK(pathloss_db(10.0 * d) - pathloss_db(d) == doctest::Approx(22.0).epsilon(1e-12));
        CHECK(pathloss_linear(d * 1.01) < pathloss_linear(d));
    }
    CHECK_THROWS_AS(pathloss_db(0.5), std::domain_error);
    CHECK_THROWS_AS(pathloss_linear(0.99), std::domain_error);
}

TEST_SUITE_END();
