// Copyright 2026 The mcosim Authors
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
#include <stdexcept>

#include "doctest.h"
#include "mcosim/thermo.hpp"
#include "oracles.hpp"

using namespace mcosim;

namespace {
const double kLn3 = std::log(3.0);
}

TEST_CASE("context validation") {
    CHECK_THROWS_AS(ThermalContext(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ThermalContext(1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(ThermalContext(NAN, 1.0), std::domain_error);
    CHECK(ThermalContext(1.0, kLn3).p_beta() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ThermalContext(2.0, 0.0).p_beta() == 0.5);
    const auto ctx = ThermalContext::from_gibbs_population(1.0, 0.25);
    CHECK(ctx.e0() == doctest::Approx(kLn3).epsilon(1e-14));
    CHECK_THROWS_AS(ThermalContext::from_gibbs_population(1.0, 0.6), std::domain_error);
    CHECK_THROWS_AS(QubitState(1.5), std::domain_error);
}

TEST_CASE("gibbs population") {
    const ThermalContext ctx(1.0, kLn3);
    CHECK(gibbs_population(0.0, ctx) == 0.5);
    CHECK(gibbs_population(kLn3, ctx) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(gibbs_population(50.0, ctx) < 1e-20);
    CHECK(gibbs_population(50.0, ctx) > 0.0);
    CHECK_THROWS_AS(gibbs_population(INFINITY, ctx), std::domain_error);
    // Strictly decreasing with the right range on each side of 0.
    double prev = 1.0;
    for (double e = -30; e <= 30; e += 0.25) {
        const double g = gibbs_population(e, ctx);
        CHECK(g < prev);
        CHECK(g > 0.0);
        CHECK(g < 1.0);
        if (e > 0) CHECK(g < 0.5);
        if (e < 0) CHECK(g > 0.5);
        prev = g;
    }
}

TEST_CASE("energy of population round trip") {
    const ThermalContext ctx(1.0, kLn3);
    CHECK(energy_of_population(0.5, ctx) == 0.0);
    CHECK(energy_of_population(0.25, ctx) == doctest::Approx(1.0986123).epsilon(1e-7));
    CHECK_THROWS_AS(energy_of_population(0.0, ctx), std::domain_error);
    CHECK_THROWS_AS(energy_of_population(1.0, ctx), std::domain_error);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1e-6, 1 - 1e-6);
    std::uniform_real_distribution<double> ub(0.2, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const ThermalContext c(ub(rng), 0.3);
        const double p = u(rng);
        CHECK(std::abs(gibbs_population(energy_of_population(p, c), c) - p) <= 1e-12 * p);
    }
}

TEST_CASE("partition function") {
    const ThermalContext ctx(1.0, kLn3);
    CHECK(partition_function(0.0, ctx) == 2.0);
    CHECK(partition_function(kLn3, ctx) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ue(-10, 10);
    for (int i = 0; i < 200; ++i) {
        const double e = ue(rng);
        CHECK(partition_function(e, ctx) * gibbs_population(e, ctx) ==
              doctest::Approx(std::exp(-e)).epsilon(1e-13));
        if (e > 0) CHECK(partition_function(e, ctx) > 1.0);
    }
}

TEST_CASE("entropy and free energies") {
    const ThermalContext ctx(1.0, kLn3);
    CHECK(entropy(QubitState(0.0)) == 0.0);
    CHECK(entropy(QubitState(1.0)) == 0.0);
    CHECK(entropy(QubitState(0.5)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // -sum p ln p evaluated by hand.
    const double s25 = 0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0);
    CHECK(entropy(QubitState(0.25)) == doctest::Approx(s25).epsilon(1e-14));
    CHECK(s25 == doctest::Approx(0.5623).epsilon(1e-4));

    CHECK(free_energy(QubitState(0.0), 3.7, ctx) == 0.0);
    CHECK(free_energy(QubitState(0.25), kLn3, ctx) ==
          doctest::Approx(0.25 * kLn3 - s25).epsilon(1e-14));
    CHECK(free_energy(QubitState(0.25), kLn3, ctx) == doctest::Approx(-0.2877).epsilon(1e-4));
    CHECK(gibbs_free_energy(0.0, ctx) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(gibbs_free_energy(kLn3, ctx) == doctest::Approx(-std::log(4.0 / 3.0)).epsilon(1e-14));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ue(-20, 20);
    std::uniform_real_distribution<double> ub(0.3, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const ThermalContext c(ub(rng), 0.0);
        const double e = ue(rng) / c.beta();
        const QubitState tau(gibbs_population(e, c));
        CHECK(std::abs(free_energy(tau, e, c) - gibbs_free_energy(e, c)) <= 1e-12);
        CHECK(std::abs(gibbs_free_energy(e, c) + std::log1p(std::exp(-c.beta() * e)) / c.beta()) <=
              1e-12 * (1 + std::abs(e)));
    }
}

TEST_CASE("free energy derivative is the gibbs population") {
    const ThermalContext ctx(1.3, 0.0);
    const double h = 1e-5;
    for (double e = -8; e <= 8; e += 0.37) {
        const double d = (gibbs_free_energy(e + h, ctx) - gibbs_free_energy(e - h, ctx)) / (2 * h);
        CHECK(std::abs(d - gibbs_population(e, ctx)) <= 1e-6);
    }
}

TEST_CASE("gibbs integral") {
    const ThermalContext ctx(1.0, kLn3);
    CHECK(gibbs_integral(1.2, 1.2, ctx) == 0.0);
    CHECK(gibbs_integral(0.0, kLn3, ctx) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
    CHECK(std::log(1.5) == doctest::Approx(0.4055).epsilon(1e-4));
    const double quad = oracle::simpson([](double e) { return oracle::logistic_gibbs(1.0, e); },
                                        0.0, kLn3, 1e-13);
    CHECK(std::abs(quad - std::log(1.5)) <= 1e-10);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ub(0.5, 2.0);
    std::uniform_real_distribution<double> ux(-20, 20);
    for (int i = 0; i < 200; ++i) {
        const ThermalContext c(ub(rng), 0.0);
        const double a = ux(rng) / c.beta();
        const double b = ux(rng) / c.beta();
        const double m = ux(rng) / c.beta();
        const double beta = c.beta();
        const double q = oracle::simpson(
            [beta](double e) { return oracle::logistic_gibbs(beta, e); }, a, b, 1e-12);
        CHECK(std::abs(gibbs_integral(a, b, c) - q) <= 1e-9);
        CHECK(gibbs_integral(a, b, c) == doctest::Approx(-gibbs_integral(b, a, c)).epsilon(1e-14));
        CHECK(std::abs(gibbs_integral(a, m, c) + gibbs_integral(m, b, c) - gibbs_integral(a, b, c)) <=
              1e-11);
        CHECK(std::abs(gibbs_integral(a, b, c) -
                       (gibbs_free_energy(b, c) - gibbs_free_energy(a, c))) <= 1e-11);
    }
}
