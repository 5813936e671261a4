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

#include <json.hpp>

#include "doctest.h"
#include "mcosim/bounds.hpp"
#include "mcosim/paths.hpp"

using namespace mcosim;

namespace {
const double kLn3 = std::log(3.0);
const ThermalContext kCtx(1.0, kLn3);  // p_beta = 1/4

// Binomial tail from log-gamma terms; shares nothing with the Pascal sum.
double lgamma_tail(int n, double p) {
    long double s = 0;
    for (int k = (n + 1) / 2; k <= n; ++k) {
        const long double lc = std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
        s += std::exp(lc + k * std::log((long double)p) + (n - k) * std::log1p(-(long double)p));
    }
    return static_cast<double>(s);
}
}  // namespace

TEST_CASE("simple case lemma") {
    const auto b = lemma_simplecase_bound(0.1, 0.3, kCtx);
    CHECK(b.probability == doctest::Approx(0.03 * (1 - std::exp(-0.08))).epsilon(1e-13));
    CHECK(b.probability == doctest::Approx(2.3066e-3).epsilon(1e-4));
    CHECK(b.threshold == doctest::Approx((std::log(9.0) - std::log(7.0 / 3.0)) / 2).epsilon(1e-14));
    CHECK(b.threshold == doctest::Approx(0.6750).epsilon(1e-4));
    CHECK(lemma_simplecase_bound(0.1, 0.5 - 1e-9, kCtx).probability < 1e-18);
    CHECK_THROWS_AS(lemma_simplecase_bound(0.1, 0.5, kCtx), std::domain_error);
    CHECK_THROWS_AS(lemma_simplecase_bound(0.3, 0.2, kCtx), std::domain_error);
}

TEST_CASE("hoeffding and binomial tails") {
    CHECK(hoeffding_tail(1, 0.25) == doctest::Approx(std::exp(-0.125)).epsilon(1e-15));
    CHECK(hoeffding_tail(1, 0.25) == doctest::Approx(0.8825).epsilon(1e-4));
    CHECK(binomial_upper_tail(1, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(binomial_upper_tail(100, 0.3) <= std::exp(-8.0));
    CHECK(hoeffding_tail(1, 0.5 - 1e-12) == doctest::Approx(1.0));
    CHECK_THROWS_AS(hoeffding_tail(3, 0.5), std::domain_error);
    for (int n : {1, 2, 7, 50, 199, 200}) {
        for (double p : {0.05, 0.2, 0.45}) {
            CHECK(binomial_upper_tail(n, p) == doctest::Approx(lgamma_tail(n, p)).epsilon(1e-10));
        }
    }
}

TEST_CASE("lemma w2 probability") {
    CHECK(lemma_w2_probability(4.0, kCtx) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lemma_w2_probability(INFINITY, kCtx) == doctest::Approx(2.0 / 3.0));
    CHECK(lemma_w2_probability(1e6, kCtx) == doctest::Approx(2.0 / 3.0));
    CHECK(lemma_w2_probability(1e-12, kCtx) < 1e-12);
    CHECK_THROWS_AS(lemma_w2_probability(0.0, kCtx), std::domain_error);
    double prev = 0;
    for (double e = 0.01; e < 20; e += 0.01) {
        const double p = lemma_w2_probability(e, kCtx);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("path lemma") {
    const auto b = lemma_path_bound(0.125, 0.5, kCtx);
    const double ln2 = std::log(2.0);
    CHECK(b.threshold == doctest::Approx(ln2 / 2).epsilon(1e-14));
    CHECK(b.probability == doctest::Approx(0.125 * (ln2 / (8 + ln2)) * 0.5).epsilon(1e-13));
    // Quoted elsewhere as 0.079724; the exact value is 0.0797349.
    CHECK(ln2 / (8 + ln2) == doctest::Approx(0.079724).epsilon(2e-4));
    CHECK(b.probability == doctest::Approx(4.983e-3).epsilon(1e-3));
    const auto near = lemma_path_bound(0.125, 0.25 + 1e-9, kCtx);
    // The margin vanishes linearly at p_beta.
    CHECK(near.threshold < 1e-8);
    CHECK(near.probability < 1e-10);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> pin(1e-6, 0.25), qout(0.25 + 1e-9, 0.5);
    for (int i = 0; i < 500; ++i) {
        const double a = pin(rng), q = qout(rng);
        CHECK(lemma_path_bound(a, q, kCtx).probability <= a * q);
    }
    CHECK_THROWS_AS(lemma_path_bound(0.3, 0.4, kCtx), std::domain_error);
}

TEST_CASE("main theorem") {
    const auto b = theorem_main_bound(0.125, 0.375, kCtx);
    const double q = 5.0 / 16;
    const double eps = epsilon_iii(q, kCtx);
    // At beta = 1, p_beta = 1/4 the margin reduces to ln(4q).
    CHECK(eps == doctest::Approx(std::log(4 * q)).epsilon(1e-14));
    CHECK(b.threshold == doctest::Approx(eps / 2).epsilon(1e-15));
    CHECK(b.p1 == 0.125);
    CHECK(b.p3 == doctest::Approx(q));
    CHECK(b.pf == doctest::Approx(1.0 / 16));
    CHECK(b.probability ==
          doctest::Approx(0.125 * std::min(2.0 / 3, eps / (8 + eps)) * q * (1.0 / 16)).epsilon(1e-13));
    CHECK(b.regime == Regime::A6);
    CHECK(theorem_main_bound(0.125, 0.375, kCtx).probability ==
          2 * theorem_main_bound(0.0625, 0.375, kCtx).probability);
    const auto tiny = theorem_main_bound(0.125, 0.25 + 1e-10, kCtx);
    CHECK(tiny.threshold < 1e-9);
    CHECK(tiny.probability < 1e-12);
    CHECK_THROWS_AS(theorem_main_bound(0.125, 0.6, kCtx), std::domain_error);
    CHECK_THROWS_AS(theorem_main_bound(0.0, 0.4, kCtx), std::domain_error);

    const auto json = nlohmann::json::parse(bound_to_json(b));
    CHECK(json["regime"] == "A6");
    CHECK(json["components"]["pf"].get<double>() == b.pf);
}

TEST_CASE("reverse theorem") {
    const auto b = theorem_rev_bound(0.6, 0.125, kCtx);
    CHECK(b.p1 == doctest::Approx(0.4));
    CHECK(b.pf == doctest::Approx(1.0 / 16));
    CHECK(b.p3 == doctest::Approx(13.0 / 16));
    const double eps = epsilon_iii_tilde(3.0 / 16, kCtx);
    CHECK(b.threshold == doctest::Approx(eps / 2));
    CHECK(b.probability > 0.0);
    const auto tiny = theorem_rev_bound(0.6, 0.25 - 1e-10, kCtx);
    CHECK(tiny.threshold < 1e-9);
    CHECK(tiny.probability < 1e-12);
    CHECK_THROWS_AS(theorem_rev_bound(1.0, 0.1, kCtx), std::domain_error);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> pin(0.2500001, 0.999999), pout(1e-6, 0.2499999);
    for (int i = 0; i < 500; ++i) {
        CHECK(theorem_rev_bound(pin(rng), pout(rng), kCtx).probability > 0.0);
    }
}

TEST_CASE("same side theorem") {
    const auto up = theorem_same_side(0.3, 0.4, kCtx);
    CHECK(up.threshold > 0.0);
    CHECK(up.probability > 0.0);
    CHECK(up.regime == Regime::A8);
    const auto down = theorem_same_side(0.2, 0.1, kCtx);
    CHECK(down.threshold > 0.0);
    CHECK(down.probability > 0.0);
    CHECK_THROWS_AS(theorem_same_side(0.3, 0.3, kCtx), std::domain_error);
    CHECK_THROWS_AS(theorem_same_side(0.3, 0.26, kCtx), std::domain_error);
    CHECK(nlohmann::json::parse(bound_to_json(up))["note"] == "constructive instantiation");

    const auto far = no_go_bound_unchecked(0.3, 0.9, kCtx);
    CHECK(far.extrapolated);
    CHECK(far.probability > 0.0);
    CHECK_FALSE(no_go_bound_unchecked(0.1, 0.3, kCtx).extrapolated);
}

TEST_CASE("reverse markov and cantelli") {
    CHECK(reverse_markov_lower(0.4, 0.4).upper_tail == 0.0);
    const auto r = reverse_markov_lower(0.3, 0.5);
    CHECK(r.upper_tail == 0.0);
    CHECK(r.upper_clamped);
    const auto s = reverse_markov_lower(0.375, 5.0 / 16);
    CHECK(s.upper_tail == doctest::Approx(1.0 / 11).epsilon(1e-14));
    CHECK(s.upper_tail >= 1.0 / 16);
    CHECK_THROWS_AS(reverse_markov_lower(0.3, 1.0), std::domain_error);
    CHECK(cantelli_lower(1.0, 0.0) == 1.0);
    CHECK(cantelli_lower(2.0, 4.0) == 0.5);
    CHECK_THROWS_AS(cantelli_lower(0.0, 1.0), std::domain_error);
}
