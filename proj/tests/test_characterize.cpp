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

#include <json.hpp>

#include "doctest.h"
#include "mcosim/characterize.hpp"
#include "mcosim/engine.hpp"

using namespace mcosim;

namespace {
const double kLn3 = std::log(3.0);
const ThermalContext kCtx(1.0, kLn3);

void check_witness(double p_in, double p_out, const ThermalContext& ctx) {
    const auto c = classify_transition(p_in, p_out, ctx);
    REQUIRE(is_achievable(c));
    const auto proto = synthesize_protocol(c, p_in, p_out, ctx);
    CHECK(validate(proto).ok());
    const auto ev = exact_evaluation(proto, QubitState(p_in));
    CHECK(std::abs(ev.final_state.excited_population() - p_out) <= 1e-12);
    for (const auto& a : ev.work.atoms()) CHECK(a.work >= 0.0);
}
}  // namespace

TEST_CASE("mixing coefficient") {
    CHECK(mixing_coefficient(0.3, 0.3, kCtx) == 0.0);
    CHECK(mixing_coefficient(0.3, 0.25, kCtx) == doctest::Approx(1.0));
    CHECK(mixing_coefficient(0.3, 0.26, kCtx) == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(mixing_coefficient(0.25, 0.25, kCtx) == 1.0);
    CHECK_THROWS_AS(mixing_coefficient(0.3, 0.4, kCtx), std::domain_error);
}

TEST_CASE("classification examples") {
    const auto a6 = classify_transition(0.1, 0.3, kCtx);
    REQUIRE(std::holds_alternative<Forbidden>(a6));
    CHECK(std::get<Forbidden>(a6).bound.regime == Regime::A6);
    CHECK(std::get<Forbidden>(a6).bound.probability > 0.0);
    CHECK(std::holds_alternative<AchievableFromPureExcited>(classify_transition(1.0, 0.05, kCtx)));
    const auto mix = classify_transition(0.3, 0.26, kCtx);
    REQUIRE(std::holds_alternative<AchievableByMixing>(mix));
    CHECK(std::get<AchievableByMixing>(mix).lambda == doctest::Approx(0.8));
    CHECK(std::get<Forbidden>(classify_transition(0.6, 0.125, kCtx)).bound.regime == Regime::A7);
    CHECK(std::get<Forbidden>(classify_transition(0.3, 0.4, kCtx)).bound.regime == Regime::A8);
    CHECK(std::get<Forbidden>(classify_transition(0.2, 0.1, kCtx)).bound.regime == Regime::A8);
    // Boundary p_out = p_beta is mixing from either side.
    CHECK(std::holds_alternative<AchievableByMixing>(classify_transition(0.1, 0.25, kCtx)));
    CHECK(std::holds_alternative<AchievableByMixing>(classify_transition(0.9, 0.25, kCtx)));
    CHECK_THROWS_AS(classify_transition(1.2, 0.3, kCtx), std::domain_error);

    const auto j = nlohmann::json::parse(verdict_to_json(mix));
    CHECK(j["verdict"] == "mixing");
    CHECK(j["lambda"].get<double>() == doctest::Approx(0.8));
    const auto jf = nlohmann::json::parse(verdict_to_json(a6));
    CHECK(jf["verdict"] == "forbidden");
    CHECK(jf["bound"]["regime"] == "A6");
}

TEST_CASE("witness protocols") {
    check_witness(0.3, 0.26, kCtx);
    check_witness(1.0, 0.0, kCtx);
    check_witness(1.0, 0.4, kCtx);
    check_witness(1.0, 0.05, kCtx);
    check_witness(0.05, 0.2, kCtx);

    const auto pure = synthesize_protocol(AchievableFromPureExcited{}, 1.0, 0.0, kCtx);
    const auto ev = exact_evaluation(pure, QubitState(1.0));
    REQUIRE(ev.work.atoms().size() == 1);
    CHECK(ev.work.atoms()[0].work == doctest::Approx(kLn3));
    CHECK(ev.final_state.excited_population() == 0.0);

    const auto up = synthesize_protocol(AchievableFromPureExcited{}, 1.0, 0.4, kCtx);
    REQUIRE(up.size() == 1);
    CHECK(std::get<PartialThermalization>(up.steps()[0]).lambda == doctest::Approx(0.6 / 0.75));
    CHECK_THROWS_AS(synthesize_protocol(classify_transition(0.1, 0.3, kCtx), 0.1, 0.3, kCtx),
                    std::domain_error);
}

TEST_CASE("degenerate boundary energy") {
    const ThermalContext flat(1.0, 0.0);
    const auto c = classify_transition(0.2, 0.7, flat);
    REQUIRE(std::holds_alternative<AchievableBySwap>(c));
    CHECK(std::get<AchievableBySwap>(c).gamma == doctest::Approx(5.0 / 6));
    check_witness(0.2, 0.7, flat);
    check_witness(0.0, 1.0, flat);
    const auto f = classify_transition(0.2, 0.9, flat);
    REQUIRE(std::holds_alternative<Forbidden>(f));
    CHECK(std::get<Forbidden>(f).bound.extrapolated);
}
