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

#include "mcosim/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace mcosim {
namespace {

bool swap_is_free(const ThermalContext& ctx) { return ctx.e0() <= kEnergyTolerance; }

bool between(double x, double a, double b) {
    return std::min(a, b) <= x && x <= std::max(a, b);
}

}  // namespace

bool is_achievable(const TransitionClassification& c) {
    return !std::holds_alternative<Forbidden>(c);
}

const char* verdict_name(const TransitionClassification& c) {
    static constexpr const char* kNames[] = {"mixing", "pure_excited", "swap", "forbidden"};
    return kNames[c.index()];
}

double mixing_coefficient(double p_in, double p_out, const ThermalContext& ctx) {
    const double pb = ctx.p_beta();
    if (!between(p_out, p_in, pb)) {
        throw std::domain_error("p_out must lie between p_in and p_beta");
    }
    if (p_in == pb) return 1.0;
    return std::clamp((p_out - p_in) / (pb - p_in), 0.0, 1.0);
}

TransitionClassification classify_transition(double p_in, double p_out, const ThermalContext& ctx) {
    if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
        throw std::domain_error("populations must lie in [0, 1]");
    }
    const double pb = ctx.p_beta();
    if (p_in == 1.0) return AchievableFromPureExcited{};
    if (between(p_out, p_in, pb)) return AchievableByMixing{mixing_coefficient(p_in, p_out, ctx)};
    if (swap_is_free(ctx) && between(p_out, p_in, 1.0 - p_in)) {
        // p_in != 1/2 here, otherwise the mixing interval would have matched.
        return AchievableBySwap{std::clamp((p_out - p_in) / (1.0 - 2.0 * p_in), 0.0, 1.0)};
    }
    auto bound = no_go_bound_unchecked(p_in, p_out, ctx);
    if (swap_is_free(ctx)) bound.extrapolated = true;
    return Forbidden{bound};
}

Protocol synthesize_protocol(const TransitionClassification& c, double p_in, double p_out,
                             const ThermalContext& ctx) {
    (void)p_in;
    const double pb = ctx.p_beta();
    if (const auto* mix = std::get_if<AchievableByMixing>(&c)) {
        return Protocol(ctx, {PartialThermalization(mix->lambda)});
    }
    if (const auto* sw = std::get_if<AchievableBySwap>(&c)) {
        return Protocol(ctx, {BistochasticTransformation(sw->gamma)});
    }
    if (std::holds_alternative<AchievableFromPureExcited>(c)) {
        if (p_out >= pb) {
            // Mix (0, 1) toward tau_beta directly.
            return Protocol(ctx, {PartialThermalization(std::clamp((1.0 - p_out) / (1.0 - pb), 0.0, 1.0))});
        }
        auto steps = build_pure_excited_reset(ctx).steps();
        steps.emplace_back(PartialThermalization(mixing_coefficient(0.0, p_out, ctx)));
        return Protocol(ctx, std::move(steps));
    }
    throw std::domain_error("a forbidden transition has no work-free protocol");
}

std::string verdict_to_json(const TransitionClassification& c, int indent) {
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(c);
    if (const auto* mix = std::get_if<AchievableByMixing>(&c)) j["lambda"] = mix->lambda;
    if (const auto* sw = std::get_if<AchievableBySwap>(&c)) j["gamma"] = sw->gamma;
    if (const auto* f = std::get_if<Forbidden>(&c)) {
        j["bound"] = nlohmann::ordered_json::parse(bound_to_json(f->bound));
    }
    return j.dump(indent);
}

}  // namespace mcosim
