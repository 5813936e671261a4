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

#pragma once

#include <string>
#include <variant>

#include "mcosim/bounds.hpp"
#include "mcosim/protocol.hpp"
#include "mcosim/thermo.hpp"

namespace mcosim {

/// sigma = (1 - lambda) rho + lambda tau_beta.
struct AchievableByMixing {
    double lambda;
};

/// rho is the pure excited state; see synthesize_protocol.
struct AchievableFromPureExcited {};

/// Only when e0 = 0: a BT(gamma) at the boundary energy is free, so any
/// p_out between p_in and 1 - p_in is reachable without work.
struct AchievableBySwap {
    double gamma;
};

struct Forbidden {
    NoGoBound bound;
};

using TransitionClassification =
    std::variant<AchievableByMixing, AchievableFromPureExcited, AchievableBySwap, Forbidden>;

bool is_achievable(const TransitionClassification& c);

/// "mixing", "pure_excited", "swap" or "forbidden".
const char* verdict_name(const TransitionClassification& c);

/// lambda = (p_out - p_in) / (p_beta - p_in); 1 when p_in = p_beta = p_out.
/// Throws std::domain_error unless p_out lies between p_in and p_beta.
double mixing_coefficient(double p_in, double p_out, const ThermalContext& ctx);

/// Total over [0, 1]^2 (domain error only for values outside it).
TransitionClassification classify_transition(double p_in, double p_out,
                                             const ThermalContext& ctx);

/// A work-free witness protocol for an achievable classification. Throws
/// std::domain_error for Forbidden.
Protocol synthesize_protocol(const TransitionClassification& c, double p_in, double p_out,
                             const ThermalContext& ctx);

/// {"verdict": ..., "lambda"?, "gamma"?, "bound"?}
std::string verdict_to_json(const TransitionClassification& c, int indent = -1);

}  // namespace mcosim
