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

#include "mcosim/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcosim {
namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(what) + " must be finite");
    }
}

// ln(1 + e^x) without overflow.
double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logistic_of_minus(double x) {
    // 1 / (1 + e^x)
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

}  // namespace

ThermalContext::ThermalContext(double beta, double e0) : beta_(beta), e0_(e0) {
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw std::domain_error("beta must be finite and > 0");
    }
    if (!std::isfinite(e0) || e0 < 0.0) {
        throw std::domain_error("e0 must be finite and >= 0");
    }
    p_beta_ = logistic_of_minus(beta_ * e0_);
}

ThermalContext ThermalContext::from_gibbs_population(double beta, double p_beta) {
    if (!(p_beta > 0.0 && p_beta <= 0.5)) {
        throw std::domain_error("p_beta must lie in (0, 1/2]");
    }
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw std::domain_error("beta must be finite and > 0");
    }
    const double e0 = p_beta == 0.5 ? 0.0 : (std::log1p(-p_beta) - std::log(p_beta)) / beta;
    return ThermalContext(beta, std::max(e0, 0.0));
}

QubitState::QubitState(double p_excited) : p_(p_excited) {
    if (!(p_excited >= 0.0 && p_excited <= 1.0)) {
        throw std::domain_error("excited population must lie in [0, 1]");
    }
}

double gibbs_population(double energy, const ThermalContext& ctx) {
    require_finite(energy, "energy");
    return logistic_of_minus(ctx.beta() * energy);
}

double energy_of_population(double p, const ThermalContext& ctx) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("population must lie strictly inside (0, 1)");
    }
    return (std::log1p(-p) - std::log(p)) / ctx.beta();
}

double partition_function(double energy, const ThermalContext& ctx) {
    require_finite(energy, "energy");
    return 1.0 + std::exp(-ctx.beta() * energy);
}

double entropy(const QubitState& state) {
    const double p = state.excited_population();
    auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return term(p) + term(1.0 - p);
}

double free_energy(const QubitState& state, double energy, const ThermalContext& ctx) {
    require_finite(energy, "energy");
    return state.excited_population() * energy - entropy(state) / ctx.beta();
}

double gibbs_free_energy(double energy, const ThermalContext& ctx) {
    require_finite(energy, "energy");
    return -softplus(-ctx.beta() * energy) / ctx.beta();
}

double gibbs_integral(double e_from, double e_to, const ThermalContext& ctx) {
    require_finite(e_from, "e_from");
    require_finite(e_to, "e_to");
    const double b = ctx.beta();
    return (softplus(-b * e_from) - softplus(-b * e_to)) / b;
}

}  // namespace mcosim
