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

#include "mcosim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "mcosim/paths.hpp"

namespace mcosim {
namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require_open_probability(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in (0, 1)");
    }
}

double middle_factor(double eps, const ThermalContext& ctx) {
    // lemma_w2_probability(eps / 2).
    return std::min(2.0 / 3.0, eps / (8.0 / ctx.beta() + eps));
}

// Shared recipe of the three regimes. The stage-III margin and occupation
// factor depend on which side of p_beta the target lies.
NoGoBound compose(double p_out, double p1, Regime regime, const ThermalContext& ctx) {
    const double pb = ctx.p_beta();
    const double q_star = 0.5 * (p_out + pb);
    const bool above = p_out > pb;
    const double eps = above ? epsilon_iii(q_star, ctx) : epsilon_iii_tilde(q_star, ctx);
    NoGoBound b{};
    b.threshold = std::max(0.0, 0.5 * eps);
    b.p1 = clamp01(p1);
    b.p2 = clamp01(middle_factor(std::max(eps, 0.0), ctx));
    b.p3 = clamp01(above ? q_star : 1.0 - q_star);
    b.pf = clamp01(0.5 * std::abs(p_out - pb));
    // p1 is applied last so that bounds for different p_in differ by exactly
    // the p_in factor.
    b.probability = clamp01(b.p1 * (b.p2 * b.p3 * b.pf));
    b.regime = regime;
    return b;
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::A6: return "A6";
        case Regime::A7: return "A7";
        case Regime::A8: return "A8";
    }
    return "?";
}

ThresholdBound lemma_simplecase_bound(double p_in, double p_out, const ThermalContext& ctx) {
    require_open_probability(p_in, "p_in");
    if (!(p_out > 0.0 && p_out < 0.5)) {
        throw std::domain_error("p_out must lie in (0, 1/2)");
    }
    if (!(p_in < p_out)) {
        throw std::domain_error("lemma needs p_in < p_out");
    }
    const double gap = 0.5 - p_out;
    return {0.5 * (energy_of_population(p_in, ctx) - energy_of_population(p_out, ctx)),
            p_in * p_out * -std::expm1(-2.0 * gap * gap)};
}

double hoeffding_tail(int n, double p) {
    if (n < 1) throw std::domain_error("n must be at least 1");
    if (!(p >= 0.0 && p < 0.5)) throw std::domain_error("p must lie in [0, 1/2)");
    const double gap = 0.5 - p;
    return std::exp(-2.0 * n * gap * gap);
}

double binomial_upper_tail(int n, double p) {
    if (n < 0) throw std::domain_error("n must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
    std::vector<double> pmf{1.0};
    for (int i = 0; i < n; ++i) {
        std::vector<double> next(pmf.size() + 1, 0.0);
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * (1.0 - p);
            next[k + 1] += pmf[k] * p;
        }
        pmf = std::move(next);
    }
    double tail = 0.0;
    for (int k = n; 2 * k >= n; --k) tail += pmf[k];
    return std::min(tail, 1.0);
}

double lemma_w2_probability(double epsilon2, const ThermalContext& ctx) {
    if (!(epsilon2 > 0.0)) throw std::domain_error("epsilon must be positive");
    if (std::isinf(epsilon2)) return 2.0 / 3.0;
    return std::min(2.0 / 3.0, epsilon2 / (4.0 / ctx.beta() + epsilon2));
}

ThresholdBound lemma_path_bound(double p_in, double q_out, const ThermalContext& ctx) {
    const double pb = ctx.p_beta();
    if (!(q_out <= 0.5 && q_out > pb && pb > p_in && p_in > 0.0)) {
        throw std::domain_error("lemma needs 1/2 >= q_out > p_beta > p_in > 0");
    }
    const double eps = epsilon_iii(q_out, ctx);
    return {0.5 * eps, p_in * middle_factor(eps, ctx) * q_out};
}

NoGoBound theorem_main_bound(double p_in, double p_out, const ThermalContext& ctx) {
    const double pb = ctx.p_beta();
    if (!(p_in > 0.0 && p_in < pb && pb < p_out && p_out <= 0.5)) {
        throw std::domain_error("theorem needs 0 < p_in < p_beta < p_out <= 1/2");
    }
    return compose(p_out, p_in, Regime::A6, ctx);
}

NoGoBound theorem_rev_bound(double p_in, double p_out, const ThermalContext& ctx) {
    const double pb = ctx.p_beta();
    if (!(p_out >= 0.0 && p_out < pb && pb < p_in && p_in < 1.0)) {
        throw std::domain_error("theorem needs p_out < p_beta < p_in < 1");
    }
    return compose(p_out, std::min(p_in, 1.0 - p_in), Regime::A7, ctx);
}

NoGoBound theorem_same_side(double p_in, double p_out, const ThermalContext& ctx) {
    const double pb = ctx.p_beta();
    const bool up = pb <= p_in && p_in < p_out && p_out <= 0.5;
    const bool down = pb >= p_in && p_in > p_out && p_out > 0.0;
    if (!up && !down) {
        throw std::domain_error(
            "theorem needs p_beta <= p_in < p_out <= 1/2 or p_beta >= p_in > p_out > 0");
    }
    return compose(p_out, std::min(p_in, 1.0 - p_in), Regime::A8, ctx);
}

NoGoBound no_go_bound_unchecked(double p_in, double p_out, const ThermalContext& ctx) {
    const double pb = ctx.p_beta();
    if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0) || p_out == pb) {
        throw std::domain_error("no bound for these populations");
    }
    NoGoBound b{};
    bool in_range = false;
    if (p_in < pb && pb < p_out) {
        b = compose(p_out, p_in, Regime::A6, ctx);
        in_range = p_in > 0.0 && p_out <= 0.5;
    } else if (p_out < pb && pb < p_in) {
        b = compose(p_out, std::min(p_in, 1.0 - p_in), Regime::A7, ctx);
        in_range = p_in < 1.0;
    } else {
        b = compose(p_out, std::min(p_in, 1.0 - p_in), Regime::A8, ctx);
        in_range = (pb <= p_in && p_in < p_out && p_out <= 0.5) ||
                   (pb >= p_in && p_in > p_out && p_out > 0.0);
    }
    b.extrapolated = !in_range;
    return b;
}

ReverseMarkov reverse_markov_lower(double mean, double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("a must lie in (0, 1)");
    if (!(mean >= 0.0 && mean <= 1.0)) throw std::domain_error("mean must lie in [0, 1]");
    const double up = 1.0 - (1.0 - mean) / (1.0 - a);
    const double lo = 1.0 - mean / a;
    return {std::max(up, 0.0), std::max(lo, 0.0), up < 0.0, lo < 0.0};
}

double cantelli_lower(double delta, double variance) {
    if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
    if (!(variance >= 0.0)) throw std::domain_error("variance must be nonnegative");
    if (std::isinf(delta)) return 1.0;
    const double d2 = delta * delta;
    return d2 / (variance + d2);
}

std::string bound_to_json(const NoGoBound& b, int indent) {
    nlohmann::ordered_json j;
    j["threshold"] = b.threshold;
    j["probability"] = b.probability;
    j["components"] = {{"p1", b.p1}, {"p2", b.p2}, {"p3", b.p3}, {"pf", b.pf}};
    j["regime"] = regime_name(b.regime);
    j["extrapolated"] = b.extrapolated;
    if (b.regime == Regime::A8) j["note"] = "constructive instantiation";
    return j.dump(indent);
}

}  // namespace mcosim
