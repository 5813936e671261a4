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

#include "mcosim/thermo.hpp"

namespace mcosim {

enum class Regime { A6, A7, A8 };

const char* regime_name(Regime r);  // "A6", "A7", "A8"

/// "Without spending at least `threshold` of work, the transition fails with
/// probability at least `probability`": P(W <= -threshold) >= probability.
struct NoGoBound {
    double threshold;
    double probability;  // p1 * p2 * p3 * pf
    double p1;
    double p2;
    double p3;
    double pf;
    Regime regime;
    /// The parameters lie outside the ranges the constants were derived for
    /// (p_out > 1/2 or a degenerate boundary). The numbers are the same
    /// formula evaluated there.
    bool extrapolated = false;
};

struct ThresholdBound {
    double threshold;
    double probability;
};

/// Staged average-work protocol: P(W <= -(E(p_in) - E(p_out))/2) >=
/// p_in p_out (1 - e^{-2 (1/2 - p_out)^2}). Needs 0 < p_in < p_out < 1/2.
ThresholdBound lemma_simplecase_bound(double p_in, double p_out, const ThermalContext& ctx);

/// e^{-2 n (1/2 - p)^2}; needs n >= 1 and 0 <= p < 1/2.
double hoeffding_tail(int n, double p);

/// Exact P(Bin(n, p) >= n/2), summed by the Pascal recursion.
double binomial_upper_tail(int n, double p);

/// min{2/3, eps / (4/beta + eps)}; needs eps > 0.
double lemma_w2_probability(double epsilon2, const ThermalContext& ctx);

/// Single-path bound: threshold eps_III(q_out)/2 with probability
/// p_in min{2/3, eps/(8/beta + eps)} q_out. Needs 1/2 >= q_out > p_beta >
/// p_in > 0.
ThresholdBound lemma_path_bound(double p_in, double q_out, const ThermalContext& ctx);

/// Lower-than-Gibbs to higher-than-Gibbs. Needs 0 < p_in < p_beta < p_out <= 1/2.
NoGoBound theorem_main_bound(double p_in, double p_out, const ThermalContext& ctx);

/// Higher-than-Gibbs to lower-than-Gibbs. Needs p_out < p_beta < p_in < 1.
NoGoBound theorem_rev_bound(double p_in, double p_out, const ThermalContext& ctx);

/// Same side of the Gibbs population, moving away from it: p_beta <= p_in <
/// p_out <= 1/2 or p_beta >= p_in > p_out > 0. Composes the stage bounds of
/// the side p_out lies on with q* = (p_out + p_beta)/2 and stage-I factor
/// min{p_in, 1 - p_in}.
NoGoBound theorem_same_side(double p_in, double p_out, const ThermalContext& ctx);

/// The regime formulas without range checks, for the classifier's edge cases
/// (p_out > 1/2 and the like). `extrapolated` is set when a checked function
/// would have rejected the arguments.
NoGoBound no_go_bound_unchecked(double p_in, double p_out, const ThermalContext& ctx);

struct ReverseMarkov {
    double upper_tail;  // P(Y > a) >= 1 - (1 - EY)/(1 - a)
    double lower_tail;  // P(Y < a) >= 1 - EY/a
    bool upper_clamped;
    bool lower_clamped;
};

/// For Y supported on [0, 1]; negative bounds are clamped to 0 and flagged.
ReverseMarkov reverse_markov_lower(double mean, double a);

/// P(X <= EX + delta) >= delta^2 / (Var X + delta^2).
double cantelli_lower(double delta, double variance);

/// {"threshold", "probability", "components": {"p1","p2","p3","pf"},
///  "regime", "extrapolated"[, "note"]}.
std::string bound_to_json(const NoGoBound& bound, int indent = -1);

}  // namespace mcosim
