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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcosim/protocol.hpp"
#include "mcosim/thermo.hpp"

namespace mcosim {

struct CheckResult {
    std::string name;
    bool passed;
    std::size_t cases;
    std::size_t violations;
    /// Smallest slack (bound side minus measured side) over all cases;
    /// negative when some case violates the property.
    double worst_margin;
    std::string detail;
};

struct VerifyConfig {
    std::uint64_t seed = 20260101;
    /// Randomized instances per property.
    std::size_t cases = 500;
    /// Name of a check whose bound is deliberately broken (test mode).
    std::optional<std::string> inject_fault;
    /// Empty runs every check.
    std::vector<std::string> only;
};

/// Names accepted by VerifyConfig::only and inject_fault, in run order.
const std::vector<std::string>& verify_check_names();

/// Throws std::invalid_argument for an unknown check or fault name.
std::vector<CheckResult> run_verify(const VerifyConfig& cfg);

bool all_passed(const std::vector<CheckResult>& results);

/// {"seed", "cases", "passed", "checks": [{name, passed, cases, violations,
/// worst_margin, detail}]}.
std::string verify_report_json(const VerifyConfig& cfg, const std::vector<CheckResult>& results,
                               int indent = 2);

// Individual checks. `fault` breaks the bound under test on purpose.
CheckResult check_hoeffding(bool fault = false);
CheckResult check_variance_area(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_stage_identities(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_mean_area(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_shrink_preserves_law(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_lemma_w1(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_lemma_w2(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_lemma_w3(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_bound_vs_exact(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_reverse_markov(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_cantelli(std::uint64_t seed, std::size_t cases, bool fault = false);
CheckResult check_swap_segment_grid(bool fault = false);
CheckResult check_gibbs_crossing(std::uint64_t seed, std::size_t cases, bool fault = false);

/// Valid cyclic protocols that take p_in to p_out (neither equal to 1 or 0
/// where an energy is needed):
///   0  one full thermalization at E(p_out)
///   1  one partial thermalization at E(p_out) shifted by 0.5/beta past it
///   2  the same shifted by 2/beta
///   3  three full thermalizations at populations evenly spaced toward p_out
///   4  build_average_work_protocol with 4 stage-II steps
///   5  build_average_work_protocol with 64 stage-II steps
Protocol transition_witness(double p_in, double p_out, const ThermalContext& ctx, int kind);
inline constexpr int kWitnessKinds = 6;

}  // namespace mcosim
