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
#include <iosfwd>
#include <optional>
#include <vector>

#include "mcosim/engine.hpp"
#include "mcosim/protocol.hpp"
#include "mcosim/thermo.hpp"

namespace mcosim {

/// Resolved outcome of a PT or BT: nothing happened (Identity), full
/// thermalization (Gibbs) or a bit flip (Swap).
enum class Choice { Identity, Gibbs, Swap };

const char* choice_tag(Choice c);  // "I", "G", "S"

/// Shift the level by `increment`, then apply `choice`.
struct PathElement {
    double increment;
    Choice choice;
    bool operator==(const PathElement&) const = default;
};

/// A single branch of a protocol. The level starts at `e_start`; a path taken
/// from a full protocol starts at e0 and, for cyclic protocols, ends there.
class Path {
public:
    Path(ThermalContext ctx, double e_start, std::vector<PathElement> elements,
         double weight = 1.0);

    const ThermalContext& context() const noexcept { return ctx_; }
    double e_start() const noexcept { return e_start_; }
    double e_end() const noexcept;
    const std::vector<PathElement>& elements() const noexcept { return elements_; }
    double weight() const noexcept { return weight_; }
    bool empty() const noexcept { return elements_.empty(); }
    std::size_t size() const noexcept { return elements_.size(); }

    bool has_swap() const noexcept;
    std::size_t gibbs_count() const noexcept;

    /// Energy before each element's shift, plus the final energy.
    std::vector<double> energy_trajectory() const;

    /// The protocol steps realising this path: LT(increment) followed by
    /// PT(1) for Gibbs and BT(1) for Swap; zero increments are omitted.
    std::vector<ProtocolStep> to_steps() const;

    bool operator==(const Path&) const = default;

private:
    ThermalContext ctx_;
    double e_start_;
    std::vector<PathElement> elements_;
    double weight_;
};

/// One path per assignment of the branching PT/BT steps (0 < lambda, gamma <
/// 1). Deterministic steps contribute a single choice. Throws ResourceError
/// for more than `max_branching` branching steps.
std::vector<Path> enumerate_paths(const Protocol& proto, std::size_t max_branching = 24);

/// Glues increments across Identity choices, cancels Swap pairs separated by
/// a zero net shift and collapses repeated Gibbs choices. A trailing shift
/// with no choice after it is kept as a final Identity element.
Path shrink(const Path& path);

struct StageDecomposition {
    Path stage1;  // up to and including the first Gibbs choice
    Path stage2;  // after the first Gibbs choice up to and including the last
    Path stage3;  // after the last Gibbs choice
    bool thermalized;
    double e_a;  // energy at the first thermalization
    double e_b;  // energy at the last thermalization
    double delta_f1;
    double delta_f2;
    double delta_f3;
};

/// Splits at the first and last Gibbs choices. Without any Gibbs choice the
/// whole path is stage I and e_a = e_b is its end energy.
StageDecomposition decompose_stages(const Path& path);

struct PathSegment {
    std::size_t index;
    double e_from;
    double e_to;
    double level_q;  // excited-population level of the horizontal segment
    Choice choice;   // applied at e_to
    int stage;       // 1, 2 or 3
    double area;
};

struct AreaReport {
    std::vector<PathSegment> segments;
    double stage2_area;
    double total_area;
};

/// Area between each horizontal segment of the path and the Gibbs curve, in
/// closed form. The level starts at `initial_level` and is reset to g(E) by a
/// Gibbs choice and reflected to 1 - q by a Swap.
AreaReport area_between(const Path& path, double initial_level);

/// Whether g(E) - q changes sign strictly inside the segment.
bool crosses_gibbs_curve(const PathSegment& segment, const ThermalContext& ctx);

/// Exact law of W conditional on the path (Gibbs resamples, Swap flips).
WorkDistribution path_work_distribution(const Path& path, const QubitState& initial);
ExactEvaluation path_evaluation(const Path& path, const QubitState& initial);

/// Sum_i weight_i * dist_i.
WorkDistribution mixture(const std::vector<std::pair<double, WorkDistribution>>& parts);

/// -E(q) + e0 + (1/beta) ln((1 + e^{-beta e0}) / (1 + e^{-beta E(q)})).
double epsilon_iii(double q_out, const ThermalContext& ctx);

/// E(q) - e0 + (1/beta) ln((1 + e^{-beta e0}) / (1 + e^{-beta E(q)})).
double epsilon_iii_tilde(double q_out, const ThermalContext& ctx);

/// `segment,e_from,e_to,level_q,tag,area`, 17 significant digits.
void write_path_csv(std::ostream& os, const AreaReport& report);

}  // namespace mcosim
