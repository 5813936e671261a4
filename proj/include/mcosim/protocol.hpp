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
#include <string>
#include <variant>
#include <vector>

#include "mcosim/thermo.hpp"

namespace mcosim {

/// Absolute tolerance for "the energy is zero" (swap legality) and for the
/// cyclic closure E_N = E_0.
inline constexpr double kEnergyTolerance = 1e-9;

/// PT: rho -> (1 - lambda) rho + lambda tau_E at the current energy.
struct PartialThermalization {
    explicit PartialThermalization(double lambda);
    double lambda;
    bool operator==(const PartialThermalization&) const = default;
};

/// LT: shifts the excited level by delta_e. Work -delta_e is drawn iff the
/// excited level is occupied.
struct LevelTransformation {
    explicit LevelTransformation(double delta_e);
    double delta_e;
    bool operator==(const LevelTransformation&) const = default;
};

/// BT: bit flip with probability gamma. Only legal (for gamma > 0) while the
/// excited level is degenerate with the ground level.
struct BistochasticTransformation {
    explicit BistochasticTransformation(double gamma);
    double gamma;
    bool operator==(const BistochasticTransformation&) const = default;
};

using ProtocolStep =
    std::variant<PartialThermalization, LevelTransformation, BistochasticTransformation>;

/// "PT", "LT" or "BT".
const char* step_tag(const ProtocolStep& step);

/// True for a branching step, i.e. a PT or BT whose probability is strictly
/// inside (0, 1).
bool is_branching(const ProtocolStep& step);

/// An immutable control sequence acting on a qubit that starts at energy e0.
/// Construction does not check cyclicity or swap legality; see validate().
class Protocol {
public:
    Protocol(ThermalContext ctx, std::vector<ProtocolStep> steps);

    const ThermalContext& context() const noexcept { return ctx_; }
    const std::vector<ProtocolStep>& steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_.size(); }
    bool empty() const noexcept { return steps_.empty(); }

    /// Energy in force before each step, plus the final energy
    /// (size() + 1 entries, the first being e0).
    std::vector<double> energy_trajectory() const;

    bool operator==(const Protocol&) const = default;

private:
    ThermalContext ctx_;
    std::vector<ProtocolStep> steps_;
};

struct Violation {
    enum class Kind { NonFiniteEnergy, NotCyclic, SwapAwayFromZero };
    Kind kind;
    /// Offending step, or the step count for a cyclicity violation.
    std::size_t step_index;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

/// Never throws; lists every violation with its step index.
ValidationReport validate(const Protocol& proto);

/// Throws std::invalid_argument carrying the report if `proto` is invalid.
void require_valid(const Protocol& proto);

/// Merges adjacent same-type steps and drops steps with no effect. The final
/// state and the work law are unchanged, and the result is a fixed point.
Protocol normalize(const Protocol& proto);

/// Stage I: LT from e0 to E(p_in). Stage II: n_stage2 x [LT, PT(1)] walking
/// the level from E(p_in) to E(p_out) in equal increments. Stage III: LT back
/// to e0.
Protocol build_average_work_protocol(double p_in, double p_out, const ThermalContext& ctx,
                                     std::size_t n_stage2);

/// [LT(e_contact - e0), PT(lambda), LT(e0 - e_contact)].
Protocol build_thermalize_once(double e_contact, double lambda, const ThermalContext& ctx);

/// [LT(-e0), BT(1), LT(+e0)]: maps (0, 1) to (1, 0) while gaining e0.
Protocol build_pure_excited_reset(const ThermalContext& ctx);

struct EnergyRange {
    double lo;
    double hi;
};

/// Seeded generator of valid protocols for property tests. At most
/// `max_steps` steps; swaps are only placed right after an LT that lands on
/// zero energy and a final LT closes the cycle.
Protocol random_protocol(std::uint64_t seed, std::size_t max_steps, EnergyRange targets,
                         const ThermalContext& ctx);

}  // namespace mcosim
