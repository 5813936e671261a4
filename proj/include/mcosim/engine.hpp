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
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcosim/protocol.hpp"
#include "mcosim/thermo.hpp"

namespace mcosim {

/// A computation would exceed a configured size limit.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Work values closer than this are the same atom.
inline constexpr double kWorkMergeTolerance = 1e-10;

/// Default cap on the number of (occupation, work) atoms the exact DP keeps.
inline constexpr std::size_t kDefaultAtomCap = 1'000'000;

struct WorkAtom {
    double work;
    double probability;
};

/// Finite law of the work random variable W (positive = work done by the
/// system). Atoms are sorted by work, merged at kWorkMergeTolerance and have
/// strictly positive mass.
class WorkDistribution {
public:
    /// Sorts and merges; atoms with zero mass are dropped.
    static WorkDistribution from_atoms(std::vector<WorkAtom> atoms);
    static WorkDistribution point_mass(double work);

    const std::vector<WorkAtom>& atoms() const noexcept { return atoms_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    double total_mass() const noexcept;

    /// P(W <= threshold) with 1e-12 slack on the threshold.
    double prob_at_most(double threshold) const noexcept;

private:
    std::vector<WorkAtom> atoms_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

inline double prob_work_at_most(const WorkDistribution& dist, double threshold) {
    return dist.prob_at_most(threshold);
}

/// Total-variation distance, matching atoms at kWorkMergeTolerance.
double total_variation(const WorkDistribution& a, const WorkDistribution& b);

/// sup_x |F_a(x) - F_b(x)| over the joint support (the KS statistic when `a`
/// is empirical).
double max_cdf_distance(const WorkDistribution& a, const WorkDistribution& b);

/// `work,probability` header, ascending work, 17 significant digits.
void write_csv(std::ostream& os, const WorkDistribution& dist);

struct ExactEvaluation {
    WorkDistribution work;
    /// Work-marginalised occupation of the DP.
    QubitState final_state;
};

/// Final state of the population dynamics. Requires a valid protocol.
QubitState final_state(const Protocol& proto, const QubitState& initial);

/// Exact law of W by DP over (occupation bit, work value). Requires a valid
/// protocol; throws ResourceError when more than `atom_cap` atoms are live.
WorkDistribution exact_work_distribution(const Protocol& proto, const QubitState& initial,
                                         std::size_t atom_cap = kDefaultAtomCap);

ExactEvaluation exact_evaluation(const Protocol& proto, const QubitState& initial,
                                 std::size_t atom_cap = kDefaultAtomCap);

/// The DP on an arbitrary step sequence starting at `e_start`: no cyclicity
/// or swap-legality checks. Used for stage-wise and per-path laws.
ExactEvaluation propagate_exact(std::span<const ProtocolStep> steps, double e_start,
                                const ThermalContext& ctx, const QubitState& initial,
                                std::size_t atom_cap = kDefaultAtomCap);

/// Exhaustive enumeration of every occupation history (no intermediate
/// merging). At most 20 branch points; throws ResourceError otherwise.
WorkDistribution brute_force_work_distribution(const Protocol& proto, const QubitState& initial);

struct MonteCarloResult {
    WorkDistribution empirical;
    QubitState final_state;
    double final_state_stderr;
    double mean_stderr;
    std::size_t n_samples;
};

/// Samples `n_samples` trajectories. Sample i draws only from the Philox
/// stream (seed, i), so the aggregate is identical for any `workers` count
/// (0 = hardware concurrency).
MonteCarloResult monte_carlo(const Protocol& proto, const QubitState& initial,
                             std::size_t n_samples, std::uint64_t seed, unsigned workers = 0);

}  // namespace mcosim
