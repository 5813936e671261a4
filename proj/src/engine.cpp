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

#include "mcosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <thread>

#include "mcosim/philox.hpp"

namespace mcosim {
namespace {

using Atoms = std::vector<WorkAtom>;

// Collapses a sorted atom list: runs closer than the tolerance to their first
// element become one atom at that element's work value.
Atoms cluster_sorted(const Atoms& sorted) {
    Atoms out;
    out.reserve(sorted.size());
    for (const auto& a : sorted) {
        if (a.probability == 0.0) {
            continue;
        }
        if (!out.empty() && a.work - out.back().work < kWorkMergeTolerance) {
            out.back().probability += a.probability;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

Atoms merge_scaled(const Atoms& a, double wa, const Atoms& b, double wb) {
    Atoms merged;
    merged.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].work <= b[j].work)) {
            merged.push_back({a[i].work, a[i].probability * wa});
            ++i;
        } else {
            merged.push_back({b[j].work, b[j].probability * wb});
            ++j;
        }
    }
    return cluster_sorted(merged);
}

Atoms scaled(const Atoms& a, double w) {
    Atoms out;
    out.reserve(a.size());
    for (const auto& x : a) {
        if (x.probability * w != 0.0) {
            out.push_back({x.work, x.probability * w});
        }
    }
    return out;
}

double mass(const Atoms& a) {
    double s = 0.0;
    for (const auto& x : a) s += x.probability;
    return s;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Joint law of (occupation, accumulated work).
struct OccupationLaw {
    Atoms empty;
    Atoms occupied;

    std::size_t size() const { return empty.size() + occupied.size(); }
};

}  // namespace

WorkDistribution WorkDistribution::from_atoms(std::vector<WorkAtom> atoms) {
    for (auto& a : atoms) {
        if (!std::isfinite(a.work) || !(a.probability >= 0.0)) {
            throw std::domain_error("work atoms need finite work and nonnegative mass");
        }
        if (a.work == 0.0) a.work = 0.0;  // no -0 in output
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const WorkAtom& x, const WorkAtom& y) { return x.work < y.work; });
    WorkDistribution d;
    d.atoms_ = cluster_sorted(atoms);
    const double total = d.total_mass();
    if (total > 0.0) {
        double m = 0.0;
        for (const auto& a : d.atoms_) m += a.work * a.probability;
        m /= total;
        double v = 0.0;
        for (const auto& a : d.atoms_) v += (a.work - m) * (a.work - m) * a.probability;
        d.mean_ = m;
        d.variance_ = v / total;
    }
    return d;
}

WorkDistribution WorkDistribution::point_mass(double work) {
    return from_atoms({{work, 1.0}});
}

double WorkDistribution::total_mass() const noexcept {
    return mass(atoms_);
}

double WorkDistribution::prob_at_most(double threshold) const noexcept {
    double p = 0.0;
    for (const auto& a : atoms_) {
        if (a.work <= threshold + 1e-12) {
            p += a.probability;
        } else {
            break;
        }
    }
    return std::min(p, 1.0);
}

double total_variation(const WorkDistribution& a, const WorkDistribution& b) {
    // Tag mass from b negatively, merge, and sum |.| over clusters.
    Atoms joint;
    joint.reserve(a.atoms().size() + b.atoms().size());
    for (const auto& x : a.atoms()) joint.push_back(x);
    for (const auto& x : b.atoms()) joint.push_back({x.work, -x.probability});
    std::stable_sort(joint.begin(), joint.end(),
                     [](const WorkAtom& x, const WorkAtom& y) { return x.work < y.work; });
    double tv = 0.0;
    std::size_t i = 0;
    while (i < joint.size()) {
        const double anchor = joint[i].work;
        double diff = 0.0;
        while (i < joint.size() && joint[i].work - anchor < kWorkMergeTolerance) {
            diff += joint[i].probability;
            ++i;
        }
        tv += std::abs(diff);
    }
    return 0.5 * tv;
}

double max_cdf_distance(const WorkDistribution& a, const WorkDistribution& b) {
    Atoms joint;
    for (const auto& x : a.atoms()) joint.push_back(x);
    for (const auto& x : b.atoms()) joint.push_back({x.work, -x.probability});
    std::stable_sort(joint.begin(), joint.end(),
                     [](const WorkAtom& x, const WorkAtom& y) { return x.work < y.work; });
    double cdf_diff = 0.0;
    double worst = 0.0;
    std::size_t i = 0;
    while (i < joint.size()) {
        const double anchor = joint[i].work;
        while (i < joint.size() && joint[i].work - anchor < kWorkMergeTolerance) {
            cdf_diff += joint[i].probability;
            ++i;
        }
        worst = std::max(worst, std::abs(cdf_diff));
    }
    return worst;
}

void write_csv(std::ostream& os, const WorkDistribution& dist) {
    os << "work,probability\n";
    char buf[64];
    for (const auto& a : dist.atoms()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a.work, a.probability);
        os << buf;
    }
}

ExactEvaluation propagate_exact(std::span<const ProtocolStep> steps, double e_start,
                                const ThermalContext& ctx, const QubitState& initial,
                                std::size_t atom_cap) {
    const double p0 = initial.excited_population();
    OccupationLaw law;
    if (p0 < 1.0) law.empty.push_back({0.0, 1.0 - p0});
    if (p0 > 0.0) law.occupied.push_back({0.0, p0});

    double energy = e_start;
    for (const auto& step : steps) {
        std::visit(Overloaded{
                       [&](const LevelTransformation& lt) {
                           for (auto& a : law.occupied) a.work -= lt.delta_e;
                           energy += lt.delta_e;
                       },
                       [&](const PartialThermalization& pt) {
                           if (pt.lambda == 0.0) return;
                           const double g = gibbs_population(energy, ctx);
                           const Atoms total = merge_scaled(law.empty, 1.0, law.occupied, 1.0);
                           if (pt.lambda == 1.0) {
                               law.occupied = scaled(total, g);
                               law.empty = scaled(total, 1.0 - g);
                           } else {
                               const double keep = 1.0 - pt.lambda;
                               law.occupied =
                                   merge_scaled(law.occupied, keep, total, pt.lambda * g);
                               law.empty =
                                   merge_scaled(law.empty, keep, total, pt.lambda * (1.0 - g));
                           }
                       },
                       [&](const BistochasticTransformation& bt) {
                           if (bt.gamma == 0.0) return;
                           const double keep = 1.0 - bt.gamma;
                           Atoms occ = merge_scaled(law.occupied, keep, law.empty, bt.gamma);
                           law.empty = merge_scaled(law.empty, keep, law.occupied, bt.gamma);
                           law.occupied = std::move(occ);
                       },
                   },
                   step);
        if (law.size() > atom_cap) {
            throw ResourceError("exact work DP exceeded the atom cap of " +
                                std::to_string(atom_cap) + "; use Monte Carlo instead");
        }
    }

    const double occ_mass = mass(law.occupied);
    const double total_mass = occ_mass + mass(law.empty);
    const double p_final = std::clamp(occ_mass / total_mass, 0.0, 1.0);
    Atoms all = law.empty;
    all.insert(all.end(), law.occupied.begin(), law.occupied.end());
    return {WorkDistribution::from_atoms(std::move(all)), QubitState(p_final)};
}

QubitState final_state(const Protocol& proto, const QubitState& initial) {
    require_valid(proto);
    const auto& ctx = proto.context();
    double p = initial.excited_population();
    double energy = ctx.e0();
    for (const auto& step : proto.steps()) {
        if (const auto* lt = std::get_if<LevelTransformation>(&step)) {
            energy += lt->delta_e;
        } else if (const auto* pt = std::get_if<PartialThermalization>(&step)) {
            p = (1.0 - pt->lambda) * p + pt->lambda * gibbs_population(energy, ctx);
        } else {
            const double gamma = std::get<BistochasticTransformation>(step).gamma;
            p = (1.0 - gamma) * p + gamma * (1.0 - p);
        }
    }
    return QubitState(std::clamp(p, 0.0, 1.0));
}

ExactEvaluation exact_evaluation(const Protocol& proto, const QubitState& initial,
                                 std::size_t atom_cap) {
    require_valid(proto);
    return propagate_exact(proto.steps(), proto.context().e0(), proto.context(), initial,
                           atom_cap);
}

WorkDistribution exact_work_distribution(const Protocol& proto, const QubitState& initial,
                                         std::size_t atom_cap) {
    return exact_evaluation(proto, initial, atom_cap).work;
}

namespace {

// One step of the occupation Markov chain, as seen by the brute-force oracle.
struct ChainStep {
    enum class Kind { Shift, Transition } kind;
    double delta_e = 0.0;
    // P(next = 1 | current = 0), P(next = 1 | current = 1)
    double up_from_empty = 0.0;
    double stay_occupied = 1.0;
};

void enumerate_histories(const std::vector<ChainStep>& chain, std::size_t index, bool occupied,
                         double weight, double work, Atoms& leaves) {
    for (; index < chain.size() && chain[index].kind == ChainStep::Kind::Shift; ++index) {
        if (occupied) work -= chain[index].delta_e;
    }
    if (index == chain.size()) {
        leaves.push_back({work, weight});
        return;
    }
    const auto& t = chain[index];
    const double p1 = occupied ? t.stay_occupied : t.up_from_empty;
    if (p1 > 0.0) enumerate_histories(chain, index + 1, true, weight * p1, work, leaves);
    if (p1 < 1.0) enumerate_histories(chain, index + 1, false, weight * (1.0 - p1), work, leaves);
}

}  // namespace

WorkDistribution brute_force_work_distribution(const Protocol& proto, const QubitState& initial) {
    require_valid(proto);
    const auto& ctx = proto.context();
    std::vector<ChainStep> chain;
    std::size_t branch_points = 1;  // the initial occupation
    double energy = ctx.e0();
    for (const auto& step : proto.steps()) {
        if (const auto* lt = std::get_if<LevelTransformation>(&step)) {
            chain.push_back({ChainStep::Kind::Shift, lt->delta_e});
            energy += lt->delta_e;
        } else if (const auto* pt = std::get_if<PartialThermalization>(&step)) {
            if (pt->lambda == 0.0) continue;
            const double g = gibbs_population(energy, ctx);
            chain.push_back({ChainStep::Kind::Transition, 0.0, pt->lambda * g,
                             1.0 - pt->lambda + pt->lambda * g});
            ++branch_points;
        } else {
            const double gamma = std::get<BistochasticTransformation>(step).gamma;
            if (gamma == 0.0) continue;
            chain.push_back({ChainStep::Kind::Transition, 0.0, gamma, 1.0 - gamma});
            ++branch_points;
        }
    }
    if (branch_points > 21) {
        throw ResourceError("brute-force enumeration supports at most 20 branching steps");
    }
    Atoms leaves;
    const double p0 = initial.excited_population();
    if (p0 > 0.0) enumerate_histories(chain, 0, true, p0, 0.0, leaves);
    if (p0 < 1.0) enumerate_histories(chain, 0, false, 1.0 - p0, 0.0, leaves);
    return WorkDistribution::from_atoms(std::move(leaves));
}

namespace {

struct SampleProgram {
    enum class Op { Shift, Thermalize, Flip };
    struct Instr {
        Op op;
        double param;     // delta_e, lambda or gamma
        double gibbs = 0; // g at the current energy for Thermalize
    };
    std::vector<Instr> code;
};

SampleProgram compile(const Protocol& proto) {
    SampleProgram prog;
    const auto& ctx = proto.context();
    double energy = ctx.e0();
    for (const auto& step : proto.steps()) {
        if (const auto* lt = std::get_if<LevelTransformation>(&step)) {
            prog.code.push_back({SampleProgram::Op::Shift, lt->delta_e});
            energy += lt->delta_e;
        } else if (const auto* pt = std::get_if<PartialThermalization>(&step)) {
            if (pt->lambda > 0.0) {
                prog.code.push_back({SampleProgram::Op::Thermalize, pt->lambda,
                                     gibbs_population(energy, ctx)});
            }
        } else {
            const double gamma = std::get<BistochasticTransformation>(step).gamma;
            if (gamma > 0.0) prog.code.push_back({SampleProgram::Op::Flip, gamma});
        }
    }
    return prog;
}

struct SampleOutcome {
    double work;
    bool occupied;
};

SampleOutcome run_sample(const SampleProgram& prog, double p0, std::uint64_t seed,
                         std::uint64_t index) {
    StreamUniform u(seed, index);
    bool occ = u() < p0;
    double work = 0.0;
    for (const auto& in : prog.code) {
        switch (in.op) {
            case SampleProgram::Op::Shift:
                if (occ) work -= in.param;
                break;
            case SampleProgram::Op::Thermalize:
                // Thermalize with probability lambda, then redraw the occupation.
                if (in.param >= 1.0 || u() < in.param) occ = u() < in.gibbs;
                break;
            case SampleProgram::Op::Flip:
                if (in.param >= 1.0 || u() < in.param) occ = !occ;
                break;
        }
    }
    return {work, occ};
}

}  // namespace

MonteCarloResult monte_carlo(const Protocol& proto, const QubitState& initial,
                             std::size_t n_samples, std::uint64_t seed, unsigned workers) {
    if (n_samples == 0) {
        throw std::domain_error("n_samples must be at least 1");
    }
    require_valid(proto);
    const SampleProgram prog = compile(proto);
    const double p0 = initial.excited_population();

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_samples));

    std::vector<double> works(n_samples);
    std::vector<std::size_t> occupied_counts(workers, 0);
    auto run_range = [&](unsigned w) {
        const std::size_t begin = n_samples * w / workers;
        const std::size_t end = n_samples * (w + 1) / workers;
        std::size_t occ = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto s = run_sample(prog, p0, seed, i);
            works[i] = s.work;
            occ += s.occupied;
        }
        occupied_counts[w] = occ;
    };
    if (workers == 1) {
        run_range(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    }

    // Aggregation from sorted values is independent of the worker split.
    std::sort(works.begin(), works.end());
    const double n = static_cast<double>(n_samples);
    Atoms atoms;
    for (std::size_t i = 0; i < works.size();) {
        std::size_t j = i;
        while (j < works.size() && works[j] == works[i]) ++j;
        atoms.push_back({works[i], static_cast<double>(j - i) / n});
        i = j;
    }
    const std::size_t occupied =
        std::accumulate(occupied_counts.begin(), occupied_counts.end(), std::size_t{0});
    const double p_hat = static_cast<double>(occupied) / n;

    auto empirical = WorkDistribution::from_atoms(std::move(atoms));
    const double mean_se = n_samples > 1 ? std::sqrt(empirical.variance() * n / (n - 1) / n) : 0.0;
    return {std::move(empirical), QubitState(p_hat), std::sqrt(p_hat * (1.0 - p_hat) / n),
            mean_se, n_samples};
}

}  // namespace mcosim
