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

#include "mcosim/paths.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace mcosim {
namespace {

// Shifts at most this large count as "no shift" when cancelling choice pairs.
constexpr double kZeroShift = 1e-12;

struct BranchSlot {
    std::size_t step;
    double p_active;  // lambda or gamma
};

}  // namespace

const char* choice_tag(Choice c) {
    switch (c) {
        case Choice::Identity: return "I";
        case Choice::Gibbs: return "G";
        case Choice::Swap: return "S";
    }
    return "?";
}

Path::Path(ThermalContext ctx, double e_start, std::vector<PathElement> elements, double weight)
    : ctx_(ctx), e_start_(e_start), elements_(std::move(elements)), weight_(weight) {
    if (!std::isfinite(e_start)) {
        throw std::domain_error("path start energy must be finite");
    }
    if (!(weight >= 0.0 && weight <= 1.0)) {
        throw std::domain_error("path weight must lie in [0, 1]");
    }
    for (const auto& el : elements_) {
        if (!std::isfinite(el.increment)) {
            throw std::domain_error("path increments must be finite");
        }
    }
}

double Path::e_end() const noexcept {
    double e = e_start_;
    for (const auto& el : elements_) e += el.increment;
    return e;
}

bool Path::has_swap() const noexcept {
    for (const auto& el : elements_) {
        if (el.choice == Choice::Swap) return true;
    }
    return false;
}

std::size_t Path::gibbs_count() const noexcept {
    std::size_t n = 0;
    for (const auto& el : elements_) n += el.choice == Choice::Gibbs;
    return n;
}

std::vector<double> Path::energy_trajectory() const {
    std::vector<double> e{e_start_};
    e.reserve(elements_.size() + 1);
    for (const auto& el : elements_) e.push_back(e.back() + el.increment);
    return e;
}

std::vector<ProtocolStep> Path::to_steps() const {
    std::vector<ProtocolStep> steps;
    steps.reserve(2 * elements_.size());
    for (const auto& el : elements_) {
        if (el.increment != 0.0) steps.emplace_back(LevelTransformation(el.increment));
        if (el.choice == Choice::Gibbs) steps.emplace_back(PartialThermalization(1.0));
        if (el.choice == Choice::Swap) steps.emplace_back(BistochasticTransformation(1.0));
    }
    return steps;
}

std::vector<Path> enumerate_paths(const Protocol& proto, std::size_t max_branching) {
    const auto& steps = proto.steps();
    std::vector<BranchSlot> slots;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!is_branching(steps[i])) continue;
        const double p = std::holds_alternative<PartialThermalization>(steps[i])
                             ? std::get<PartialThermalization>(steps[i]).lambda
                             : std::get<BistochasticTransformation>(steps[i]).gamma;
        slots.push_back({i, p});
    }
    if (slots.size() > max_branching || slots.size() >= 63) {
        throw ResourceError("path enumeration supports at most " + std::to_string(max_branching) +
                            " branching steps, protocol has " + std::to_string(slots.size()));
    }

    const std::size_t count = std::size_t{1} << slots.size();
    std::vector<Path> paths;
    paths.reserve(count);
    std::vector<bool> active(steps.size(), false);
    for (std::size_t mask = 0; mask < count; ++mask) {
        double weight = 1.0;
        for (std::size_t k = 0; k < slots.size(); ++k) {
            const bool on = (mask >> k) & 1u;
            active[slots[k].step] = on;
            weight *= on ? slots[k].p_active : 1.0 - slots[k].p_active;
        }
        std::vector<PathElement> elements;
        double pending = 0.0;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const auto& s = steps[i];
            if (const auto* lt = std::get_if<LevelTransformation>(&s)) {
                pending += lt->delta_e;
                continue;
            }
            bool fires;
            if (is_branching(s)) {
                fires = active[i];
            } else if (const auto* pt = std::get_if<PartialThermalization>(&s)) {
                fires = pt->lambda == 1.0;
            } else {
                fires = std::get<BistochasticTransformation>(s).gamma == 1.0;
            }
            Choice c = Choice::Identity;
            if (fires) {
                c = std::holds_alternative<PartialThermalization>(s) ? Choice::Gibbs : Choice::Swap;
            }
            elements.push_back({pending, c});
            pending = 0.0;
        }
        if (pending != 0.0) elements.push_back({pending, Choice::Identity});
        paths.emplace_back(proto.context(), proto.context().e0(), std::move(elements), weight);
    }
    return paths;
}

Path shrink(const Path& path) {
    std::vector<PathElement> out;
    double pending = 0.0;
    for (const auto& el : path.elements()) {
        const double d = el.increment + pending;
        pending = 0.0;
        if (el.choice == Choice::Identity) {
            pending = d;
            continue;
        }
        if (!out.empty() && out.back().choice == el.choice && std::abs(d) <= kZeroShift) {
            if (el.choice == Choice::Swap) {
                // S S is the identity; the earlier shift carries forward.
                pending = out.back().increment + d;
                out.pop_back();
            } else {
                // G G is G.
                pending = d;
            }
            continue;
        }
        out.push_back({d, el.choice});
    }
    if (pending != 0.0) out.push_back({pending, Choice::Identity});
    return Path(path.context(), path.e_start(), std::move(out), path.weight());
}

StageDecomposition decompose_stages(const Path& path) {
    const auto& els = path.elements();
    const auto& ctx = path.context();
    std::optional<std::size_t> first, last;
    for (std::size_t i = 0; i < els.size(); ++i) {
        if (els[i].choice == Choice::Gibbs) {
            if (!first) first = i;
            last = i;
        }
    }
    const auto energies = path.energy_trajectory();
    if (!first) {
        const double end = energies.back();
        return {path,
                Path(ctx, end, {}, path.weight()),
                Path(ctx, end, {}, path.weight()),
                false,
                end,
                end,
                gibbs_integral(path.e_start(), end, ctx),
                0.0,
                0.0};
    }
    const double e_a = energies[*first + 1];
    const double e_b = energies[*last + 1];
    auto slice = [&](std::size_t from, std::size_t to, double start) {
        return Path(ctx, start, std::vector<PathElement>(els.begin() + from, els.begin() + to),
                    path.weight());
    };
    return {slice(0, *first + 1, path.e_start()),
            slice(*first + 1, *last + 1, e_a),
            slice(*last + 1, els.size(), e_b),
            true,
            e_a,
            e_b,
            gibbs_integral(path.e_start(), e_a, ctx),
            gibbs_integral(e_a, e_b, ctx),
            gibbs_integral(e_b, energies.back(), ctx)};
}

AreaReport area_between(const Path& path, double initial_level) {
    if (!(initial_level >= 0.0 && initial_level <= 1.0)) {
        throw std::domain_error("initial level must lie in [0, 1]");
    }
    const auto& els = path.elements();
    const auto& ctx = path.context();
    std::optional<std::size_t> first, last;
    for (std::size_t i = 0; i < els.size(); ++i) {
        if (els[i].choice == Choice::Gibbs) {
            if (!first) first = i;
            last = i;
        }
    }
    AreaReport report{{}, 0.0, 0.0};
    report.segments.reserve(els.size());
    double e = path.e_start();
    double q = initial_level;
    for (std::size_t i = 0; i < els.size(); ++i) {
        const double to = e + els[i].increment;
        const double area = std::abs(gibbs_integral(e, to, ctx) - q * (to - e));
        int stage = 1;
        if (first && i > *first) stage = i <= *last ? 2 : 3;
        report.segments.push_back({i, e, to, q, els[i].choice, stage, area});
        report.total_area += area;
        if (stage == 2) report.stage2_area += area;
        if (els[i].choice == Choice::Gibbs) q = gibbs_population(to, ctx);
        if (els[i].choice == Choice::Swap) q = 1.0 - q;
        e = to;
    }
    return report;
}

bool crosses_gibbs_curve(const PathSegment& s, const ThermalContext& ctx) {
    if (!(s.level_q > 0.0 && s.level_q < 1.0)) {
        return false;  // g never reaches 0 or 1
    }
    const double e_cross = energy_of_population(s.level_q, ctx);
    const double lo = std::min(s.e_from, s.e_to);
    const double hi = std::max(s.e_from, s.e_to);
    // A crossing within rounding of an endpoint is a touch, not a crossing.
    const double slack = 1e-12 * (1.0 + std::abs(e_cross));
    return e_cross > lo + slack && e_cross < hi - slack;
}

ExactEvaluation path_evaluation(const Path& path, const QubitState& initial) {
    const auto steps = path.to_steps();
    return propagate_exact(steps, path.e_start(), path.context(), initial);
}

WorkDistribution path_work_distribution(const Path& path, const QubitState& initial) {
    return path_evaluation(path, initial).work;
}

WorkDistribution mixture(const std::vector<std::pair<double, WorkDistribution>>& parts) {
    std::vector<WorkAtom> atoms;
    for (const auto& [w, dist] : parts) {
        for (const auto& a : dist.atoms()) atoms.push_back({a.work, w * a.probability});
    }
    return WorkDistribution::from_atoms(std::move(atoms));
}

double epsilon_iii(double q_out, const ThermalContext& ctx) {
    const double e = energy_of_population(q_out, ctx);
    return ctx.e0() - e + gibbs_integral(ctx.e0(), e, ctx);
}

double epsilon_iii_tilde(double q_out, const ThermalContext& ctx) {
    const double e = energy_of_population(q_out, ctx);
    return e - ctx.e0() + gibbs_integral(ctx.e0(), e, ctx);
}

void write_path_csv(std::ostream& os, const AreaReport& report) {
    os << "segment,e_from,e_to,level_q,tag,area\n";
    char buf[160];
    for (const auto& s : report.segments) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%s,%.17g\n", s.index, s.e_from,
                      s.e_to, s.level_q, choice_tag(s.choice), s.area);
        os << buf;
    }
}

}  // namespace mcosim
