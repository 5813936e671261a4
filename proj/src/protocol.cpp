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

#include "mcosim/protocol.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mcosim {
namespace {

// LT increments below this are treated as no-ops by normalize().
constexpr double kZeroIncrement = 1e-12;

double require_probability(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
    return x;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool has_no_effect(const ProtocolStep& step) {
    return std::visit(Overloaded{
                          [](const PartialThermalization& s) { return s.lambda == 0.0; },
                          [](const LevelTransformation& s) {
                              return std::abs(s.delta_e) <= kZeroIncrement;
                          },
                          [](const BistochasticTransformation& s) { return s.gamma == 0.0; },
                      },
                      step);
}

// Composes `next` after `prev`; both must hold the same alternative.
ProtocolStep compose(const ProtocolStep& prev, const ProtocolStep& next) {
    if (const auto* a = std::get_if<PartialThermalization>(&prev)) {
        const double b = std::get<PartialThermalization>(next).lambda;
        return PartialThermalization(1.0 - (1.0 - a->lambda) * (1.0 - b));
    }
    if (const auto* a = std::get_if<LevelTransformation>(&prev)) {
        return LevelTransformation(a->delta_e + std::get<LevelTransformation>(next).delta_e);
    }
    const double a = std::get<BistochasticTransformation>(prev).gamma;
    const double b = std::get<BistochasticTransformation>(next).gamma;
    return BistochasticTransformation(a * (1.0 - b) + b * (1.0 - a));
}

class UnitUniform {
public:
    explicit UnitUniform(std::uint64_t seed) : gen_(seed) {}
    // Portable across standard libraries, unlike std::uniform_real_distribution.
    double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double between(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>((*this)() * n); }

private:
    std::mt19937_64 gen_;
};

}  // namespace

PartialThermalization::PartialThermalization(double l)
    : lambda(require_probability(l, "lambda")) {}

LevelTransformation::LevelTransformation(double d) : delta_e(d) {
    if (!std::isfinite(d)) {
        throw std::domain_error("delta_e must be finite");
    }
}

BistochasticTransformation::BistochasticTransformation(double g)
    : gamma(require_probability(g, "gamma")) {}

const char* step_tag(const ProtocolStep& step) {
    static constexpr const char* kTags[] = {"PT", "LT", "BT"};
    return kTags[step.index()];
}

bool is_branching(const ProtocolStep& step) {
    return std::visit(Overloaded{
                          [](const PartialThermalization& s) {
                              return s.lambda > 0.0 && s.lambda < 1.0;
                          },
                          [](const LevelTransformation&) { return false; },
                          [](const BistochasticTransformation& s) {
                              return s.gamma > 0.0 && s.gamma < 1.0;
                          },
                      },
                      step);
}

Protocol::Protocol(ThermalContext ctx, std::vector<ProtocolStep> steps)
    : ctx_(ctx), steps_(std::move(steps)) {}

std::vector<double> Protocol::energy_trajectory() const {
    std::vector<double> energies;
    energies.reserve(steps_.size() + 1);
    double e = ctx_.e0();
    energies.push_back(e);
    for (const auto& step : steps_) {
        if (const auto* lt = std::get_if<LevelTransformation>(&step)) {
            e += lt->delta_e;
        }
        energies.push_back(e);
    }
    return energies;
}

std::string ValidationReport::to_string() const {
    if (ok()) {
        return "valid";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << "step " << violations[i].step_index << ": " << violations[i].message;
    }
    return os.str();
}

ValidationReport validate(const Protocol& proto) {
    ValidationReport report;
    const auto energies = proto.energy_trajectory();
    const auto& steps = proto.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!std::isfinite(energies[i + 1])) {
            report.violations.push_back({Violation::Kind::NonFiniteEnergy, i,
                                         "energy trajectory is not finite"});
            break;
        }
        const auto* bt = std::get_if<BistochasticTransformation>(&steps[i]);
        if (bt && bt->gamma > 0.0 && std::abs(energies[i]) > kEnergyTolerance) {
            std::ostringstream os;
            os << "BT with gamma=" << bt->gamma << " at nonzero energy " << energies[i];
            report.violations.push_back({Violation::Kind::SwapAwayFromZero, i, os.str()});
        }
    }
    const double last = energies.back();
    if (std::isfinite(last) && std::abs(last - proto.context().e0()) > kEnergyTolerance) {
        std::ostringstream os;
        os << "final energy " << last << " differs from e0 = " << proto.context().e0();
        report.violations.push_back({Violation::Kind::NotCyclic, steps.size(), os.str()});
    }
    return report;
}

void require_valid(const Protocol& proto) {
    const auto report = validate(proto);
    if (!report.ok()) {
        throw std::invalid_argument("invalid protocol: " + report.to_string());
    }
}

Protocol normalize(const Protocol& proto) {
    std::vector<ProtocolStep> out;
    out.reserve(proto.size());
    for (const auto& step : proto.steps()) {
        if (has_no_effect(step)) {
            continue;
        }
        if (!out.empty() && out.back().index() == step.index()) {
            out.back() = compose(out.back(), step);
            if (has_no_effect(out.back())) {
                out.pop_back();
            }
            continue;
        }
        out.push_back(step);
    }
    return Protocol(proto.context(), std::move(out));
}

Protocol build_average_work_protocol(double p_in, double p_out, const ThermalContext& ctx,
                                     std::size_t n_stage2) {
    if (n_stage2 == 0) {
        throw std::domain_error("n_stage2 must be positive");
    }
    const double e_in = energy_of_population(p_in, ctx);
    const double e_out = energy_of_population(p_out, ctx);

    std::vector<ProtocolStep> steps;
    steps.reserve(2 * n_stage2 + 2);
    steps.emplace_back(LevelTransformation(e_in - ctx.e0()));
    double e = e_in;
    for (std::size_t k = 1; k <= n_stage2; ++k) {
        // Grid points are computed directly so the walk ends exactly at e_out.
        const double next = k == n_stage2
                                ? e_out
                                : e_in + (e_out - e_in) * (static_cast<double>(k) / n_stage2);
        steps.emplace_back(LevelTransformation(next - e));
        steps.emplace_back(PartialThermalization(1.0));
        e = next;
    }
    steps.emplace_back(LevelTransformation(ctx.e0() - e_out));
    return Protocol(ctx, std::move(steps));
}

Protocol build_thermalize_once(double e_contact, double lambda, const ThermalContext& ctx) {
    if (!std::isfinite(e_contact)) {
        throw std::domain_error("contact energy must be finite");
    }
    return Protocol(ctx, {LevelTransformation(e_contact - ctx.e0()), PartialThermalization(lambda),
                          LevelTransformation(ctx.e0() - e_contact)});
}

Protocol build_pure_excited_reset(const ThermalContext& ctx) {
    return Protocol(ctx, {LevelTransformation(-ctx.e0()), BistochasticTransformation(1.0),
                          LevelTransformation(ctx.e0())});
}

Protocol random_protocol(std::uint64_t seed, std::size_t max_steps, EnergyRange targets,
                         const ThermalContext& ctx) {
    if (max_steps == 0) {
        throw std::domain_error("max_steps must be at least 1");
    }
    if (!(targets.lo <= targets.hi) || !std::isfinite(targets.lo) || !std::isfinite(targets.hi)) {
        throw std::domain_error("invalid energy range");
    }
    UnitUniform u(seed);
    std::vector<ProtocolStep> steps;
    double e = ctx.e0();
    auto push_lt = [&](double target) {
        steps.emplace_back(LevelTransformation(target - e));
        e = target;
    };

    // One slot is reserved for the closing LT.
    const std::size_t body = u.below(max_steps);
    while (steps.size() < body) {
        const double kind = u();
        const std::size_t room = body - steps.size();
        if (kind < 0.4) {
            // Mix of full, empty and partial thermalizations.
            const double r = u();
            const double lambda = r < 0.15 ? 1.0 : (r < 0.2 ? 0.0 : u());
            steps.emplace_back(PartialThermalization(lambda));
        } else if (kind < 0.8 || room < 2) {
            push_lt(u.between(targets.lo, targets.hi));
        } else {
            push_lt(0.0);
            const double r = u();
            steps.emplace_back(BistochasticTransformation(r < 0.3 ? 1.0 : u()));
        }
    }
    if (e != ctx.e0()) {
        steps.emplace_back(LevelTransformation(ctx.e0() - e));
    }
    return Protocol(ctx, std::move(steps));
}

}  // namespace mcosim
