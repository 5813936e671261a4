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

#include "mcosim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "mcosim/bounds.hpp"
#include "mcosim/engine.hpp"
#include "mcosim/paths.hpp"

namespace mcosim {
namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double between(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>((*this)() * n); }

private:
    std::mt19937_64 gen_;
};

struct Tally {
    std::size_t cases = 0;
    std::size_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();

    void record(double margin, double tol) {
        ++cases;
        worst = std::min(worst, margin);
        if (!(margin >= -tol)) ++violations;
    }

    CheckResult result(std::string name, std::string detail = {}) const {
        return {std::move(name), violations == 0 && cases > 0, cases, violations, worst,
                std::move(detail)};
    }
};

std::string format(const char* fmt, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

ThermalContext random_context(Rng& r, double e0_lo = 0.0) {
    const double beta = r.between(0.5, 2.0);
    return ThermalContext(beta, r.between(e0_lo, 2.5) / beta);
}

// [e_a - e_start, G] followed by `pieces` stage-II pieces, each ending in G.
// A swap piece drops the level to zero, swaps, then moves and thermalizes.
std::vector<PathElement> random_thermalizing_body(Rng& r, const ThermalContext& ctx, double e_start,
                                                  std::size_t pieces, bool swaps, double& e) {
    const double scale = 3.0 / ctx.beta();
    e = e_start;
    std::vector<PathElement> els;
    auto push = [&](double d, Choice c) {
        els.push_back({d, c});
        e += d;
    };
    push(r.between(-scale, scale), Choice::Gibbs);
    for (std::size_t k = 0; k < pieces; ++k) {
        if (swaps && (k == 0 || r() < 0.4)) {
            push(-e, Choice::Swap);
        }
        push(r.between(-scale, scale), Choice::Gibbs);
    }
    return els;
}

Protocol staged_protocol(double p_in, double p_out, const ThermalContext& ctx, int stages) {
    std::vector<ProtocolStep> steps;
    double e = ctx.e0();
    for (int j = 1; j <= stages; ++j) {
        const double p = p_in + (p_out - p_in) * j / stages;
        const double target = energy_of_population(j == stages ? p_out : p, ctx);
        steps.emplace_back(LevelTransformation(target - e));
        steps.emplace_back(PartialThermalization(1.0));
        e = target;
    }
    steps.emplace_back(LevelTransformation(ctx.e0() - e));
    return Protocol(ctx, std::move(steps));
}

std::uint64_t check_seed(std::uint64_t seed, std::size_t index) {
    return seed + 0x9E3779B97F4A7C15ull * (index + 1);
}

}  // namespace

Protocol transition_witness(double p_in, double p_out, const ThermalContext& ctx, int kind) {
    if (!(p_in > 0.0 && p_in < 1.0 && p_out > 0.0 && p_out < 1.0) || p_in == p_out) {
        throw std::domain_error("witness needs distinct populations in (0, 1)");
    }
    const double e_out = energy_of_population(p_out, ctx);
    switch (kind) {
        case 0: return build_thermalize_once(e_out, 1.0, ctx);
        case 1:
        case 2: {
            // Overshoot the contact energy and thermalize only partly.
            const double off = (kind == 1 ? 0.5 : 2.0) / ctx.beta();
            const double e_c = e_out + (p_out > p_in ? -off : off);
            const double lambda = (p_out - p_in) / (gibbs_population(e_c, ctx) - p_in);
            return build_thermalize_once(e_c, std::clamp(lambda, 0.0, 1.0), ctx);
        }
        case 3: return staged_protocol(p_in, p_out, ctx, 3);
        case 4: return build_average_work_protocol(p_in, p_out, ctx, 4);
        case 5: return build_average_work_protocol(p_in, p_out, ctx, 64);
        default: throw std::domain_error("unknown witness kind");
    }
}

CheckResult check_hoeffding(bool fault) {
    Tally t;
    for (int n = 1; n <= 200; ++n) {
        for (int k = 1; k <= 9; ++k) {
            const double p = 0.05 * k;
            const double bound = hoeffding_tail(n, p) - (fault ? 1.0 : 0.0);
            t.record(bound - binomial_upper_tail(n, p), 1e-15);
        }
    }
    return t.result("hoeffding");
}

CheckResult check_variance_area(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    std::size_t with_swaps = 0;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r);
        double e = 0.0;
        auto els = random_thermalizing_body(r, ctx, ctx.e0(), 1 + r.below(8), i % 3 == 0, e);
        els.push_back({ctx.e0() - e, Choice::Identity});
        const Path path = shrink(Path(ctx, ctx.e0(), std::move(els)));
        with_swaps += path.has_swap();
        const auto stages = decompose_stages(path);
        const double q = gibbs_population(stages.e_a, ctx);
        const double var = path_work_distribution(stages.stage2, QubitState(q)).variance();
        const double area = area_between(stages.stage2, q).total_area;
        const double bound = (fault ? 0.0 : 2.0 / ctx.beta()) * area;
        if (bound > 0.0) worst_ratio = std::max(worst_ratio, var / bound);
        t.record(bound - var, fault ? 0.0 : 1e-9);
    }
    return t.result("variance_area", "paths with swaps: " + std::to_string(with_swaps) +
                                         format(", max Var/((2/beta)A) = %.6g", worst_ratio));
}

CheckResult check_stage_identities(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    std::size_t paths = 0;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r);
        const auto proto = random_protocol(seed + i, 10, {-3.0 / ctx.beta(), 3.0 / ctx.beta()}, ctx);
        double worst = 0.0;
        for (const auto& p : enumerate_paths(proto)) {
            const auto s = decompose_stages(shrink(p));
            worst = std::max(worst, std::abs(s.delta_f1 + s.delta_f2 + s.delta_f3));
            ++paths;
        }
        t.record(1e-10 - worst - (fault ? 1.0 : 0.0), 0.0);
    }
    return t.result("stage_identities", "paths: " + std::to_string(paths));
}

CheckResult check_mean_area(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r);
        const double e_a = r.between(-3.0, 3.0) / ctx.beta();
        double e = 0.0;
        auto els = random_thermalizing_body(r, ctx, e_a, r.below(10), false, e);
        const Path stage2(ctx, e_a, std::move(els));
        const double q = gibbs_population(e_a, ctx);
        const double mean = path_work_distribution(stage2, QubitState(q)).mean();
        const double area = area_between(stage2, q).total_area;
        const double predicted = -gibbs_integral(e_a, stage2.e_end(), ctx) - (fault ? -area : area);
        t.record(1e-9 - std::abs(mean - predicted), 0.0);
    }
    return t.result("mean_area");
}

CheckResult check_shrink_preserves_law(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r);
        const auto proto = random_protocol(seed + i, 10, {-3.0 / ctx.beta(), 3.0 / ctx.beta()}, ctx);
        const QubitState in(r());
        double worst = 0.0;
        for (const auto& p : enumerate_paths(proto)) {
            const auto raw = path_work_distribution(p, in);
            const auto shrunk = path_work_distribution(shrink(p), in);
            worst = std::max(worst, total_variation(raw, shrunk));
        }
        t.record(1e-12 - worst - (fault ? 1.0 : 0.0), 0.0);
    }
    return t.result("shrink_preserves_law");
}

CheckResult check_lemma_w1(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r, 0.05);
        const double p_in = r.between(0.01, 0.99) * ctx.p_beta();
        const double total = r.between(-4.0, 4.0) / ctx.beta();
        // Monotone stage I: same-signed pieces, thermalized at the end.
        const std::size_t pieces = 1 + r.below(4);
        std::vector<PathElement> els;
        double left = total;
        for (std::size_t k = 0; k + 1 < pieces; ++k) {
            const double d = left * r.between(0.0, 0.6);
            els.push_back({d, Choice::Identity});
            left -= d;
        }
        els.push_back({left, Choice::Gibbs});
        const Path stage1(ctx, ctx.e0(), std::move(els));
        // Raising: condition on occupied. Lowering: on empty.
        const bool occupied = total > 0.0;
        const double p_designated = occupied ? p_in : 1.0 - p_in;
        const auto dist = path_work_distribution(stage1, QubitState(occupied ? 1.0 : 0.0));
        const double w = dist.atoms().front().work;
        const double limit = -gibbs_integral(ctx.e0(), stage1.e_end(), ctx) -
                             (fault ? 1.0 + std::abs(total) : 0.0);
        const bool deterministic = dist.atoms().size() == 1;
        t.record(deterministic && p_designated >= p_in ? limit - w : -1.0, 1e-12);
    }
    return t.result("lemma_w1");
}

CheckResult check_lemma_w2(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r);
        const double e_a = r.between(-3.0, 3.0) / ctx.beta();
        double e = 0.0;
        auto els = random_thermalizing_body(r, ctx, e_a, r.below(12), false, e);
        const Path stage2(ctx, e_a, std::move(els));
        const double eps = std::exp(r.between(std::log(1e-3), std::log(20.0))) / ctx.beta();
        const auto dist = path_work_distribution(stage2, QubitState(gibbs_population(e_a, ctx)));
        const double measured = dist.prob_at_most(-gibbs_integral(e_a, stage2.e_end(), ctx) + eps);
        const double bound = lemma_w2_probability(eps, ctx) + (fault ? 1.0 : 0.0);
        t.record(measured - bound, 1e-12);
    }
    return t.result("lemma_w2");
}

CheckResult check_lemma_w3(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r, 0.05);
        const double q_out = ctx.p_beta() + r.between(0.001, 1.0) * (0.5 - ctx.p_beta());
        const double e_b = energy_of_population(q_out, ctx);
        const std::size_t pieces = 1 + r.below(4);
        std::vector<PathElement> els;
        double left = ctx.e0() - e_b;
        for (std::size_t k = 0; k + 1 < pieces; ++k) {
            const double d = left * r.between(0.0, 0.6);
            els.push_back({d, Choice::Identity});
            left -= d;
        }
        els.push_back({left, Choice::Identity});
        const Path stage3(ctx, e_b, std::move(els));
        const auto dist = path_work_distribution(stage3, QubitState::excited());
        const double limit = -gibbs_integral(e_b, ctx.e0(), ctx) - epsilon_iii(q_out, ctx) -
                             (fault ? 1e-6 : 0.0);
        const double w = dist.atoms().front().work;
        // The lemma holds with equality on these paths; allow rounding only.
        t.record(dist.atoms().size() == 1 ? limit - w : -1.0, 1e-12 * (1.0 + std::abs(w)));
    }
    return t.result("lemma_w3");
}

CheckResult check_bound_vs_exact(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cases; ++i) {
        const double beta = r.between(0.5, 2.0);
        const auto ctx = ThermalContext::from_gibbs_population(beta, r.between(0.1, 0.45));
        const double pb = ctx.p_beta();
        double p_in, p_out;
        NoGoBound bound{};
        if (i % 2 == 0) {
            p_in = r.between(0.02, 0.98) * pb;
            p_out = pb + r.between(0.02, 1.0) * (0.5 - pb);
            bound = theorem_main_bound(p_in, p_out, ctx);
        } else {
            p_in = pb + r.between(0.02, 0.98) * (1.0 - pb);
            p_out = r.between(0.02, 0.98) * pb;
            bound = theorem_rev_bound(p_in, p_out, ctx);
        }
        const auto proto = transition_witness(p_in, p_out, ctx, static_cast<int>(r.below(kWitnessKinds)));
        const auto ev = exact_evaluation(proto, QubitState(p_in));
        const double measured = ev.work.prob_at_most(-bound.threshold);
        const double claimed = bound.probability + (fault ? 1.0 : 0.0);
        const bool reaches = std::abs(ev.final_state.excited_population() - p_out) <= 1e-12;
        min_ratio = std::min(min_ratio, measured / bound.probability);
        t.record(reaches ? measured - claimed : -1.0, 0.0);
    }
    return t.result("bound_vs_exact", format("min measured/bound = %.6g", min_ratio));
}

CheckResult check_reverse_markov(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const std::size_t m = 1 + r.below(6);
        std::vector<double> y(m), w(m);
        double total = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double u = r();
            y[k] = u < 0.1 ? 0.0 : (u < 0.2 ? 1.0 : r());
            w[k] = r() + 1e-3;
            total += w[k];
        }
        const double a = r.between(0.01, 0.99);
        double mean = 0.0, above = 0.0, below = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double p = w[k] / total;
            mean += p * y[k];
            if (y[k] > a) above += p;
            if (y[k] < a) below += p;
        }
        const auto rm = reverse_markov_lower(std::clamp(mean, 0.0, 1.0), a);
        const double shift = fault ? 1.0 : 0.0;
        t.record(std::min(above - rm.upper_tail, below - rm.lower_tail) - shift, 1e-12);
    }
    return t.result("reverse_markov");
}

CheckResult check_cantelli(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    for (std::size_t i = 0; i < cases; ++i) {
        const std::size_t m = 1 + r.below(6);
        std::vector<double> x(m), w(m);
        double total = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            x[k] = r.between(-5.0, 5.0);
            w[k] = r() + 1e-3;
            total += w[k];
        }
        double mean = 0.0;
        for (std::size_t k = 0; k < m; ++k) mean += w[k] / total * x[k];
        double var = 0.0;
        for (std::size_t k = 0; k < m; ++k) var += w[k] / total * (x[k] - mean) * (x[k] - mean);
        const double delta = r.between(0.01, 5.0);
        double exact = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (x[k] <= mean + delta) exact += w[k] / total;
        }
        t.record(exact - cantelli_lower(delta, var) - (fault ? 1.0 : 0.0), 1e-12);
    }
    return t.result("cantelli");
}

CheckResult check_swap_segment_grid(bool fault) {
    Tally t;
    for (const double beta : {0.5, 1.0, 2.0}) {
        const ThermalContext ctx(beta, 0.0);
        for (int i = 1; i <= 100; ++i) {
            const double q = 0.5 * i / 101.0;
            const double d1 = energy_of_population(q, ctx);
            for (int j = 1; j <= 100; ++j) {
                const double d2 = 5.0 * j / (100.0 * beta);
                const double lhs = 2.0 * q * (1.0 - q) * d1 * d2;
                const double rhs = (2.0 / beta) * (0.5 - q) * d2 - (fault ? 1.0 : 0.0);
                t.record(rhs - lhs, 1e-12 * std::abs(rhs));
            }
        }
    }
    return t.result("swap_segment_grid");
}

CheckResult check_gibbs_crossing(std::uint64_t seed, std::size_t cases, bool fault) {
    Rng r(seed);
    Tally t;
    std::size_t segments = 0;
    for (std::size_t i = 0; i < cases; ++i) {
        const auto ctx = random_context(r);
        const auto proto = random_protocol(seed + i, 10, {-3.0 / ctx.beta(), 3.0 / ctx.beta()}, ctx);
        const double p_in = r();
        std::size_t crossings = 0;
        for (const auto& p : enumerate_paths(proto)) {
            const Path s = shrink(p);
            const auto report = area_between(s, p_in);
            for (const auto& seg : report.segments) {
                // Only segments that begin right after a thermalization start on the curve.
                if (seg.index == 0 || s.elements()[seg.index - 1].choice != Choice::Gibbs) continue;
                auto probe = seg;
                if (fault) probe.level_q = gibbs_population(0.5 * (seg.e_from + seg.e_to), ctx);
                if (std::abs(seg.e_to - seg.e_from) > 1e-9 || !fault) {
                    crossings += crosses_gibbs_curve(probe, ctx);
                    ++segments;
                }
            }
        }
        t.record(crossings == 0 ? 0.0 : -static_cast<double>(crossings), 0.0);
    }
    return t.result("gibbs_crossing", "segments checked: " + std::to_string(segments));
}

const std::vector<std::string>& verify_check_names() {
    static const std::vector<std::string> names = {
        "hoeffding", "variance_area", "stage_identities", "mean_area", "shrink_preserves_law",
        "lemma_w1", "lemma_w2", "lemma_w3", "bound_vs_exact", "reverse_markov",
        "cantelli", "swap_segment_grid", "gibbs_crossing"};
    return names;
}

std::vector<CheckResult> run_verify(const VerifyConfig& cfg) {
    const auto& names = verify_check_names();
    auto known = [&](const std::string& n) {
        return std::find(names.begin(), names.end(), n) != names.end();
    };
    if (cfg.inject_fault && !known(*cfg.inject_fault)) {
        throw std::invalid_argument("unknown check for fault injection: " + *cfg.inject_fault);
    }
    for (const auto& n : cfg.only) {
        if (!known(n)) throw std::invalid_argument("unknown check: " + n);
    }
    if (cfg.cases == 0) throw std::invalid_argument("cases must be positive");

    using Runner = std::function<CheckResult(std::uint64_t, std::size_t, bool)>;
    const std::vector<Runner> runners = {
        [](std::uint64_t, std::size_t, bool f) { return check_hoeffding(f); },
        check_variance_area,
        check_stage_identities,
        check_mean_area,
        check_shrink_preserves_law,
        check_lemma_w1,
        check_lemma_w2,
        check_lemma_w3,
        check_bound_vs_exact,
        check_reverse_markov,
        check_cantelli,
        [](std::uint64_t, std::size_t, bool f) { return check_swap_segment_grid(f); },
        check_gibbs_crossing,
    };
    std::vector<CheckResult> out;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (!cfg.only.empty() &&
            std::find(cfg.only.begin(), cfg.only.end(), names[k]) == cfg.only.end()) {
            continue;
        }
        const bool fault = cfg.inject_fault && *cfg.inject_fault == names[k];
        out.push_back(runners[k](check_seed(cfg.seed, k), cfg.cases, fault));
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const auto& c) { return c.passed; });
}

std::string verify_report_json(const VerifyConfig& cfg, const std::vector<CheckResult>& results,
                               int indent) {
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["cases"] = cfg.cases;
    if (cfg.inject_fault) j["inject_fault"] = *cfg.inject_fault;
    j["passed"] = all_passed(results);
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : results) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"cases", c.cases},
                               {"violations", c.violations},
                               {"worst_margin", c.worst_margin},
                               {"detail", c.detail}});
    }
    return j.dump(indent);
}

}  // namespace mcosim
