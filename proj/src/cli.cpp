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

#include "mcosim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcosim/bounds.hpp"
#include "mcosim/characterize.hpp"
#include "mcosim/engine.hpp"
#include "mcosim/paths.hpp"
#include "mcosim/protocol_io.hpp"
#include "mcosim/verify.hpp"

namespace mcosim {
namespace {

using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationFailed {};

struct ContextFlags {
    double beta = 1.0;
    double e0 = 0.0;
    double p_beta = 0.25;
    CLI::Option* e0_opt = nullptr;
    CLI::Option* p_beta_opt = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--beta", beta, "Inverse temperature")->capture_default_str();
        e0_opt = app->add_option("--e0", e0, "Boundary energy of the excited level");
        p_beta_opt = app->add_option("--p-beta", p_beta,
                                     "Gibbs excited population at the boundary (default 0.25)");
        e0_opt->excludes(p_beta_opt);
    }

    bool given() const { return e0_opt->count() > 0 || p_beta_opt->count() > 0; }

    ThermalContext context() const {
        if (e0_opt->count() > 0) return ThermalContext(beta, e0);
        return ThermalContext::from_gibbs_population(beta, p_beta);
    }
};

struct OutputFlags {
    std::string path;
    std::string format = "csv";

    void attach(CLI::App* app, const char* default_format) {
        format = default_format;
        app->add_option("--out", path, "Output file (default stdout)");
        app->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    }
};

// Writes to the --out file if one was given, else to `out`.
class Sink {
public:
    Sink(const std::string& path, std::ostream& out) : os_(&out) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file " + path);
            os_ = &file_;
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::size_t sample_count(double samples) {
    if (!(samples >= 1.0 && samples <= 1e12) || samples != std::floor(samples)) {
        throw std::invalid_argument("--samples must be a positive integer");
    }
    return static_cast<std::size_t>(samples);
}

// ---- simulate -------------------------------------------------------------

struct SimulateFlags {
    ContextFlags ctx;
    OutputFlags output;
    std::string protocol_file;
    std::string builder;
    double p_in = 0.0;
    double p_out = 0.0;
    std::size_t stage2_steps = 100;
    double contact_energy = 0.0;
    double lambda = 1.0;
    double samples = 1e5;
    std::uint64_t seed = 1;
    std::string method = "auto";
    unsigned workers = 0;
    CLI::Option* p_out_opt = nullptr;
    CLI::Option* contact_opt = nullptr;
    CLI::Option* samples_opt = nullptr;
};

Protocol simulate_protocol(const SimulateFlags& f) {
    if (!f.protocol_file.empty()) {
        if (f.ctx.given()) {
            throw UsageError("--e0/--p-beta come from the protocol file; do not pass them");
        }
        auto proto = load_protocol(f.protocol_file);
        require_valid(proto);
        return proto;
    }
    const auto ctx = f.ctx.context();
    if (f.builder == "average-work") {
        if (f.p_out_opt->count() == 0) throw UsageError("average-work needs --p-out");
        return build_average_work_protocol(f.p_in, f.p_out, ctx, f.stage2_steps);
    }
    if (f.builder == "thermalize-once") {
        if (f.contact_opt->count() == 0) throw UsageError("thermalize-once needs --contact-energy");
        return build_thermalize_once(f.contact_energy, f.lambda, ctx);
    }
    if (f.builder == "reset") return build_pure_excited_reset(ctx);
    throw UsageError("simulate needs --protocol or --builder");
}

void cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
    const auto proto = simulate_protocol(f);
    const QubitState initial(f.p_in);

    bool use_mc = f.method == "mc" || (f.method == "auto" && f.samples_opt->count() > 0);
    ExactEvaluation exact{WorkDistribution::point_mass(0.0), initial};
    if (!use_mc) {
        try {
            exact = exact_evaluation(proto, initial);
        } catch (const ResourceError& e) {
            if (f.method == "exact") throw;
            err << "exact evaluation infeasible (" << e.what() << "), using Monte Carlo\n";
            use_mc = true;
        }
    }

    Sink sink(f.output.path, out);
    if (!use_mc) {
        if (f.output.format == "csv") {
            write_csv(*sink, exact.work);
        } else {
            ojson j;
            j["method"] = "exact";
            j["mean"] = exact.work.mean();
            j["variance"] = exact.work.variance();
            j["final_state"] = {{"p_excited", exact.final_state.excited_population()}};
            j["atoms"] = ojson::array();
            for (const auto& a : exact.work.atoms()) j["atoms"].push_back({a.work, a.probability});
            *sink << j.dump(2) << "\n";
        }
        err << "final p_excited = " << g17(exact.final_state.excited_population()) << " (exact)\n";
        return;
    }

    const auto n = sample_count(f.samples);
    const auto mc = monte_carlo(proto, initial, n, f.seed, f.workers);
    if (f.output.format == "csv") {
        write_csv(*sink, mc.empirical);
    } else {
        ojson j;
        j["method"] = "monte_carlo";
        j["n_samples"] = mc.n_samples;
        j["seed"] = f.seed;
        j["mean"] = mc.empirical.mean();
        j["mean_stderr"] = mc.mean_stderr;
        j["variance"] = mc.empirical.variance();
        j["final_state"] = {{"p_excited", mc.final_state.excited_population()},
                            {"stderr", mc.final_state_stderr}};
        j["atoms"] = ojson::array();
        for (const auto& a : mc.empirical.atoms()) j["atoms"].push_back({a.work, a.probability});
        *sink << j.dump(2) << "\n";
    }
    err << "final p_excited = " << g17(mc.final_state.excited_population()) << " +- "
        << g17(mc.final_state_stderr) << ", mean W = " << g17(mc.empirical.mean()) << " +- "
        << g17(mc.mean_stderr) << " (Monte Carlo, n = " << n << ")\n";
}

// ---- figure8 --------------------------------------------------------------

struct Figure8Flags {
    ContextFlags ctx;
    OutputFlags output;
    std::size_t points = 250;
};

void cmd_figure8(const Figure8Flags& f, std::ostream& out) {
    const auto ctx = f.ctx.context();
    const auto rows = figure8_rows(ctx.beta(), ctx.p_beta(), f.points);
    Sink sink(f.output.path, out);
    if (f.output.format == "csv") {
        write_figure8_csv(*sink, rows);
        return;
    }
    ojson j = ojson::array();
    for (const auto& r : rows) {
        j.push_back({{"p_out", r.p_out},
                     {"work_threshold", r.work_threshold},
                     {"prob_pin_1_16", r.prob[0]},
                     {"prob_pin_1_8", r.prob[1]},
                     {"prob_pin_3_16", r.prob[2]}});
    }
    *sink << j.dump(2) << "\n";
}

// ---- verify ---------------------------------------------------------------

struct VerifyFlags {
    OutputFlags output;
    VerifyConfig cfg;
    std::string fault;
};

void cmd_verify(VerifyFlags f, std::ostream& out) {
    if (!f.fault.empty()) f.cfg.inject_fault = f.fault;
    std::vector<CheckResult> results;
    try {
        results = run_verify(f.cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    Sink sink(f.output.path, out);
    if (f.output.format == "json") {
        *sink << verify_report_json(f.cfg, results) << "\n";
    } else {
        *sink << "check,passed,cases,violations,worst_margin\n";
        for (const auto& r : results) {
            *sink << r.name << ',' << (r.passed ? "true" : "false") << ',' << r.cases << ','
                  << r.violations << ',' << g17(r.worst_margin) << '\n';
        }
    }
    if (!all_passed(results)) throw VerificationFailed{};
}

// ---- classify and bounds --------------------------------------------------

struct PairFlags {
    ContextFlags ctx;
    OutputFlags output;
    double p_in = 0.0;
    double p_out = 0.0;

    void attach_pair(CLI::App* app) {
        app->add_option("--p-in", p_in, "Initial excited population")->required();
        app->add_option("--p-out", p_out, "Target excited population")->required();
    }
};

void cmd_classify(const PairFlags& f, std::ostream& out, std::ostream& err) {
    const auto ctx = f.ctx.context();
    const auto verdict = classify_transition(f.p_in, f.p_out, ctx);
    auto j = ojson::parse(verdict_to_json(verdict));
    if (is_achievable(verdict) && !f.output.path.empty()) {
        save_protocol(synthesize_protocol(verdict, f.p_in, f.p_out, ctx), f.output.path);
        j["protocol_file"] = f.output.path;
    }
    out << j.dump(2) << "\n";
    if (const auto* fb = std::get_if<Forbidden>(&verdict)) {
        err << "guaranteed loss >= " << g17(fb->bound.threshold) << " with probability >= "
            << g17(fb->bound.probability) << "\n";
    }
}

void cmd_bounds(const PairFlags& f, std::ostream& out) {
    const auto ctx = f.ctx.context();
    const double pb = ctx.p_beta();
    const auto verdict = classify_transition(f.p_in, f.p_out, ctx);

    struct Row {
        const char* name;
        double threshold;
        double probability;
    };
    std::vector<Row> rows;
    ojson j;
    j["p_in"] = f.p_in;
    j["p_out"] = f.p_out;
    j["p_beta"] = pb;
    j["verdict"] = verdict_name(verdict);
    if (const auto* fb = std::get_if<Forbidden>(&verdict)) {
        j["no_go"] = ojson::parse(bound_to_json(fb->bound));
        rows.push_back({"no_go", fb->bound.threshold, fb->bound.probability});
    }
    if (f.p_in > 0.0 && f.p_in < f.p_out && f.p_out < 0.5) {
        const auto b = lemma_simplecase_bound(f.p_in, f.p_out, ctx);
        j["lemma_simplecase"] = {{"threshold", b.threshold}, {"probability", b.probability}};
        rows.push_back({"lemma_simplecase", b.threshold, b.probability});
    }
    if (f.p_in > 0.0 && f.p_in < pb && pb < f.p_out && f.p_out <= 0.5) {
        const auto b = lemma_path_bound(f.p_in, f.p_out, ctx);
        j["lemma_path"] = {{"threshold", b.threshold}, {"probability", b.probability}};
        rows.push_back({"lemma_path", b.threshold, b.probability});
    }
    Sink sink(f.output.path, out);
    if (f.output.format == "json") {
        *sink << j.dump(2) << "\n";
        return;
    }
    *sink << "bound,threshold,probability\n";
    for (const auto& r : rows) *sink << r.name << ',' << g17(r.threshold) << ',' << g17(r.probability) << '\n';
}

}  // namespace

std::vector<Figure8Row> figure8_rows(double beta, double p_beta, std::size_t points) {
    if (points == 0) throw std::invalid_argument("points must be positive");
    const auto ctx = ThermalContext::from_gibbs_population(beta, p_beta);
    const double pins[3] = {1.0 / 16, 1.0 / 8, 3.0 / 16};
    std::vector<Figure8Row> rows;
    rows.reserve(points);
    for (std::size_t k = 1; k <= points; ++k) {
        const double p_out =
            k == points ? 0.5 : p_beta + (0.5 - p_beta) * static_cast<double>(k) / points;
        Figure8Row row{p_out, 0.0, {}};
        for (int i = 0; i < 3; ++i) {
            const auto b = theorem_main_bound(pins[i], p_out, ctx);
            row.work_threshold = b.threshold;
            row.prob[i] = b.probability;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_figure8_csv(std::ostream& os, const std::vector<Figure8Row>& rows) {
    os << "p_out,work_threshold,prob_pin_1_16,prob_pin_1_8,prob_pin_3_16\n";
    for (const auto& r : rows) {
        os << g17(r.p_out) << ',' << g17(r.work_threshold) << ',' << g17(r.prob[0]) << ','
           << g17(r.prob[1]) << ',' << g17(r.prob[2]) << '\n';
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Work statistics and no-go bounds for memoryless thermal qubit protocols",
                 "mcosim"};
    app.require_subcommand(1);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Work distribution of a protocol");
    sim.ctx.attach(simulate);
    sim.output.attach(simulate, "csv");
    simulate->add_option("--protocol", sim.protocol_file, "Protocol JSON file");
    simulate->add_option("--builder", sim.builder, "Built-in protocol")
        ->check(CLI::IsMember({"average-work", "thermalize-once", "reset"}));
    simulate->add_option("--p-in", sim.p_in, "Initial excited population")->capture_default_str();
    sim.p_out_opt = simulate->add_option("--p-out", sim.p_out, "Target population (average-work)");
    simulate->add_option("--stage2-steps", sim.stage2_steps, "Stage-II steps (average-work)")
        ->capture_default_str();
    sim.contact_opt =
        simulate->add_option("--contact-energy", sim.contact_energy, "Contact energy (thermalize-once)");
    simulate->add_option("--lambda", sim.lambda, "Thermalization probability (thermalize-once)")
        ->capture_default_str();
    sim.samples_opt = simulate->add_option("--samples", sim.samples, "Monte Carlo samples, e.g. 1e6");
    simulate->add_option("--seed", sim.seed, "Monte Carlo seed")->capture_default_str();
    simulate->add_option("--method", sim.method, "exact, mc, or auto")
        ->check(CLI::IsMember({"auto", "exact", "mc"}))
        ->capture_default_str();
    simulate->add_option("--workers", sim.workers, "Monte Carlo threads (0 = all cores)");
    simulate->get_option("--protocol")->excludes(simulate->get_option("--builder"));

    Figure8Flags fig;
    auto* figure8 = app.add_subcommand("figure8", "Lost-work threshold and probability curves");
    fig.ctx.attach(figure8);
    fig.output.attach(figure8, "csv");
    figure8->add_option("--points", fig.points, "Grid size over (p_beta, 1/2]")->capture_default_str();

    VerifyFlags ver;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    ver.output.attach(verify, "json");
    verify->add_option("--cases", ver.cfg.cases, "Randomized instances per property")
        ->capture_default_str();
    verify->add_option("--seed", ver.cfg.seed, "Suite seed")->capture_default_str();
    verify->add_option("--inject-fault", ver.fault, "Break the named check (test mode)");
    verify->add_option("--check", ver.cfg.only, "Run only these checks");

    PairFlags cls;
    auto* classify = app.add_subcommand("classify", "Decide whether p_in -> p_out is achievable");
    cls.ctx.attach(classify);
    cls.attach_pair(classify);
    classify->add_option("--out", cls.output.path, "Write the witness protocol here");

    PairFlags bnd;
    auto* bounds = app.add_subcommand("bounds", "Evaluate the applicable bounds");
    bnd.ctx.attach(bounds);
    bnd.output.attach(bounds, "json");
    bnd.attach_pair(bounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) cmd_simulate(sim, out, err);
        if (*figure8) cmd_figure8(fig, out);
        if (*verify) cmd_verify(ver, out);
        if (*classify) cmd_classify(cls, out, err);
        if (*bounds) cmd_bounds(bnd, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const VerificationFailed&) {
        err << "verification failed\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace mcosim
