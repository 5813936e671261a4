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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcosim/bounds.hpp"
#include "mcosim/characterize.hpp"
#include "mcosim/cli.hpp"
#include "mcosim/engine.hpp"
#include "mcosim/paths.hpp"
#include "mcosim/protocol_io.hpp"
#include "mcosim/verify.hpp"

namespace py = pybind11;
using namespace mcosim;

namespace {

py::object from_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::vector<std::pair<double, double>> atom_pairs(const WorkDistribution& d) {
    std::vector<std::pair<double, double>> out;
    out.reserve(d.atoms().size());
    for (const auto& a : d.atoms()) out.emplace_back(a.work, a.probability);
    return out;
}

ProtocolStep step_from_py(const py::handle& h) {
    if (py::isinstance<PartialThermalization>(h)) return h.cast<PartialThermalization>();
    if (py::isinstance<LevelTransformation>(h)) return h.cast<LevelTransformation>();
    if (py::isinstance<BistochasticTransformation>(h)) return h.cast<BistochasticTransformation>();
    throw py::type_error("protocol steps must be PT, LT or BT");
}

py::list steps_to_py(const Protocol& p) {
    py::list out;
    for (const auto& s : p.steps()) out.append(std::visit([](const auto& x) { return py::cast(x); }, s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Work statistics and no-go bounds for memoryless thermal qubit protocols";

    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<ProtocolFormatError>(m, "ProtocolFormatError", PyExc_ValueError);

    py::class_<ThermalContext>(m, "ThermalContext")
        .def(py::init<double, double>(), py::arg("beta"), py::arg("e0"))
        .def_static("from_gibbs_population", &ThermalContext::from_gibbs_population, py::arg("beta"),
                    py::arg("p_beta"))
        .def_property_readonly("beta", &ThermalContext::beta)
        .def_property_readonly("e0", &ThermalContext::e0)
        .def_property_readonly("p_beta", &ThermalContext::p_beta)
        .def("__repr__", [](const ThermalContext& c) {
            return "ThermalContext(beta=" + std::to_string(c.beta()) + ", e0=" + std::to_string(c.e0()) + ")";
        });

    m.def("gibbs_population", &gibbs_population, py::arg("energy"), py::arg("ctx"));
    m.def("energy_of_population", &energy_of_population, py::arg("p"), py::arg("ctx"));
    m.def("gibbs_integral", &gibbs_integral, py::arg("e_from"), py::arg("e_to"), py::arg("ctx"));
    m.def(
        "free_energy",
        [](double p, double energy, const ThermalContext& ctx) { return free_energy(QubitState(p), energy, ctx); },
        py::arg("p_excited"), py::arg("energy"), py::arg("ctx"));
    m.def("epsilon_iii", &epsilon_iii, py::arg("q_out"), py::arg("ctx"));
    m.def("epsilon_iii_tilde", &epsilon_iii_tilde, py::arg("q_out"), py::arg("ctx"));

    py::class_<PartialThermalization>(m, "PT")
        .def(py::init<double>(), py::arg("lambda_"))
        .def_readonly("lambda_", &PartialThermalization::lambda);
    py::class_<LevelTransformation>(m, "LT")
        .def(py::init<double>(), py::arg("delta_e"))
        .def_readonly("delta_e", &LevelTransformation::delta_e);
    py::class_<BistochasticTransformation>(m, "BT")
        .def(py::init<double>(), py::arg("gamma"))
        .def_readonly("gamma", &BistochasticTransformation::gamma);

    py::class_<Protocol>(m, "Protocol")
        .def(py::init([](const ThermalContext& ctx, const py::iterable& steps) {
                 std::vector<ProtocolStep> v;
                 for (const auto& h : steps) v.push_back(step_from_py(h));
                 return Protocol(ctx, std::move(v));
             }),
             py::arg("ctx"), py::arg("steps"))
        .def_property_readonly("context", &Protocol::context)
        .def_property_readonly("steps", &steps_to_py)
        .def("__len__", &Protocol::size)
        .def("to_json", [](const Protocol& p) { return protocol_to_json(p); })
        .def_static("from_json", &protocol_from_json, py::arg("text"))
        .def("violations", [](const Protocol& p) {
            std::vector<std::string> out;
            for (const auto& v : validate(p).violations) out.push_back(v.message);
            return out;
        });

    m.def("build_average_work_protocol", &build_average_work_protocol, py::arg("p_in"), py::arg("p_out"),
          py::arg("ctx"), py::arg("n_stage2"));
    m.def("build_thermalize_once", &build_thermalize_once, py::arg("e_contact"), py::arg("lambda_"),
          py::arg("ctx"));
    m.def("build_pure_excited_reset", &build_pure_excited_reset, py::arg("ctx"));

    py::class_<WorkDistribution>(m, "WorkDistribution")
        .def_property_readonly("atoms", &atom_pairs)
        .def_property_readonly("mean", &WorkDistribution::mean)
        .def_property_readonly("variance", &WorkDistribution::variance)
        .def("prob_at_most", &WorkDistribution::prob_at_most, py::arg("threshold"));

    m.def(
        "exact_work_distribution",
        [](const Protocol& p, double p_in) { return exact_work_distribution(p, QubitState(p_in)); },
        py::arg("protocol"), py::arg("p_in"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "final_state",
        [](const Protocol& p, double p_in) { return final_state(p, QubitState(p_in)).excited_population(); },
        py::arg("protocol"), py::arg("p_in"));
    m.def(
        "monte_carlo",
        [](const Protocol& p, double p_in, std::size_t n, std::uint64_t seed, unsigned workers) {
            MonteCarloResult r = [&] {
                py::gil_scoped_release release;
                return monte_carlo(p, QubitState(p_in), n, seed, workers);
            }();
            py::dict d;
            d["distribution"] = r.empirical;
            d["final_p_excited"] = r.final_state.excited_population();
            d["final_stderr"] = r.final_state_stderr;
            d["mean_stderr"] = r.mean_stderr;
            d["n_samples"] = r.n_samples;
            return d;
        },
        py::arg("protocol"), py::arg("p_in"), py::arg("n_samples"), py::arg("seed"), py::arg("workers") = 0);

    m.def(
        "classify_transition",
        [](double p_in, double p_out, const ThermalContext& ctx) {
            return from_json(verdict_to_json(classify_transition(p_in, p_out, ctx)));
        },
        py::arg("p_in"), py::arg("p_out"), py::arg("ctx"));
    m.def(
        "synthesize_protocol",
        [](double p_in, double p_out, const ThermalContext& ctx) {
            return synthesize_protocol(classify_transition(p_in, p_out, ctx), p_in, p_out, ctx);
        },
        py::arg("p_in"), py::arg("p_out"), py::arg("ctx"));
    m.def("mixing_coefficient", &mixing_coefficient, py::arg("p_in"), py::arg("p_out"), py::arg("ctx"));

    auto bound = [&m](const char* name, NoGoBound (*fn)(double, double, const ThermalContext&)) {
        m.def(
            name, [fn](double p_in, double p_out, const ThermalContext& ctx) {
                return from_json(bound_to_json(fn(p_in, p_out, ctx)));
            },
            py::arg("p_in"), py::arg("p_out"), py::arg("ctx"));
    };
    bound("theorem_main_bound", &theorem_main_bound);
    bound("theorem_rev_bound", &theorem_rev_bound);
    bound("theorem_same_side", &theorem_same_side);
    m.def("hoeffding_tail", &hoeffding_tail, py::arg("n"), py::arg("p"));
    m.def("binomial_upper_tail", &binomial_upper_tail, py::arg("n"), py::arg("p"));
    m.def(
        "lemma_simplecase_bound",
        [](double p_in, double p_out, const ThermalContext& ctx) {
            const auto b = lemma_simplecase_bound(p_in, p_out, ctx);
            return std::make_pair(b.threshold, b.probability);
        },
        py::arg("p_in"), py::arg("p_out"), py::arg("ctx"));

    m.def(
        "figure8_rows",
        [](double beta, double p_beta, std::size_t points) {
            std::vector<std::tuple<double, double, double, double, double>> out;
            for (const auto& r : figure8_rows(beta, p_beta, points)) {
                out.emplace_back(r.p_out, r.work_threshold, r.prob[0], r.prob[1], r.prob[2]);
            }
            return out;
        },
        py::arg("beta") = 1.0, py::arg("p_beta") = 0.25, py::arg("points") = 250);

    m.def(
        "run_verify",
        [](std::size_t cases, std::uint64_t seed, std::vector<std::string> only,
           std::optional<std::string> inject_fault) {
            VerifyConfig cfg;
            cfg.cases = cases;
            cfg.seed = seed;
            cfg.only = std::move(only);
            cfg.inject_fault = std::move(inject_fault);
            std::vector<CheckResult> results;
            {
                py::gil_scoped_release release;
                results = run_verify(cfg);
            }
            return from_json(verify_report_json(cfg, results, -1));
        },
        py::arg("cases") = 500, py::arg("seed") = VerifyConfig{}.seed, py::arg("only") = std::vector<std::string>{},
        py::arg("inject_fault") = py::none());
}
