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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "mcosim/cli.hpp"
#include "mcosim/paths.hpp"
#include "mcosim/protocol_io.hpp"

using namespace mcosim;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mcosim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("mcosim_cli_test_" + name);
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("usage errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"nope"}).code == kExitUsage);
    CHECK(run({"classify", "--p-in", "0.1"}).code == kExitUsage);
    CHECK(run({"classify", "--p-in", "0.1", "--p-out", "0.3", "--e0", "1", "--p-beta", "0.25"})
              .code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"verify", "--check", "nope"}).code == kExitUsage);
}

TEST_CASE("classify") {
    auto r = run({"classify", "--p-in", "0.1", "--p-out", "0.3", "--p-beta", "0.25"});
    REQUIRE(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "forbidden");
    CHECK(j["bound"]["regime"] == "A6");
    CHECK(r.err.find("guaranteed loss") != std::string::npos);

    r = run({"classify", "--p-in", "0.3", "--p-out", "0.26", "--p-beta", "0.25"});
    j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "mixing");
    CHECK(j["lambda"].get<double>() == doctest::Approx(0.8).epsilon(1e-12));

    const auto file = temp_file("pure.json");
    r = run({"classify", "--p-in", "1", "--p-out", "0.05", "--out", file.string()});
    REQUIRE(r.code == kExitOk);
    j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "pure_excited");
    const auto proto = load_protocol(file);
    CHECK(final_state(proto, QubitState::excited()).excited_population() ==
          doctest::Approx(0.05).epsilon(1e-12));
    fs::remove(file);

    CHECK(run({"classify", "--p-in", "1.5", "--p-out", "0.3"}).code == kExitValidation);
}

TEST_CASE("bounds") {
    const auto r = run({"bounds", "--p-in", "0.1", "--p-out", "0.3", "--beta", "1", "--p-beta", "0.25"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["no_go"]["regime"] == "A6");
    CHECK(j["lemma_simplecase"]["probability"].get<double>() ==
          doctest::Approx(0.03 * -std::expm1(-0.08)).epsilon(1e-12));
    CHECK(j.contains("lemma_path"));
    const auto csv = run({"bounds", "--p-in", "0.1", "--p-out", "0.3", "--format", "csv"});
    CHECK(csv.out.rfind("bound,threshold,probability\n", 0) == 0);
}

TEST_CASE("figure8") {
    const auto r = run({"figure8"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("p_out,work_threshold,prob_pin_1_16,prob_pin_1_8,prob_pin_3_16\n", 0) == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() >= 100);
    const auto ctx = ThermalContext::from_gibbs_population(1.0, 0.25);
    double prev = 0.0;
    for (const auto& row : rows) {
        REQUIRE(row.size() == 5);
        CHECK(row[0] > 0.25);
        CHECK(row[0] <= 0.5);
        CHECK(row[1] == epsilon_iii(0.5 * (row[0] + 0.25), ctx) / 2);
        CHECK(row[1] > prev);
        prev = row[1];
        CHECK(row[3] == 2 * row[2]);
        CHECK(row[4] == 3 * row[2]);
    }
    CHECK(rows.back()[0] == 0.5);
    CHECK(run({"figure8", "--points", "120", "--format", "json"}).code == kExitOk);
    CHECK(run({"figure8", "--p-beta", "0.1"}).code == kExitValidation);
}

TEST_CASE("simulate") {
    const auto empty = temp_file("empty.json");
    {
        std::ofstream(empty) << R"({"beta": 1, "e0": 1.0986122886681098, "steps": []})";
    }
    auto r = run({"simulate", "--protocol", empty.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out == "work,probability\n0,1\n");
    fs::remove(empty);

    r = run({"simulate", "--builder", "thermalize-once", "--contact-energy", "0", "--lambda", "1",
             "--e0", "1.0986122886681098"});
    REQUIRE(r.code == kExitOk);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == doctest::Approx(-std::log(3.0)));
    CHECK(rows[0][1] == doctest::Approx(0.5));

    const std::vector<std::string> mc = {"simulate", "--builder", "thermalize-once",
                                         "--contact-energy", "0", "--samples", "1e6", "--seed", "7"};
    const auto a = run(mc);
    const auto b = run(mc);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.err.find("Monte Carlo") != std::string::npos);

    CHECK(run({"simulate", "--builder", "reset", "--samples", "1.5"}).code == kExitValidation);
    CHECK(run({"simulate"}).code == kExitUsage);
    CHECK(run({"simulate", "--protocol", "/nonexistent/x.json"}).code == kExitValidation);

    const auto bad = temp_file("bad.json");
    {
        std::ofstream(bad) << R"({"beta": 1, "e0": 1, "steps": [{"type": "LT", "delta_e": 0.5}]})";
    }
    r = run({"simulate", "--protocol", bad.string()});
    CHECK(r.code == kExitValidation);
    CHECK_FALSE(r.err.empty());
    fs::remove(bad);

    r = run({"simulate", "--builder", "average-work", "--p-in", "0.1", "--p-out", "0.3",
             "--stage2-steps", "20", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out)["method"] == "exact");
}

TEST_CASE("verify") {
    auto r = run({"verify", "--cases", "10", "--check", "hoeffding", "--check", "cantelli"});
    CHECK(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["checks"].size() == 2);
    r = run({"verify", "--cases", "10", "--check", "hoeffding", "--check", "cantelli",
             "--inject-fault", "cantelli", "--format", "csv"});
    CHECK(r.code == kExitVerification);
    CHECK(r.out.find("hoeffding,true") != std::string::npos);
    CHECK(r.out.find("cantelli,false") != std::string::npos);
}
