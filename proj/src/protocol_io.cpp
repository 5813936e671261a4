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

#include "mcosim/protocol_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mcosim {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ProtocolFormatError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double number_field(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ProtocolFormatError(std::string("missing '") + key + "' in " + where);
    }
    if (!it->is_number()) {
        throw ProtocolFormatError(std::string("'") + key + "' must be a number in " + where);
    }
    return it->get<double>();
}

ProtocolStep parse_step(const json& s, std::size_t index) {
    const std::string where = "steps[" + std::to_string(index) + "]";
    if (!s.is_object()) {
        throw ProtocolFormatError(where + " must be an object");
    }
    const auto type = s.find("type");
    if (type == s.end() || !type->is_string()) {
        throw ProtocolFormatError(where + " needs a string 'type'");
    }
    const auto tag = type->get<std::string>();
    if (tag == "PT") {
        reject_unknown_keys(s, {"type", "lambda"}, where);
        return PartialThermalization(number_field(s, "lambda", where));
    }
    if (tag == "LT") {
        reject_unknown_keys(s, {"type", "delta_e"}, where);
        return LevelTransformation(number_field(s, "delta_e", where));
    }
    if (tag == "BT") {
        reject_unknown_keys(s, {"type", "gamma"}, where);
        return BistochasticTransformation(number_field(s, "gamma", where));
    }
    throw ProtocolFormatError(where + " has unknown type '" + tag + "'");
}

}  // namespace

std::string protocol_to_json(const Protocol& proto, int indent) {
    json steps = json::array();
    for (const auto& step : proto.steps()) {
        json s;
        s["type"] = step_tag(step);
        if (const auto* pt = std::get_if<PartialThermalization>(&step)) {
            s["lambda"] = pt->lambda;
        } else if (const auto* lt = std::get_if<LevelTransformation>(&step)) {
            s["delta_e"] = lt->delta_e;
        } else {
            s["gamma"] = std::get<BistochasticTransformation>(step).gamma;
        }
        steps.push_back(std::move(s));
    }
    json doc;
    doc["beta"] = proto.context().beta();
    doc["e0"] = proto.context().e0();
    doc["steps"] = std::move(steps);
    return doc.dump(indent);
}

Protocol protocol_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ProtocolFormatError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ProtocolFormatError("protocol document must be a JSON object");
    }
    reject_unknown_keys(doc, {"beta", "e0", "steps"}, "protocol");
    const ThermalContext ctx(number_field(doc, "beta", "protocol"),
                             number_field(doc, "e0", "protocol"));
    const auto steps_it = doc.find("steps");
    if (steps_it == doc.end() || !steps_it->is_array()) {
        throw ProtocolFormatError("protocol needs a 'steps' array");
    }
    std::vector<ProtocolStep> steps;
    steps.reserve(steps_it->size());
    for (std::size_t i = 0; i < steps_it->size(); ++i) {
        steps.push_back(parse_step((*steps_it)[i], i));
    }
    return Protocol(ctx, std::move(steps));
}

Protocol load_protocol(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ProtocolFormatError("cannot open protocol file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return protocol_from_json(buf.str());
}

void save_protocol(const Protocol& proto, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write protocol file " + path.string());
    }
    out << protocol_to_json(proto) << '\n';
}

}  // namespace mcosim
