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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mcosim/protocol.hpp"

namespace mcosim {

/// Malformed protocol document (bad JSON, wrong types, unknown keys).
class ProtocolFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"beta": f, "e0": f, "steps": [{"type": "PT", "lambda": f} | {"type": "LT",
/// "delta_e": f} | {"type": "BT", "gamma": f}]}. Numbers are written with
/// round-trip precision.
std::string protocol_to_json(const Protocol& proto, int indent = 2);

/// Rejects unknown keys and non-numeric parameters with ProtocolFormatError;
/// out-of-range parameters surface as std::domain_error.
Protocol protocol_from_json(const std::string& text);

Protocol load_protocol(const std::filesystem::path& path);
void save_protocol(const Protocol& proto, const std::filesystem::path& path);

}  // namespace mcosim
