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
#include <iosfwd>
#include <vector>

namespace mcosim {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitVerification = 3 };

/// One grid point of the lost-work figure: threshold eps_III(q*)/2 and the
/// main-theorem probability for p_in = 1/16, 1/8, 3/16.
struct Figure8Row {
    double p_out;
    double work_threshold;
    double prob[3];
};

/// p_out = p_beta + k (1/2 - p_beta) / points for k = 1..points, so the grid
/// ends exactly at 1/2. Needs p_beta in (3/16, 1/2) and points >= 1.
std::vector<Figure8Row> figure8_rows(double beta, double p_beta, std::size_t points);

/// `p_out,work_threshold,prob_pin_1_16,prob_pin_1_8,prob_pin_3_16`, 17
/// significant digits.
void write_figure8_csv(std::ostream& os, const std::vector<Figure8Row>& rows);

/// Entry point of the `mcosim` executable. Subcommands: simulate, figure8,
/// verify, classify, bounds. Returns one of the ExitCode values.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcosim
