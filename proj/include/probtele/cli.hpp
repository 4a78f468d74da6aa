// Copyright 2026 The probtele Authors
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

// Command-line front end: config documents, report serialization and the
// run / sweep / verify subcommands.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "probtele/analysis.hpp"

namespace probtele::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitVerificationFailure = 2;

/// Fixed input used when a config names none.
InputQubit default_input();

/// Parses a config document:
///   {"scheme": "typical", "channels": [{"b2": 0.25, "b_phase": 0}],
///    "input": {"alpha_re": .., "alpha_im": .., "beta_re": .., "beta_im": ..} | "random",
///    "trials": 1000, "seed": 7, "relay_novel": "circuit" | "direct"}
/// Each channel gives exactly one of "a2" / "b2". Throws InvalidConfig naming
/// the offending field.
ScenarioConfig parse_config(const Json& doc);
/// Inverse of parse_config; numbers keep 15 significant digits.
Json config_to_json(const ScenarioConfig& cfg);

/// Shortest decimal form with at most 12 significant digits, '.' separator,
/// independent of the global locale.
std::string format_number(double value);
/// `value` rounded to 12 significant digits.
double round12(double value);

Json report_to_json(const Report& report);
std::string report_table(const Report& report);
std::string report_csv(const Report& report);

struct Grid {
  double start;
  double stop;
  double step;
};
/// "start:stop:step". Throws InvalidConfig.
Grid parse_grid(const std::string& text);
/// Grid points rounded to 12 significant digits; each must lie in (0, 0.5].
std::vector<double> grid_points(const Grid& grid);

inline const std::vector<std::string> kSweepColumns = {
    "b2", "analytic_success", "exact_success", "empirical_success", "mean_success_fidelity"};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace probtele::cli
