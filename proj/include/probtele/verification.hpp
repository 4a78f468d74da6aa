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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "probtele/analysis.hpp"

namespace probtele {

enum class VerifyLevel { Fast, Full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Fast;
  std::uint64_t seed = 20260101;
  std::uint64_t trials = 100000;
  /// Check the literal A(a,b) block (no conjugate on the (1,1) entry) in place
  /// of the repaired one. A complex-b channel then fails unitarity.
  bool literal_a = false;
};

struct CheckResult {
  std::string name;
  StatVerdict verdict;
  std::string detail;
};

/// Random admissible channel: |b|^2 uniform in [0.01, 0.5], phase of b
/// uniform in [0, 2 pi).
ChannelParams random_channel(Rng& rng);

std::vector<CheckResult> run_verification(const VerifyOptions& options);

/// True when no check failed (flags allowed).
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace probtele
