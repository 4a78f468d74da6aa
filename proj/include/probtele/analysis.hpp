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

// Exact branch enumeration, closed-form success probabilities and seeded
// Monte Carlo estimation for every scheme.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "probtele/protocols.hpp"

namespace probtele {

/// Each trial draws its own Haar-random input from the trial RNG.
struct RandomInput {
  friend bool operator==(const RandomInput&, const RandomInput&) = default;
};

using InputSpec = std::variant<InputQubit, RandomInput>;

struct ScenarioConfig {
  Scheme scheme = Scheme::Typical;
  /// One channel for single-hop schemes; (ch1, ch2) for relays.
  std::vector<ChannelParams> channels;
  InputSpec input = RandomInput{};
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  /// Realization of the sender-measurement hop inside relays.
  NovelVariant relay_novel = NovelVariant::Circuit;

  /// Throws InvalidConfig.
  void validate() const;
};

bool is_relay(Scheme scheme);
std::size_t channel_count(Scheme scheme);
/// Inverse of scheme_name. Throws InvalidConfig.
Scheme parse_scheme(std::string_view name);

/// Outcome of one complete run of a scenario's scheme.
struct RunSummary {
  /// Outcome labels, hops separated by '|' ("phi+,m0|m0,psi-").
  std::string label;
  double probability;
  bool success;
  double fidelity;
};

RunSummary run_scenario(const ScenarioConfig& cfg, const InputQubit& input, OutcomeSource& source);

struct Branch {
  std::string label;
  double probability;
  bool success;
  /// Absent for zero-probability branches, which have no post-state.
  std::optional<double> fidelity;
};

/// Drives `run` through every outcome sequence depth-first, in lexicographic
/// order of outcome indices.
std::vector<Branch> enumerate_runs(const std::function<RunSummary(OutcomeSource&)>& run);

/// Every branch of cfg's scheme for its fixed input. Throws InvalidConfig for
/// RandomInput.
std::vector<Branch> enumerate_branches(const ScenarioConfig& cfg);
std::vector<Branch> enumerate_branches(const ScenarioConfig& cfg, const InputQubit& input);

/// 2|b|^2 for one hop, 4|d|^2|f|^2 for relays.
double analytic_success(const ScenarioConfig& cfg);

struct OutcomeStat {
  std::string label;
  double exact;
  double empirical;
};

struct Report {
  Scheme scheme;
  std::vector<ChannelParams> channels;
  InputSpec input;
  double exact_success;
  double analytic_success;
  double empirical_success;
  /// Mean fidelity over successful trials; 0 when none succeeded.
  double mean_success_fidelity;
  std::vector<OutcomeStat> per_outcome;
  std::uint64_t trials;
  std::uint64_t seed;
};

/// Counter-based per-trial generator: depends only on (seed, trial).
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Haar-uniform qubit from two independent normals per amplitude.
InputQubit haar_random_input(Rng& rng);

/// Throws InvalidConfig for bad configs and InvariantViolation when a
/// successful trial has fidelity below 1 - 1e-10 or the exact and analytic
/// success probabilities disagree beyond 1e-10. Identical configs give
/// identical reports.
Report monte_carlo(const ScenarioConfig& cfg);

/// k-sigma binomial acceptance band for a frequency over n trials.
double binomial_band(double p, std::uint64_t n, double sigmas = 4.0);

enum class StatVerdict { Pass, Flag, Fail };
/// Pass within 4 sigma, Flag between 4 and 5 sigma, Fail beyond.
StatVerdict binomial_verdict(double exact, double empirical, std::uint64_t n);

}  // namespace probtele
