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

#include "probtele/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "probtele/errors.hpp"

namespace probtele {

namespace {

constexpr std::uint64_t kChunkTrials = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RunSummary summarize(const TeleportationRecord& r) {
  return {outcome_text(r), r.branch_probability, r.success, r.fidelity};
}

RunSummary summarize(const RelayRecord& r) {
  std::string label = outcome_text(r.hop1);
  if (r.hop2) label += "|" + outcome_text(*r.hop2);
  return {std::move(label), r.branch_probability, r.success, r.fidelity};
}

InputQubit fixed_input(const ScenarioConfig& cfg) {
  if (const auto* q = std::get_if<InputQubit>(&cfg.input)) return *q;
  throw InvalidConfig("branch enumeration requires a fixed input, not a random one");
}

// Per-label tallies of one block of trials.
struct Tally {
  std::uint64_t successes = 0;
  double fidelity_sum = 0.0;
  double min_success_fidelity = 1.0;
  std::map<std::string, std::uint64_t> counts;
  // Sums of |alpha|^2, |beta|^2, Re and Im of conj(alpha) beta over the inputs.
  std::array<double, 4> moments{};

  void merge(const Tally& other) {
    successes += other.successes;
    fidelity_sum += other.fidelity_sum;
    min_success_fidelity = std::min(min_success_fidelity, other.min_success_fidelity);
    for (const auto& [k, v] : other.counts) counts[k] += v;
    for (std::size_t i = 0; i < moments.size(); ++i) moments[i] += other.moments[i];
  }
};

std::array<double, 4> moment_row(const InputQubit& q) {
  const Complex c = std::conj(q.alpha()) * q.beta();
  return {std::norm(q.alpha()), std::norm(q.beta()), c.real(), c.imag()};
}

// Every branch probability is a quadratic form <psi|Q|psi> in the input (the
// relay's hop-2 normalization cancels against hop 1's branch weight). With
// Q = [[q0, x + iy], [x - iy, q1]] the value is
//   q0 |alpha|^2 + q1 |beta|^2 + 2x Re(conj(alpha) beta) - 2y Im(conj(alpha) beta),
// so four generic probe inputs determine each branch's coefficients.
struct QuadraticBranch {
  std::string label;
  bool success = false;
  Eigen::Vector4d coeffs = Eigen::Vector4d::Zero();
};

std::vector<QuadraticBranch> quadratic_branches(const ScenarioConfig& cfg) {
  Eigen::Matrix4d design;
  std::vector<std::vector<Branch>> probes;
  for (int k = 0; k < 4; ++k) {
    Rng rng = trial_rng(0x5eed0fbeefULL, static_cast<std::uint64_t>(k));
    const InputQubit probe = haar_random_input(rng);
    const auto row = moment_row(probe);
    design.row(k) << row[0], row[1], 2.0 * row[2], -2.0 * row[3];
    probes.push_back(enumerate_branches(cfg, probe));
  }
  std::vector<QuadraticBranch> out;
  for (const auto& probe : probes) {
    for (const Branch& b : probe) {
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const QuadraticBranch& q) { return q.label == b.label; });
      if (!seen) out.push_back({b.label, b.success, Eigen::Vector4d::Zero()});
    }
  }
  const auto solver = design.fullPivLu();
  for (QuadraticBranch& q : out) {
    Eigen::Vector4d p = Eigen::Vector4d::Zero();
    for (int k = 0; k < 4; ++k) {
      for (const Branch& b : probes[static_cast<std::size_t>(k)]) {
        if (b.label == q.label) p(k) = b.probability;
      }
    }
    q.coeffs = solver.solve(p);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

bool is_relay(Scheme scheme) {
  return scheme == Scheme::RelayAssistantKnows || scheme == Scheme::RelayEndpointsKnow;
}

std::size_t channel_count(Scheme scheme) { return is_relay(scheme) ? 2 : 1; }

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::Typical, Scheme::NovelDirect, Scheme::NovelCircuit,
                   Scheme::RelayAssistantKnows, Scheme::RelayEndpointsKnow}) {
    if (scheme_name(s) == name) return s;
  }
  throw InvalidConfig("unknown scheme '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
  if (channels.size() != channel_count(scheme)) {
    throw InvalidConfig("scheme " + std::string(scheme_name(scheme)) + " needs " +
                        std::to_string(channel_count(scheme)) + " channel(s), got " +
                        std::to_string(channels.size()));
  }
  if (trials < 1) throw InvalidConfig("trials must be at least 1");
}

// ---------------------------------------------------------------------------
// Running and enumeration

RunSummary run_scenario(const ScenarioConfig& cfg, const InputQubit& input, OutcomeSource& source) {
  cfg.validate();
  switch (cfg.scheme) {
    case Scheme::Typical: return summarize(run_typical(input, cfg.channels[0], source));
    case Scheme::NovelDirect: return summarize(run_novel_direct(input, cfg.channels[0], source));
    case Scheme::NovelCircuit: return summarize(run_novel_circuit(input, cfg.channels[0], source));
    case Scheme::RelayAssistantKnows:
    case Scheme::RelayEndpointsKnow: {
      const RelayScenario scenario = cfg.scheme == Scheme::RelayAssistantKnows
                                         ? RelayScenario::AssistantKnows
                                         : RelayScenario::EndpointsKnow;
      return summarize(run_relay(input, cfg.channels[0], cfg.channels[1], scenario, source,
                                 RelayOptions{.novel = cfg.relay_novel}));
    }
  }
  throw InvalidConfig("unknown scheme");
}

std::vector<Branch> enumerate_runs(const std::function<RunSummary(OutcomeSource&)>& run) {
  std::vector<std::pair<std::vector<std::size_t>, Branch>> found;
  std::vector<std::vector<std::size_t>> pending = {{}};
  while (!pending.empty()) {
    std::vector<std::size_t> prefix = std::move(pending.back());
    pending.pop_back();

    ScriptedOutcomes source(prefix);
    Branch branch;
    try {
      const RunSummary s = run(source);
      branch = {s.label, s.probability, s.success, s.fidelity};
    } catch (const ZeroProbabilityBranch& z) {
      branch = {z.label(), 0.0, false, std::nullopt};
    }
    // Steps past the prefix took outcome 0; queue their siblings.
    const auto& choices = source.choices();
    const auto& arities = source.arities();
    for (std::size_t step = prefix.size(); step < choices.size(); ++step) {
      for (std::size_t alt = 1; alt < arities[step]; ++alt) {
        std::vector<std::size_t> next(choices.begin(), choices.begin() + step);
        next.push_back(alt);
        pending.push_back(std::move(next));
      }
    }
    found.emplace_back(choices, std::move(branch));
  }
  std::sort(found.begin(), found.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Branch> out;
  out.reserve(found.size());
  for (auto& [path, b] : found) out.push_back(std::move(b));
  return out;
}

std::vector<Branch> enumerate_branches(const ScenarioConfig& cfg, const InputQubit& input) {
  cfg.validate();
  return enumerate_runs([&](OutcomeSource& s) { return run_scenario(cfg, input, s); });
}

std::vector<Branch> enumerate_branches(const ScenarioConfig& cfg) {
  return enumerate_branches(cfg, fixed_input(cfg));
}

double analytic_success(const ScenarioConfig& cfg) {
  cfg.validate();
  if (is_relay(cfg.scheme)) return 4.0 * cfg.channels[0].b2() * cfg.channels[1].b2();
  return 2.0 * cfg.channels[0].b2();
}

// ---------------------------------------------------------------------------
// Monte Carlo

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632be59bd9b4e019ULL)));
}

InputQubit haar_random_input(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(2);
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  v /= v.norm();
  return InputQubit::from_amplitudes(v(0), v(1));
}

double binomial_band(double p, std::uint64_t n, double sigmas) {
  return sigmas * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

StatVerdict binomial_verdict(double exact, double empirical, std::uint64_t n) {
  const double dev = std::abs(exact - empirical);
  // Degenerate p: any deviation beyond rounding is a real failure.
  if (binomial_band(exact, n, 1.0) == 0.0) return dev <= 1e-12 ? StatVerdict::Pass : StatVerdict::Fail;
  if (dev <= binomial_band(exact, n, 4.0)) return StatVerdict::Pass;
  if (dev <= binomial_band(exact, n, 5.0)) return StatVerdict::Flag;
  return StatVerdict::Fail;
}

Report monte_carlo(const ScenarioConfig& cfg) {
  cfg.validate();
  const bool random_input = std::holds_alternative<RandomInput>(cfg.input);

  // Fixed input: one exact enumeration serves every trial.
  std::vector<Branch> fixed_branches;
  if (!random_input) fixed_branches = enumerate_branches(cfg);

  const std::uint64_t chunks = (cfg.trials + kChunkTrials - 1) / kChunkTrials;
  Tally total;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    Tally chunk;
    const std::uint64_t begin = c * kChunkTrials;
    const std::uint64_t end = std::min(cfg.trials, begin + kChunkTrials);
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng rng = trial_rng(cfg.seed, t);
      const InputQubit input = random_input ? haar_random_input(rng) : std::get<InputQubit>(cfg.input);
      SampledOutcomes source(rng);
      const RunSummary run = run_scenario(cfg, input, source);
      ++chunk.counts[run.label];
      if (run.success) {
        ++chunk.successes;
        chunk.fidelity_sum += run.fidelity;
        chunk.min_success_fidelity = std::min(chunk.min_success_fidelity, run.fidelity);
      }
      if (random_input) {
        const auto row = moment_row(input);
        for (std::size_t i = 0; i < row.size(); ++i) chunk.moments[i] += row[i];
      }
    }
    total.merge(chunk);
  }

  const double n = static_cast<double>(cfg.trials);
  std::vector<OutcomeStat> per_outcome;
  double exact_success = 0.0;
  if (random_input) {
    const Eigen::Vector4d mean(total.moments[0] / n, total.moments[1] / n, 2.0 * total.moments[2] / n,
                               -2.0 * total.moments[3] / n);
    for (const QuadraticBranch& q : quadratic_branches(cfg)) {
      const double exact = q.coeffs.dot(mean);
      per_outcome.push_back({q.label, exact, 0.0});
      if (q.success) exact_success += exact;
    }
  } else {
    for (const Branch& b : fixed_branches) {
      per_outcome.push_back({b.label, b.probability, 0.0});
      if (b.success) exact_success += b.probability;
    }
  }
  for (OutcomeStat& s : per_outcome) {
    const auto it = total.counts.find(s.label);
    if (it != total.counts.end()) s.empirical = static_cast<double>(it->second) / n;
  }
  for (const auto& [label, count] : total.counts) {
    const bool known = std::any_of(per_outcome.begin(), per_outcome.end(),
                                   [&](const OutcomeStat& s) { return s.label == label; });
    if (!known) throw InvariantViolation("sampled outcome '" + label + "' is not an enumerated branch");
  }

  const double analytic = analytic_success(cfg);
  if (std::abs(exact_success - analytic) > kStateTol) {
    throw InvariantViolation("exact success " + std::to_string(exact_success) +
                             " disagrees with analytic " + std::to_string(analytic));
  }
  if (total.successes > 0 && total.min_success_fidelity < 1.0 - kStateTol) {
    throw InvariantViolation("a successful trial reached fidelity " +
                             std::to_string(total.min_success_fidelity));
  }

  return Report{
      .scheme = cfg.scheme,
      .channels = cfg.channels,
      .input = cfg.input,
      .exact_success = exact_success,
      .analytic_success = analytic,
      .empirical_success = static_cast<double>(total.successes) / n,
      .mean_success_fidelity =
          total.successes > 0 ? total.fidelity_sum / static_cast<double>(total.successes) : 0.0,
      .per_outcome = std::move(per_outcome),
      .trials = cfg.trials,
      .seed = cfg.seed,
  };
}

}  // namespace probtele
