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


#include <map>

#include "probtele/analysis.hpp"
#include "probtele/errors.hpp"
#include "test_util.hpp"

namespace probtele {
namespace {

using testing::find_branch;
using testing::fixed_config;
using testing::random_input;

const InputQubit kInput = InputQubit::from_amplitudes(0.6, 0.8);

double success_mass(const std::vector<Branch>& branches) {
  double p = 0.0;
  for (const Branch& b : branches) {
    if (b.success) p += b.probability;
  }
  return p;
}

double total_mass(const std::vector<Branch>& branches) {
  double p = 0.0;
  for (const Branch& b : branches) p += b.probability;
  return p;
}

constexpr Scheme kAllSchemes[] = {Scheme::Typical, Scheme::NovelDirect, Scheme::NovelCircuit,
                                  Scheme::RelayAssistantKnows, Scheme::RelayEndpointsKnow};

TEST_SUITE("analysis") {

TEST_CASE("config validation and scheme names") {
  ScenarioConfig cfg = fixed_config(Scheme::Typical, {}, kInput);
  CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
  cfg.channels = {ChannelParams::from_b2(0.2)};
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
  cfg.trials = 1;
  CHECK_NOTHROW(cfg.validate());
  cfg.scheme = Scheme::RelayEndpointsKnow;
  CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
  for (Scheme s : kAllSchemes) CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK_THROWS_AS(parse_scheme("teleport"), InvalidConfig);
}

TEST_CASE("typical enumeration reproduces the branch table") {
  const auto branches = enumerate_branches(fixed_config(Scheme::Typical, {ChannelParams::from_b2(0.25)}, kInput));
  REQUIRE(branches.size() == 8);
  const std::map<std::string, double> expected = {
      {"phi+,m0", 0.125}, {"phi+,m1", 0.09}, {"phi-,m0", 0.125}, {"phi-,m1", 0.09},
      {"psi+,m0", 0.125}, {"psi+,m1", 0.16}, {"psi-,m0", 0.125}, {"psi-,m1", 0.16}};
  for (const auto& [label, p] : expected) {
    const Branch& b = find_branch(branches, label);
    CHECK(std::abs(b.probability - p) <= 1e-12);
    CHECK(b.success == (label.back() == '0'));
    if (b.success) CHECK(*b.fidelity >= 1 - 1e-10);
  }
  // Lexicographic outcome order.
  CHECK(branches.front().label == "phi+,m0");
  CHECK(branches.back().label == "psi-,m1");
}

TEST_CASE("novel enumerations") {
  const ChannelParams ch = ChannelParams::from_b2(0.25, 1.0);
  const auto direct = enumerate_branches(fixed_config(Scheme::NovelDirect, {ch}, kInput));
  REQUIRE(direct.size() == 5);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(direct[i].probability - 0.125) <= 1e-12);
  CHECK(std::abs(direct[4].probability - 0.5) <= 1e-12);
  CHECK(direct[4].label == "M4");

  const auto circuit = enumerate_branches(fixed_config(Scheme::NovelCircuit, {ch}, kInput));
  REQUIRE(circuit.size() == 5);
  CHECK(circuit[0].label == "m0,phi+");
  CHECK(circuit[4].label == "m1");
}

TEST_CASE("novel failure probability is input independent") {
  Rng rng(19);
  const ChannelParams ch = ChannelParams::from_b2(0.15, 0.3);
  for (int t = 0; t < 10; ++t) {
    const InputQubit in = random_input(rng);
    for (Scheme s : {Scheme::NovelDirect, Scheme::NovelCircuit}) {
      const auto b = enumerate_branches(fixed_config(s, {ch}, in));
      CHECK(std::abs((1 - success_mass(b)) - (1 - 2 * 0.15)) <= 1e-10);
    }
  }
}

TEST_CASE("oracle agreement and bookkeeping for every scheme") {
  Rng rng(77);
  for (Scheme s : kAllSchemes) {
    for (int t = 0; t < 20; ++t) {
      std::vector<ChannelParams> chans;
      for (std::size_t k = 0; k < channel_count(s); ++k) chans.push_back(testing::random_channel_params(rng));
      const ScenarioConfig cfg = fixed_config(s, chans, random_input(rng));
      const auto branches = enumerate_branches(cfg);
      CHECK(std::abs(total_mass(branches) - 1.0) <= 1e-12);
      CHECK(std::abs(success_mass(branches) - analytic_success(cfg)) <= 1e-10);
      for (const Branch& b : branches) {
        if (b.success) CHECK(*b.fidelity >= 1 - 1e-10);
      }
    }
  }
}

TEST_CASE("relay probabilities") {
  const ChannelParams d = ChannelParams::from_b2(0.3), f = ChannelParams::from_b2(0.2);
  for (Scheme s : {Scheme::RelayAssistantKnows, Scheme::RelayEndpointsKnow}) {
    const ScenarioConfig cfg = fixed_config(s, {d, f}, kInput);
    CHECK(analytic_success(cfg) == doctest::Approx(0.24).epsilon(1e-15));
    const auto branches = enumerate_branches(cfg);
    CHECK(std::abs(success_mass(branches) - 0.24) <= 1e-10);

    const ScenarioConfig maximal =
        fixed_config(s, {ChannelParams::maximal(), ChannelParams::maximal()}, kInput);
    const auto all = enumerate_branches(maximal);
    CHECK(success_mass(all) == doctest::Approx(1.0).epsilon(1e-12));
    for (const Branch& b : all) {
      if (!b.success) CHECK(b.probability == 0.0);
    }
  }
  // Relay labels join the hops with '|'.
  const auto ak = enumerate_branches(fixed_config(Scheme::RelayAssistantKnows, {d, f}, kInput));
  CHECK(find_branch(ak, "phi+,m0|m0,phi+").success);
  CHECK_FALSE(find_branch(ak, "phi+,m1").success);
}

TEST_CASE("relay success factorizes over hops") {
  Rng rng(55);
  for (int t = 0; t < 10; ++t) {
    const ChannelParams d = testing::random_channel_params(rng), f = testing::random_channel_params(rng);
    const InputQubit in = random_input(rng);
    const double hop_typ_d = success_mass(enumerate_branches(fixed_config(Scheme::Typical, {d}, in)));
    const double hop_nov_d = success_mass(enumerate_branches(fixed_config(Scheme::NovelCircuit, {d}, in)));
    const double hop_typ_f = success_mass(enumerate_branches(fixed_config(Scheme::Typical, {f}, in)));
    const double hop_nov_f = success_mass(enumerate_branches(fixed_config(Scheme::NovelCircuit, {f}, in)));
    const double ak = success_mass(enumerate_branches(fixed_config(Scheme::RelayAssistantKnows, {d, f}, in)));
    const double ek = success_mass(enumerate_branches(fixed_config(Scheme::RelayEndpointsKnow, {d, f}, in)));
    CHECK(std::abs(ak - hop_typ_d * hop_nov_f) <= 1e-12);
    CHECK(std::abs(ek - hop_nov_d * hop_typ_f) <= 1e-12);
  }
}

TEST_CASE("circuit and direct realizations agree branch by branch") {
  Rng rng(91);
  for (int t = 0; t < 20; ++t) {
    const InputQubit in = random_input(rng);
    const ChannelParams ch = testing::random_channel_params(rng);
    for (std::size_t i = 0; i < 5; ++i) {
      ScriptedOutcomes direct_script({i});
      ScriptedOutcomes circuit_script(i < 4 ? std::vector<std::size_t>{0, i} : std::vector<std::size_t>{1});
      const TeleportationRecord d = run_novel_direct(in, ch, direct_script);
      const TeleportationRecord c = run_novel_circuit(in, ch, circuit_script);
      CHECK(std::abs(d.branch_probability - c.branch_probability) <= 1e-10);
      CHECK(d.success == c.success);
      CHECK(testing::overlap(d.output.amplitudes(), c.output.amplitudes()) >= 1 - 1e-10);
    }
  }
}

TEST_CASE("random input cannot be enumerated") {
  ScenarioConfig cfg = fixed_config(Scheme::Typical, {ChannelParams::from_b2(0.2)}, kInput);
  cfg.input = RandomInput{};
  CHECK_THROWS_AS(enumerate_branches(cfg), InvalidConfig);
}

TEST_CASE("monte carlo") {
  ScenarioConfig cfg = fixed_config(Scheme::Typical, {ChannelParams::from_b2(0.25)}, kInput);
  cfg.trials = 100000;
  cfg.seed = 42;
  const Report r = monte_carlo(cfg);
  CHECK(r.exact_success == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(r.empirical_success - 0.5) <= 4 * std::sqrt(0.25 / 1e5));
  CHECK(r.mean_success_fidelity >= 1 - 1e-10);
  double exact_sum = 0.0;
  for (const OutcomeStat& s : r.per_outcome) {
    exact_sum += s.exact;
    CHECK(binomial_verdict(s.exact, s.empirical, cfg.trials) != StatVerdict::Fail);
  }
  CHECK(std::abs(exact_sum - 1.0) <= 1e-12);

  SUBCASE("reproducible") {
    const Report again = monte_carlo(cfg);
    CHECK(again.empirical_success == r.empirical_success);
    CHECK(again.mean_success_fidelity == r.mean_success_fidelity);
    REQUIRE(again.per_outcome.size() == r.per_outcome.size());
    for (std::size_t i = 0; i < r.per_outcome.size(); ++i) {
      CHECK(again.per_outcome[i].label == r.per_outcome[i].label);
      CHECK(again.per_outcome[i].empirical == r.per_outcome[i].empirical);
    }
  }

  SUBCASE("single trial") {
    cfg.trials = 1;
    const double e = monte_carlo(cfg).empirical_success;
    CHECK((e == 0.0 || e == 1.0));
  }
}

TEST_CASE("monte carlo with random inputs") {
  ScenarioConfig cfg;
  cfg.scheme = Scheme::RelayEndpointsKnow;
  cfg.channels = {ChannelParams::from_b2(0.3, 0.4), ChannelParams::from_b2(0.2)};
  cfg.input = RandomInput{};
  cfg.trials = 5000;
  cfg.seed = 9;
  const Report r = monte_carlo(cfg);
  CHECK(r.exact_success == doctest::Approx(0.24).epsilon(1e-10));
  CHECK(binomial_verdict(0.24, r.empirical_success, cfg.trials) != StatVerdict::Fail);
  double exact_sum = 0.0;
  for (const OutcomeStat& s : r.per_outcome) exact_sum += s.exact;
  CHECK(std::abs(exact_sum - 1.0) <= 1e-12);
}

TEST_CASE("random-input exact values average the per-trial enumerations") {
  for (Scheme s : kAllSchemes) {
    ScenarioConfig cfg;
    cfg.scheme = s;
    cfg.channels = {ChannelParams::from_b2(0.27, 0.8)};
    if (is_relay(s)) cfg.channels.push_back(ChannelParams::from_b2(0.12, -2.0));
    cfg.input = RandomInput{};
    cfg.trials = 150;
    cfg.seed = 4;
    const Report r = monte_carlo(cfg);

    // Oracle: replay each trial's input and enumerate it directly.
    std::map<std::string, double> mean;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
      Rng rng = trial_rng(cfg.seed, t);
      for (const Branch& b : enumerate_branches(cfg, haar_random_input(rng))) {
        mean[b.label] += b.probability / static_cast<double>(cfg.trials);
      }
    }
    CHECK(r.per_outcome.size() == mean.size());
    for (const OutcomeStat& o : r.per_outcome) {
      REQUIRE(mean.count(o.label) == 1);
      CHECK(std::abs(o.exact - mean[o.label]) <= 1e-12);
    }
  }
}

TEST_CASE("per-trial generators depend only on seed and index") {
  Rng a = trial_rng(5, 100), b = trial_rng(5, 100), c = trial_rng(5, 101), d = trial_rng(6, 100);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("haar inputs are normalized and spread over the sphere") {
  Rng rng(3);
  double mean_p0 = 0.0;
  constexpr int kN = 20000;
  for (int t = 0; t < kN; ++t) {
    const InputQubit q = haar_random_input(rng);
    CHECK(std::norm(q.alpha()) + std::norm(q.beta()) == doctest::Approx(1.0).epsilon(1e-12));
    mean_p0 += std::norm(q.alpha());
  }
  // |alpha|^2 is uniform on [0, 1] for Haar qubits: mean 1/2, sd 1/sqrt(12 N).
  CHECK(std::abs(mean_p0 / kN - 0.5) <= 4.0 / std::sqrt(12.0 * kN));
}

TEST_CASE("binomial verdicts") {
  const std::uint64_t n = 100000;
  const double sigma = std::sqrt(0.25 / n);
  CHECK(binomial_band(0.5, n, 4.0) == doctest::Approx(4 * sigma));
  CHECK(binomial_verdict(0.5, 0.5 + 3.9 * sigma, n) == StatVerdict::Pass);
  CHECK(binomial_verdict(0.5, 0.5 + 4.5 * sigma, n) == StatVerdict::Flag);
  CHECK(binomial_verdict(0.5, 0.5 - 5.5 * sigma, n) == StatVerdict::Fail);
  CHECK(binomial_verdict(1.0, 1.0, n) == StatVerdict::Pass);
  CHECK(binomial_verdict(0.0, 1e-5, n) == StatVerdict::Fail);
}

}  // TEST_SUITE

}  // namespace
}  // namespace probtele
