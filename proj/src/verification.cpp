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

#include "probtele/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "probtele/errors.hpp"

namespace probtele {

namespace {

constexpr int kRandomChannels = 100;
constexpr int kRandomConfigs = 20;

const Scheme kAllSchemes[] = {Scheme::Typical, Scheme::NovelDirect, Scheme::NovelCircuit,
                              Scheme::RelayAssistantKnows, Scheme::RelayEndpointsKnow};

// A check body returns an empty string on success, otherwise a failure detail.
CheckResult run_check(std::string name, const std::function<std::string()>& body) {
  try {
    std::string failure = body();
    if (failure.empty()) return {std::move(name), StatVerdict::Pass, "ok"};
    return {std::move(name), StatVerdict::Fail, std::move(failure)};
  } catch (const std::exception& e) {
    return {std::move(name), StatVerdict::Fail, std::string("exception: ") + e.what()};
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::vector<ChannelParams> channel_sample(Rng& rng, int count) {
  std::vector<ChannelParams> out;
  // Fixed members first: maximal, real, purely imaginary b.
  out.push_back(ChannelParams::maximal());
  out.push_back(ChannelParams::from_b2(0.25));
  out.push_back(ChannelParams::from_b2(0.25, std::numbers::pi / 2));
  while (static_cast<int>(out.size()) < count) out.push_back(random_channel(rng));
  return out;
}

ScenarioConfig config_for(Scheme scheme, Rng& rng) {
  ScenarioConfig cfg;
  cfg.scheme = scheme;
  for (std::size_t i = 0; i < channel_count(scheme); ++i) cfg.channels.push_back(random_channel(rng));
  cfg.input = haar_random_input(rng);
  return cfg;
}

CMatrix block_for(const ChannelParams& ch, bool literal) {
  return literal ? matrix_A_literal(ch) : matrix_A(ch).matrix();
}

// ---------------------------------------------------------------------------
// Algebraic checks

CheckResult check_bell_basis() {
  return run_check("bell basis orthonormal", [] {
    const auto bell = bell_basis();
    CMatrix gram(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) gram(i, j) = bell[i].amplitudes().dot(bell[j].amplitudes());
    }
    const double dev = (gram - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff();
    return dev <= kAlgebraTol ? std::string() : "Gram deviation " + fmt_double(dev);
  });
}

CheckResult check_unitarity(const std::vector<ChannelParams>& channels, bool literal) {
  return run_check("A, U_F, U_S unitary (incl. complex b)", [&] {
    for (const ChannelParams& ch : channels) {
      const CMatrix a = block_for(ch, literal);
      double worst = unitarity_defect(a);
      CMatrix us = CMatrix::Zero(8, 8);
      for (std::size_t k = 0; k < 4; ++k) {
        const CMatrix f = u_f_blocks(k, a);
        worst = std::max(worst, unitarity_defect(f));
        if (k == 0) {
          us.block(0, 0, 4, 4) = f;
          us.block(4, 4, 4, 4) = f;
        }
      }
      worst = std::max(worst, unitarity_defect(us));
      if (!(worst <= kAlgebraTol)) {
        return "channel b=" + fmt_double(ch.b().real()) + "+" + fmt_double(ch.b().imag()) +
               "i: defect " + fmt_double(worst);
      }
    }
    return std::string();
  });
}

CheckResult check_us_blocks(const std::vector<ChannelParams>& channels) {
  return run_check("U_S diagonal blocks equal U_F^0", [&] {
    for (const ChannelParams& ch : channels) {
      const CMatrix us = u_s(ch).matrix();
      const CMatrix f0 = u_f(0, ch).matrix();
      if (us.block(0, 0, 4, 4) != f0 || us.block(4, 4, 4, 4) != f0 ||
          !us.block(0, 4, 4, 4).isZero(0.0) || !us.block(4, 0, 4, 4).isZero(0.0)) {
        return std::string("block mismatch");
      }
    }
    return std::string();
  });
}

CheckResult check_completeness(const std::vector<ChannelParams>& channels) {
  return run_check("Kraus completeness (incl. complex b)", [&] {
    for (const ChannelParams& ch : channels) {
      const double d = completeness_defect(measurement_operators(ch).operators());
      if (!(d <= kAlgebraTol)) return "defect " + fmt_double(d);
    }
    return std::string();
  });
}

CheckResult check_povm_input_independence(Rng& rng) {
  return run_check("POVM distribution independent of input", [&] {
    for (int c = 0; c < 10; ++c) {
      const ChannelParams ch = random_channel(rng);
      const KrausSet kraus = measurement_operators(ch);
      const double q = ch.b2() / 2.0;
      const std::vector<double> expected = {q, q, q, q, 1.0 - 2.0 * ch.b2()};
      const std::size_t pair[] = {0, 1};
      for (int i = 0; i < 10; ++i) {
        const auto dist = outcome_distribution(prepare_total_state(haar_random_input(rng), ch), kraus, pair);
        for (std::size_t k = 0; k < 5; ++k) {
          if (std::abs(dist[k] - expected[k]) > kStateTol) {
            return "outcome M" + std::to_string(k) + " deviates by " + fmt_double(dist[k] - expected[k]);
          }
        }
      }
    }
    return std::string();
  });
}

CheckResult check_enumeration(Scheme scheme, Rng& rng) {
  return run_check("enumeration oracle: " + std::string(scheme_name(scheme)), [&] {
    for (int i = 0; i < kRandomConfigs; ++i) {
      const ScenarioConfig cfg = config_for(scheme, rng);
      double total = 0.0;
      double success = 0.0;
      for (const Branch& b : enumerate_branches(cfg)) {
        total += b.probability;
        if (b.success) {
          success += b.probability;
          if (!b.fidelity || std::abs(*b.fidelity - 1.0) > kStateTol) {
            return "success branch " + b.label + " has fidelity " +
                   (b.fidelity ? fmt_double(*b.fidelity) : std::string("n/a"));
          }
        }
      }
      if (std::abs(total - 1.0) > kAlgebraTol) return "probabilities sum to " + fmt_double(total);
      const double analytic = analytic_success(cfg);
      if (std::abs(success - analytic) > kStateTol) {
        return "success mass " + fmt_double(success) + " vs analytic " + fmt_double(analytic);
      }
    }
    return std::string();
  });
}

CheckResult check_circuit_equivalence(Rng& rng) {
  return run_check("circuit realizes the POVM", [&] {
    for (int i = 0; i < kRandomConfigs; ++i) {
      const ChannelParams ch = random_channel(rng);
      const InputQubit in = haar_random_input(rng);
      for (std::size_t k = 0; k < 5; ++k) {
        ScriptedOutcomes direct_src({k});
        // (m=0, Bell k) for k < 4, (m=1) for k = 4.
        ScriptedOutcomes circuit_src(k < 4 ? std::vector<std::size_t>{0, k} : std::vector<std::size_t>{1});
        const TeleportationRecord d = run_novel_direct(in, ch, direct_src);
        const TeleportationRecord c = run_novel_circuit(in, ch, circuit_src);
        if (std::abs(d.branch_probability - c.branch_probability) > kStateTol) {
          return "M" + std::to_string(k) + " probability mismatch";
        }
        const double mutual = fidelity_pure(d.final_state, c.output);
        if (std::abs(mutual - 1.0) > kStateTol) {
          return "M" + std::to_string(k) + " post-states differ, fidelity " + fmt_double(mutual);
        }
      }
    }
    return std::string();
  });
}

CheckResult check_relay_factorization(Rng& rng) {
  return run_check("relay success factorizes", [&] {
    for (Scheme scheme : {Scheme::RelayAssistantKnows, Scheme::RelayEndpointsKnow}) {
      for (int i = 0; i < kRandomConfigs; ++i) {
        const ScenarioConfig cfg = config_for(scheme, rng);
        double relay = 0.0;
        for (const Branch& b : enumerate_branches(cfg)) relay += b.success ? b.probability : 0.0;
        const Scheme first = scheme == Scheme::RelayAssistantKnows ? Scheme::Typical : Scheme::NovelCircuit;
        const Scheme second = scheme == Scheme::RelayAssistantKnows ? Scheme::NovelCircuit : Scheme::Typical;
        auto hop_success = [&](Scheme s, const ChannelParams& ch) {
          ScenarioConfig hop{.scheme = s, .channels = {ch}, .input = cfg.input};
          double p = 0.0;
          for (const Branch& b : enumerate_branches(hop)) p += b.success ? b.probability : 0.0;
          return p;
        };
        const double product = hop_success(first, cfg.channels[0]) * hop_success(second, cfg.channels[1]);
        if (std::abs(relay - product) > kAlgebraTol) {
          return "relay " + fmt_double(relay) + " vs product " + fmt_double(product);
        }
      }
    }
    return std::string();
  });
}

CheckResult check_knowledge_isolation(Rng& rng) {
  return run_check("knowledge isolation", [&] {
    const InputQubit in = haar_random_input(rng);
    const ChannelParams ch_a = ChannelParams::from_b2(0.2, 0.7);
    const ChannelParams ch_b = ChannelParams::from_b2(0.4, -1.1);

    // Two-party novel runners: only Alice opens the channel and the message
    // for a given branch is the same whatever the coefficients are.
    for (bool circuit : {false, true}) {
      for (std::size_t k = 0; k < 5; ++k) {
        std::vector<ClassicalMessage> seen;
        for (const ChannelParams& ch : {ch_a, ch_b}) {
          AccessLog log;
          const ChannelVault vault(ChannelId{0}, ch, novel_knowledge(), &log);
          ScriptedOutcomes src(circuit ? (k < 4 ? std::vector<std::size_t>{0, k} : std::vector<std::size_t>{1})
                                       : std::vector<std::size_t>{k});
          const TeleportationRecord r = circuit ? run_novel_circuit(in, vault, Roles{}, src)
                                                : run_novel_direct(in, vault, Roles{}, src);
          if (log.accessed_by(Party::Bob)) return std::string("Bob opened the channel");
          seen.push_back(r.messages.at(0));
        }
        if (!(seen[0] == seen[1])) return "payload depends on the channel: " + message_text(seen[0]);
      }
    }

    // AssistantKnows relay: Alice and Bob never open a channel, no message
    // reaches Alice, and Bob's message carries no ancilla or POVM label.
    for (int trial = 0; trial < 200; ++trial) {
      AccessLog log;
      const RelayRecord r = run_relay(in, ch_a, ch_b, RelayScenario::AssistantKnows, rng,
                                      RelayOptions{.log = &log});
      if (log.accessed_by(Party::Alice) || log.accessed_by(Party::Bob)) {
        return std::string("an endpoint opened a channel");
      }
      std::vector<ClassicalMessage> msgs = r.hop1.messages;
      if (r.hop2) msgs.insert(msgs.end(), r.hop2->messages.begin(), r.hop2->messages.end());
      for (const ClassicalMessage& m : msgs) {
        if (m.recipient == Party::Alice) return "message reached Alice: " + message_text(m);
        if (m.recipient == Party::Bob) {
          for (const OutcomeLabel& l : m.payload) {
            if (l.kind != OutcomeKind::Bell) return "success information reached Bob: " + message_text(m);
          }
        }
      }
    }
    return std::string();
  });
}

// ---------------------------------------------------------------------------
// Statistical checks

CheckResult worst_of(std::string name, const std::vector<std::pair<StatVerdict, std::string>>& parts) {
  CheckResult out{std::move(name), StatVerdict::Pass, "within 4 sigma"};
  for (const auto& [v, detail] : parts) {
    if (static_cast<int>(v) > static_cast<int>(out.verdict)) {
      out.verdict = v;
      out.detail = detail;
    }
  }
  return out;
}

CheckResult check_monte_carlo(Scheme scheme, const VerifyOptions& options) {
  ScenarioConfig cfg{.scheme = scheme,
                     .channels = {},
                     .input = InputQubit::from_amplitudes(0.6, 0.8),
                     .trials = options.trials,
                     .seed = options.seed};
  cfg.channels.push_back(ChannelParams::from_b2(0.25));
  if (is_relay(scheme)) cfg.channels.push_back(ChannelParams::from_b2(0.3, 0.4));
  const std::string name = "monte carlo: " + std::string(scheme_name(scheme));
  try {
    const Report r = monte_carlo(cfg);
    std::vector<std::pair<StatVerdict, std::string>> parts;
    parts.emplace_back(binomial_verdict(r.exact_success, r.empirical_success, r.trials),
                       "success " + fmt_double(r.empirical_success) + " vs " + fmt_double(r.exact_success));
    for (const OutcomeStat& s : r.per_outcome) {
      parts.emplace_back(binomial_verdict(s.exact, s.empirical, r.trials),
                         s.label + " " + fmt_double(s.empirical) + " vs " + fmt_double(s.exact));
    }
    return worst_of(name, parts);
  } catch (const std::exception& e) {
    return {name, StatVerdict::Fail, std::string("exception: ") + e.what()};
  }
}

CheckResult check_born_sampling(const VerifyOptions& options) {
  Rng rng(options.seed);
  const ChannelParams ch = ChannelParams::from_b2(0.3, 0.9);
  const StateVector total = prepare_total_state(haar_random_input(rng), ch);
  const auto bell = bell_basis();
  const KrausSet kraus = measurement_operators(ch);
  const std::size_t pair[] = {0, 1};
  const auto bell_p = projective_distribution(total, bell, pair);
  const auto povm_p = outcome_distribution(total, kraus, pair);
  std::vector<std::uint64_t> bell_n(4, 0), povm_n(5, 0);
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    ++bell_n[projective_measure(total, bell, pair, rng).outcome];
    ++povm_n[generalized_measure(total, kraus, pair, rng).outcome];
  }
  std::vector<std::pair<StatVerdict, std::string>> parts;
  const double n = static_cast<double>(options.trials);
  for (std::size_t k = 0; k < 4; ++k) {
    parts.emplace_back(binomial_verdict(bell_p[k], bell_n[k] / n, options.trials),
                       std::string(bell_name(k)) + " frequency off");
  }
  for (std::size_t k = 0; k < 5; ++k) {
    parts.emplace_back(binomial_verdict(povm_p[k], povm_n[k] / n, options.trials),
                       "M" + std::to_string(k) + " frequency off");
  }
  return worst_of("Born sampling frequencies", parts);
}

}  // namespace

ChannelParams random_channel(Rng& rng) {
  std::uniform_real_distribution<double> b2(0.01, 0.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double x = b2(rng);
  return ChannelParams::from_b2(x, phase(rng));
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Rng rng(options.seed);
  const std::vector<ChannelParams> channels = channel_sample(rng, kRandomChannels);

  std::vector<CheckResult> out;
  out.push_back(check_bell_basis());
  out.push_back(check_unitarity(channels, options.literal_a));
  out.push_back(check_us_blocks(channels));
  out.push_back(check_completeness(channels));
  out.push_back(check_povm_input_independence(rng));
  for (Scheme s : kAllSchemes) out.push_back(check_enumeration(s, rng));
  out.push_back(check_circuit_equivalence(rng));
  out.push_back(check_relay_factorization(rng));
  out.push_back(check_knowledge_isolation(rng));

  if (options.level == VerifyLevel::Full) {
    out.push_back(check_born_sampling(options));
    for (Scheme s : kAllSchemes) out.push_back(check_monte_carlo(s, options));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.verdict == StatVerdict::Fail; });
}

}  // namespace probtele
