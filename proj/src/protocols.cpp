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

#include "probtele/protocols.hpp"

#include <algorithm>

#include "probtele/errors.hpp"

namespace probtele {

namespace {

constexpr ChannelId kTwoPartyChannel{0};

// Register layout of a single hop: input particle, sender's half, receiver's
// half, then the ancilla when one is attached.
constexpr std::size_t kInput = 0;
constexpr std::size_t kSenderHalf = 1;
constexpr std::size_t kReceiverHalf = 2;
constexpr std::size_t kAncilla = 3;
constexpr std::size_t kSenderPair[] = {kInput, kSenderHalf};
constexpr std::size_t kAncillaOnly[] = {kAncilla};

struct RunTrace {
  std::vector<MeasurementOutcome> outcomes;
  std::vector<ClassicalMessage> messages;
  double probability = 1.0;

  void note(Party party, OutcomeKind kind, std::size_t index, double p) {
    outcomes.push_back({party, {kind, index}, p});
    probability *= p;
  }
};

std::size_t measure_in_basis(StateVector& reg, std::span<const StateVector> basis,
                             std::span<const std::size_t> targets, Party who, OutcomeKind kind,
                             OutcomeSource& source, RunTrace& trace) {
  const std::vector<double> probs = projective_distribution(reg, basis, targets);
  const std::size_t k = source.pick(who, kind, probs);
  MeasurementResult res = project(reg, basis, targets, k);
  reg = std::move(res.post_state);
  trace.note(who, kind, k, probs[k]);
  return k;
}

std::size_t measure_bell_pair(StateVector& reg, Party who, OutcomeSource& source, RunTrace& trace) {
  static const auto bell = bell_basis();
  return measure_in_basis(reg, bell, kSenderPair, who, OutcomeKind::Bell, source, trace);
}

std::size_t measure_ancilla(StateVector& reg, Party who, OutcomeSource& source, RunTrace& trace) {
  static const auto zero_one = computational_basis(1);
  return measure_in_basis(reg, zero_one, kAncillaOnly, who, OutcomeKind::Ancilla, source, trace);
}

TeleportationRecord finish(Scheme scheme, RunTrace trace, bool success, const StateVector& reg,
                           const InputQubit& intended) {
  const std::size_t keep[] = {kReceiverHalf};
  DensityMatrix rho = reduced_density(reg, keep);
  const double fidelity = fidelity_pure(rho, intended.state());
  return TeleportationRecord{
      .scheme = scheme,
      .outcomes = std::move(trace.outcomes),
      .messages = std::move(trace.messages),
      .branch_probability = trace.probability,
      .success = success,
      .fidelity = fidelity,
      .final_state = std::move(rho),
      .output = factor_qubit(reg, kReceiverHalf),
  };
}

StateVector initial_register(const InputQubit& input, const ChannelVault& channel) {
  return tensor_product({input.state(), channel.shared_pair()});
}

void check_relay_knowledge(RelayScenario scenario, const Knowledge& knowledge) {
  auto require = [&](Party p, ChannelId c, bool expected) {
    if (knowledge.knows(p, c) != expected) {
      throw KnowledgeError(std::string(party_name(p)) + (expected ? " must" : " must not") +
                           " know channel " + std::to_string(c.value) + " in this relay scenario");
    }
  };
  const ChannelId both[] = {kRelayChannel1, kRelayChannel2};
  if (scenario == RelayScenario::AssistantKnows) {
    for (ChannelId c : both) {
      require(Party::Charlie, c, true);
      require(Party::Alice, c, false);
      require(Party::Bob, c, false);
    }
  } else {
    require(Party::Alice, kRelayChannel1, true);
    require(Party::Bob, kRelayChannel2, true);
    for (ChannelId c : both) require(Party::Charlie, c, false);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Knowledge

std::string_view party_name(Party party) {
  switch (party) {
    case Party::Alice: return "Alice";
    case Party::Bob: return "Bob";
    case Party::Charlie: return "Charlie";
  }
  return "?";
}

Knowledge& Knowledge::grant(Party party, ChannelId channel) {
  grants_.insert({party, channel});
  return *this;
}

bool Knowledge::knows(Party party, ChannelId channel) const {
  return grants_.contains({party, channel});
}

std::set<ChannelId> Knowledge::known_channels(Party party) const {
  std::set<ChannelId> out;
  for (const auto& [p, c] : grants_) {
    if (p == party) out.insert(c);
  }
  return out;
}

bool AccessLog::accessed_by(Party party) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [party](const ChannelAccess& a) { return a.party == party; });
}

const ChannelParams& ChannelVault::reveal_to(Party party) const {
  if (!knowledge_.knows(party, id_)) {
    throw KnowledgeError(std::string(party_name(party)) + " does not know channel " +
                         std::to_string(id_.value));
  }
  if (log_ != nullptr) log_->record({party, id_});
  return params_;
}

std::string message_text(const ClassicalMessage& message) {
  std::string out = std::string(party_name(message.sender)) + "->" +
                    std::string(party_name(message.recipient)) + "[";
  for (std::size_t i = 0; i < message.payload.size(); ++i) {
    if (i != 0) out += ",";
    out += label_text(message.payload[i]);
  }
  return out + "]";
}

std::string outcome_text(const TeleportationRecord& record) {
  std::string out;
  for (const MeasurementOutcome& o : record.outcomes) {
    if (!out.empty()) out += ",";
    out += label_text(o.label);
  }
  return out;
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Typical: return "typical";
    case Scheme::NovelDirect: return "novel-direct";
    case Scheme::NovelCircuit: return "novel-circuit";
    case Scheme::RelayAssistantKnows: return "relay-assistant";
    case Scheme::RelayEndpointsKnow: return "relay-endpoints";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Outcome sources

std::size_t SampledOutcomes::pick(Party, OutcomeKind, std::span<const double> probabilities) {
  return sample_index(probabilities, rng_);
}

std::size_t ScriptedOutcomes::pick(Party, OutcomeKind kind, std::span<const double> probabilities) {
  const std::size_t step = choices_.size();
  const std::size_t choice = step < script_.size() ? script_[step] : 0;
  if (choice >= probabilities.size()) throw InvalidArgument("scripted outcome out of range");
  choices_.push_back(choice);
  arities_.push_back(probabilities.size());
  if (!label_.empty() && label_.back() != '|') label_ += ",";
  label_ += label_text({kind, choice});
  if (probabilities[choice] < kZeroProbability) throw ZeroProbabilityBranch(label_);
  return choice;
}

void ScriptedOutcomes::hop_boundary() { label_ += "|"; }

// ---------------------------------------------------------------------------
// Single-hop runners

StateVector prepare_total_state(const InputQubit& input, const ChannelParams& ch) {
  return tensor_product({input.state(), ch.pair_state()});
}

Knowledge typical_knowledge() {
  return Knowledge().grant(Party::Bob, kTwoPartyChannel);
}

Knowledge novel_knowledge() {
  return Knowledge().grant(Party::Alice, kTwoPartyChannel);
}

TeleportationRecord run_typical(const InputQubit& input, const ChannelVault& channel, Roles roles,
                                OutcomeSource& source) {
  RunTrace trace;
  StateVector reg = initial_register(input, channel);

  // Sender: Bell measurement on (input, own half), result sent to the receiver.
  const std::size_t bell = measure_bell_pair(reg, roles.sender, source, trace);
  trace.messages.push_back({roles.sender, roles.receiver, {{OutcomeKind::Bell, bell}}});

  // Receiver: ancilla, U_F chosen by the Bell index, ancilla readout.
  const ChannelParams& ch = channel.reveal_to(roles.receiver);
  const std::size_t index = trace.messages.back().payload.front().value;
  reg = tensor_product({reg, StateVector::basis(1, 0)});
  reg = apply_unitary(reg, u_f(index, ch), {kReceiverHalf, kAncilla});
  const std::size_t m = measure_ancilla(reg, roles.receiver, source, trace);

  return finish(Scheme::Typical, std::move(trace), m == 0, reg, input);
}

CorrectionCode novel_receiver_step(StateVector& reg, std::size_t qubit,
                                   const ClassicalMessage& message) {
  const CorrectionCode code = correction_for(message.payload);
  if (code != CorrectionCode::Fail) {
    reg = apply_unitary(reg, correction_matrix(code), {qubit});
  }
  return code;
}

TeleportationRecord run_novel_direct(const InputQubit& input, const ChannelVault& channel,
                                     Roles roles, OutcomeSource& source, Disclosure disclosure) {
  RunTrace trace;
  StateVector reg = initial_register(input, channel);

  const KrausSet kraus = measurement_operators(channel.reveal_to(roles.sender));
  const std::vector<double> probs = outcome_distribution(reg, kraus, kSenderPair);
  const std::size_t i = source.pick(roles.sender, OutcomeKind::Povm, probs);
  reg = apply_kraus(reg, kraus, kSenderPair, i).post_state;
  trace.note(roles.sender, OutcomeKind::Povm, i, probs[i]);

  std::vector<OutcomeLabel> payload;
  if (disclosure == Disclosure::Disclose) {
    payload = {{OutcomeKind::Povm, i}};
  } else if (i < 4) {
    payload = {{OutcomeKind::Bell, i}};
  } else {
    payload = {{OutcomeKind::Bell, measure_bell_pair(reg, roles.sender, source, trace)}};
  }
  trace.messages.push_back({roles.sender, roles.receiver, std::move(payload)});

  novel_receiver_step(reg, kReceiverHalf, trace.messages.back());
  return finish(Scheme::NovelDirect, std::move(trace), i != 4, reg, input);
}

TeleportationRecord run_novel_circuit(const InputQubit& input, const ChannelVault& channel,
                                      Roles roles, OutcomeSource& source, Disclosure disclosure) {
  RunTrace trace;
  StateVector reg = tensor_product({initial_register(input, channel), StateVector::basis(1, 0)});

  // Sender: dilation unitary on (1, 2, m), ancilla readout, then Bell measurement.
  reg = apply_unitary(reg, u_s(channel.reveal_to(roles.sender)), {kInput, kSenderHalf, kAncilla});
  const std::size_t m = measure_ancilla(reg, roles.sender, source, trace);

  std::vector<OutcomeLabel> payload;
  if (disclosure == Disclosure::Disclose) {
    payload.push_back({OutcomeKind::Ancilla, m});
    if (m == 0) {
      payload.push_back({OutcomeKind::Bell, measure_bell_pair(reg, roles.sender, source, trace)});
    }
  } else {
    payload.push_back({OutcomeKind::Bell, measure_bell_pair(reg, roles.sender, source, trace)});
  }
  trace.messages.push_back({roles.sender, roles.receiver, std::move(payload)});

  novel_receiver_step(reg, kReceiverHalf, trace.messages.back());
  return finish(Scheme::NovelCircuit, std::move(trace), m == 0, reg, input);
}

TeleportationRecord run_typical(const InputQubit& input, const ChannelParams& ch,
                                OutcomeSource& source) {
  const ChannelVault vault(kTwoPartyChannel, ch, typical_knowledge());
  return run_typical(input, vault, Roles{}, source);
}

TeleportationRecord run_typical(const InputQubit& input, const ChannelParams& ch, Rng& rng) {
  SampledOutcomes source(rng);
  return run_typical(input, ch, source);
}

TeleportationRecord run_novel_direct(const InputQubit& input, const ChannelParams& ch,
                                     OutcomeSource& source) {
  const ChannelVault vault(kTwoPartyChannel, ch, novel_knowledge());
  return run_novel_direct(input, vault, Roles{}, source);
}

TeleportationRecord run_novel_direct(const InputQubit& input, const ChannelParams& ch, Rng& rng) {
  SampledOutcomes source(rng);
  return run_novel_direct(input, ch, source);
}

TeleportationRecord run_novel_circuit(const InputQubit& input, const ChannelParams& ch,
                                      OutcomeSource& source) {
  const ChannelVault vault(kTwoPartyChannel, ch, novel_knowledge());
  return run_novel_circuit(input, vault, Roles{}, source);
}

TeleportationRecord run_novel_circuit(const InputQubit& input, const ChannelParams& ch, Rng& rng) {
  SampledOutcomes source(rng);
  return run_novel_circuit(input, ch, source);
}

// ---------------------------------------------------------------------------
// Relays

Knowledge relay_knowledge(RelayScenario scenario) {
  Knowledge k;
  if (scenario == RelayScenario::AssistantKnows) {
    k.grant(Party::Charlie, kRelayChannel1).grant(Party::Charlie, kRelayChannel2);
  } else {
    k.grant(Party::Alice, kRelayChannel1).grant(Party::Bob, kRelayChannel2);
  }
  return k;
}

RelayRecord run_relay(const InputQubit& input, const ChannelParams& ch1, const ChannelParams& ch2,
                      RelayScenario scenario, const Knowledge& knowledge, OutcomeSource& source,
                      RelayOptions options) {
  check_relay_knowledge(scenario, knowledge);
  const ChannelVault first(kRelayChannel1, ch1, knowledge, options.log);
  const ChannelVault second(kRelayChannel2, ch2, knowledge, options.log);

  auto novel_hop = [&](const InputQubit& in, const ChannelVault& vault, Roles roles,
                       Disclosure disclosure) {
    return options.novel == NovelVariant::Direct
               ? run_novel_direct(in, vault, roles, source, disclosure)
               : run_novel_circuit(in, vault, roles, source, disclosure);
  };

  const Roles alice_to_charlie{Party::Alice, Party::Charlie};
  const Roles charlie_to_bob{Party::Charlie, Party::Bob};

  TeleportationRecord hop1 = scenario == RelayScenario::AssistantKnows
                                 ? run_typical(input, first, alice_to_charlie, source)
                                 : novel_hop(input, first, alice_to_charlie, Disclosure::Disclose);
  if (!hop1.success) {
    const double p = hop1.branch_probability;
    return RelayRecord{scenario, std::move(hop1), std::nullopt, false, p, 0.0};
  }

  source.hop_boundary();
  // Hop 2 carries whatever hop 1 actually reconstructed.
  const InputQubit carried = InputQubit::from_state(hop1.output);
  // In AssistantKnows Bob must not learn the outcome, so Charlie withholds it.
  TeleportationRecord hop2 = scenario == RelayScenario::AssistantKnows
                                 ? novel_hop(carried, second, charlie_to_bob, Disclosure::Conceal)
                                 : run_typical(carried, second, charlie_to_bob, source);

  const double p = hop1.branch_probability * hop2.branch_probability;
  const double fidelity = fidelity_pure(hop2.final_state, input.state());
  const bool success = hop2.success;
  return RelayRecord{scenario, std::move(hop1), std::move(hop2), success, p, fidelity};
}

RelayRecord run_relay(const InputQubit& input, const ChannelParams& ch1, const ChannelParams& ch2,
                      RelayScenario scenario, OutcomeSource& source, RelayOptions options) {
  return run_relay(input, ch1, ch2, scenario, relay_knowledge(scenario), source, options);
}

RelayRecord run_relay(const InputQubit& input, const ChannelParams& ch1, const ChannelParams& ch2,
                      RelayScenario scenario, Rng& rng, RelayOptions options) {
  SampledOutcomes source(rng);
  return run_relay(input, ch1, ch2, scenario, source, options);
}

}  // namespace probtele
