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

// Party-structured teleportation runners.
//
// Every run is driven by an OutcomeSource, which decides each measurement
// outcome from its Born probabilities: SampledOutcomes draws from an RNG,
// ScriptedOutcomes replays a fixed choice sequence (used for exhaustive
// branch enumeration).
//
// Channel coefficients are held by a ChannelVault and handed to a party only
// if that party's Knowledge lists the channel. Receiver steps of the
// sender-measurement scheme take a ClassicalMessage and a register, never a
// vault or ChannelParams.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "probtele/protomath.hpp"
#include "probtele/statevec.hpp"

namespace probtele {

enum class Party { Alice, Bob, Charlie };
std::string_view party_name(Party party);

struct ChannelId {
  int value = 0;
  friend auto operator<=>(const ChannelId&, const ChannelId&) = default;
};

/// Which parties may read which channel coefficients.
class Knowledge {
 public:
  Knowledge& grant(Party party, ChannelId channel);
  bool knows(Party party, ChannelId channel) const;
  std::set<ChannelId> known_channels(Party party) const;

 private:
  std::set<std::pair<Party, ChannelId>> grants_;
};

struct ChannelAccess {
  Party party;
  ChannelId channel;
  friend bool operator==(const ChannelAccess&, const ChannelAccess&) = default;
};

/// Records every release of channel coefficients to a party.
class AccessLog {
 public:
  void record(ChannelAccess access) { entries_.push_back(access); }
  const std::vector<ChannelAccess>& entries() const { return entries_; }
  bool accessed_by(Party party) const;

 private:
  std::vector<ChannelAccess> entries_;
};

class ChannelVault {
 public:
  ChannelVault(ChannelId id, ChannelParams params, Knowledge knowledge, AccessLog* log = nullptr)
      : id_(id), params_(params), knowledge_(std::move(knowledge)), log_(log) {}

  ChannelId id() const { return id_; }
  /// Throws KnowledgeError if `party` does not know this channel.
  const ChannelParams& reveal_to(Party party) const;
  /// The physical pair shared by the two endpoints of the channel.
  StateVector shared_pair() const { return params_.pair_state(); }

 private:
  ChannelId id_;
  ChannelParams params_;
  Knowledge knowledge_;
  AccessLog* log_;
};

struct ClassicalMessage {
  Party sender;
  Party recipient;
  std::vector<OutcomeLabel> payload;
  friend bool operator==(const ClassicalMessage&, const ClassicalMessage&) = default;
};

/// "Alice->Bob[m0,phi+]"
std::string message_text(const ClassicalMessage& message);

struct MeasurementOutcome {
  Party party;
  OutcomeLabel label;
  /// Conditional Born probability of this outcome given the earlier ones.
  double probability;
};

class OutcomeSource {
 public:
  virtual ~OutcomeSource() = default;
  /// Returns the index of the outcome that occurs.
  virtual std::size_t pick(Party party, OutcomeKind kind, std::span<const double> probabilities) = 0;
  /// Called by relay runners between hops.
  virtual void hop_boundary() {}
};

class SampledOutcomes final : public OutcomeSource {
 public:
  explicit SampledOutcomes(Rng& rng) : rng_(rng) {}
  std::size_t pick(Party party, OutcomeKind kind, std::span<const double> probabilities) override;

 private:
  Rng& rng_;
};

/// Thrown by ScriptedOutcomes when the scripted outcome has probability
/// below kZeroProbability; carries the trace up to and including it.
class ZeroProbabilityBranch : public std::exception {
 public:
  explicit ZeroProbabilityBranch(std::string label) : label_(std::move(label)) {}
  const char* what() const noexcept override { return label_.c_str(); }
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

/// Replays `script`; once it is exhausted picks outcome 0 and records how
/// many outcomes each further step offered.
class ScriptedOutcomes final : public OutcomeSource {
 public:
  explicit ScriptedOutcomes(std::vector<std::size_t> script) : script_(std::move(script)) {}
  std::size_t pick(Party party, OutcomeKind kind, std::span<const double> probabilities) override;
  void hop_boundary() override;

  const std::vector<std::size_t>& choices() const { return choices_; }
  const std::vector<std::size_t>& arities() const { return arities_; }

 private:
  std::vector<std::size_t> script_;
  std::vector<std::size_t> choices_;
  std::vector<std::size_t> arities_;
  std::string label_;
};

enum class Scheme { Typical, NovelDirect, NovelCircuit, RelayAssistantKnows, RelayEndpointsKnow };
std::string_view scheme_name(Scheme scheme);

struct TeleportationRecord {
  Scheme scheme;
  std::vector<MeasurementOutcome> outcomes;
  std::vector<ClassicalMessage> messages;
  double branch_probability = 1.0;
  bool success = false;
  /// Against the state this hop was asked to carry.
  double fidelity = 0.0;
  DensityMatrix final_state;
  /// Pure state left on the receiver's qubit.
  StateVector output;
};

/// Outcome labels joined with ',' ("phi+,m0").
std::string outcome_text(const TeleportationRecord& record);

/// Endpoint roles of one teleportation hop.
struct Roles {
  Party sender = Party::Alice;
  Party receiver = Party::Bob;
};

/// Whether the sender-measurement scheme tells the receiver about failure.
/// With Conceal the sender always Bell-measures particles (1, 2) and sends the
/// Bell index alone, so the message carries no success bit.
enum class Disclosure { Disclose, Conceal };

/// Which realization of the sender measurement a run uses.
enum class NovelVariant { Direct, Circuit };

/// Particle 1 = input, particles 2 and 3 = the pair; amplitudes
/// (alpha a, 0, 0, alpha b, beta a, 0, 0, beta b).
StateVector prepare_total_state(const InputQubit& input, const ChannelParams& ch);

// Hop runners over an explicit vault and roles.
TeleportationRecord run_typical(const InputQubit& input, const ChannelVault& channel, Roles roles,
                                OutcomeSource& source);
TeleportationRecord run_novel_direct(const InputQubit& input, const ChannelVault& channel,
                                     Roles roles, OutcomeSource& source,
                                     Disclosure disclosure = Disclosure::Disclose);
TeleportationRecord run_novel_circuit(const InputQubit& input, const ChannelVault& channel,
                                      Roles roles, OutcomeSource& source,
                                      Disclosure disclosure = Disclosure::Disclose);

/// Two-party defaults: the typical scheme lets Bob know the channel, the
/// sender-measurement schemes let only Alice know it.
Knowledge typical_knowledge();
Knowledge novel_knowledge();

TeleportationRecord run_typical(const InputQubit& input, const ChannelParams& ch, OutcomeSource& source);
TeleportationRecord run_typical(const InputQubit& input, const ChannelParams& ch, Rng& rng);
TeleportationRecord run_novel_direct(const InputQubit& input, const ChannelParams& ch,
                                     OutcomeSource& source);
TeleportationRecord run_novel_direct(const InputQubit& input, const ChannelParams& ch, Rng& rng);
TeleportationRecord run_novel_circuit(const InputQubit& input, const ChannelParams& ch,
                                      OutcomeSource& source);
TeleportationRecord run_novel_circuit(const InputQubit& input, const ChannelParams& ch, Rng& rng);

/// Receiver step of the sender-measurement scheme: correction chosen from the
/// message alone and applied to `qubit`. Returns the code that was applied.
CorrectionCode novel_receiver_step(StateVector& reg, std::size_t qubit,
                                   const ClassicalMessage& message);

enum class RelayScenario { AssistantKnows, EndpointsKnow };

struct RelayRecord {
  RelayScenario scenario;
  TeleportationRecord hop1;
  std::optional<TeleportationRecord> hop2;
  bool success = false;
  double branch_probability = 1.0;
  /// Of Bob's final qubit against the original input; 0 when hop 2 never ran.
  double fidelity = 0.0;
};

/// AssistantKnows: Charlie knows both channels. EndpointsKnow: Alice knows
/// channel 1, Bob knows channel 2.
Knowledge relay_knowledge(RelayScenario scenario);
inline constexpr ChannelId kRelayChannel1{1};
inline constexpr ChannelId kRelayChannel2{2};

struct RelayOptions {
  NovelVariant novel = NovelVariant::Circuit;
  AccessLog* log = nullptr;
};

/// Alice -> Charlie over ch1, then Charlie -> Bob over ch2.
RelayRecord run_relay(const InputQubit& input, const ChannelParams& ch1, const ChannelParams& ch2,
                      RelayScenario scenario, OutcomeSource& source, RelayOptions options = {});
RelayRecord run_relay(const InputQubit& input, const ChannelParams& ch1, const ChannelParams& ch2,
                      RelayScenario scenario, Rng& rng, RelayOptions options = {});
/// As above with an explicit knowledge assignment; throws KnowledgeError when
/// it does not support the scenario.
RelayRecord run_relay(const InputQubit& input, const ChannelParams& ch1, const ChannelParams& ch2,
                      RelayScenario scenario, const Knowledge& knowledge, OutcomeSource& source,
                      RelayOptions options = {});

}  // namespace probtele
