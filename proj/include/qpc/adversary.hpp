#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qpc/photon.hpp"
#include "qpc/protocol.hpp"

namespace qpc {

enum class AdversaryKind {
  None,
  EveInterceptResend,
  Tp1FakeInitialState,
  Tp1FakeResult,
  Tp2FakeResult,
  Tp2Intercept,
  ParticipantInfer,
  ClassicalPositionTamper,
};

std::string_view to_string(AdversaryKind kind) noexcept;
AdversaryKind adversary_kind_from_string(std::string_view text);

// Parameters for every strategy; each kind reads only its own fields.
struct AdversaryConfig {
  AdversaryKind kind = AdversaryKind::None;
  std::vector<int> links{1};                     // intercept: tapped TP1 -> P_k links
  std::optional<std::uint64_t> true_state_index;  // fake initial state: nullopt = |0...0>
  std::uint64_t claimed_index = 1;                // fake initial state: spec reported to TP2
  std::vector<std::pair<int, int>> pairs;         // fake result: empty = every pair
  int attacker = 1;                               // participant inference
  int victim = 2;
  std::optional<int> tampered_checks;             // position tamper: nullopt = every check

  friend bool operator==(const AdversaryConfig&, const AdversaryConfig&) = default;
};

// Hook points a strategy may intercept. Default implementations do nothing,
// so an inactive adversary leaves the protocol and its random stream
// untouched. A fresh instance is used per trial.
class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual AdversaryKind kind() const noexcept = 0;

  // Step 1: TP1 may substitute the registers it hands out and the specs it
  // reports to TP2.
  virtual void on_prepare(std::vector<QubitRegister>& /*registers*/, std::vector<GhzSpec>& /*claimed*/,
                          RandomStream& /*rng*/) {}

  // Step 2: install taps on the TP1 -> P_participant quantum link.
  virtual void attach_taps(QuantumChannel& /*channel*/, int /*participant*/) {}

  // Step 3, classical broadcast only: the copy of P1's check positions that
  // participants 2..n receive.
  virtual void on_position_broadcast(std::vector<int>& /*positions*/, int /*register_count*/, RandomStream& /*rng*/) {}

  // Step 6: a TP's announcement just before publication.
  virtual void on_announce(const PartyId& /*tp*/, Announcement& /*announcement*/) {}

  // After the run: detection status and the attacker's secret guesses,
  // scored against the ground truth in `run`.
  virtual AttackOutcome assess(const ProtocolRun& run) const;
};

class NoAdversary final : public Adversary {
 public:
  AdversaryKind kind() const noexcept override { return AdversaryKind::None; }
};

// Throws ConfigError when the parameters do not fit an n-participant run.
void validate(const AdversaryConfig& config, int n);

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& config, int n);

}  // namespace qpc
