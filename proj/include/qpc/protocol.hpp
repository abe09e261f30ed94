#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qpc/bits.hpp"
#include "qpc/ghz.hpp"
#include "qpc/party.hpp"
#include "qpc/transcript.hpp"

namespace qpc {

class Adversary;

enum class Variant { ClassicalBroadcast, Tp2Relay };
enum class Verdict { Identical, Different };
enum class CrossCheck { Accepted, Conflict };
enum class Liar { None, TP1, TP2, Both };

// Test-only corruption of the pairwise pad, used to show the acceptance
// battery catches a broken t_xor.
enum class FaultInjection { None, BrokenPad };

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(CrossCheck c) noexcept;
std::string_view to_string(Liar l) noexcept;
Variant variant_from_string(std::string_view text);

struct Announcement {
  PartyId source = PartyId::tp1();
  int i = 1;
  int j = 2;
  Verdict verdict = Verdict::Identical;
  std::optional<Bits> r;  // present only when vectors are announced

  friend bool operator==(const Announcement&, const Announcement&) = default;
};

// Verdict is Identical iff every bit of r is zero.
Announcement make_announcement(PartyId source, int i, int j, const Bits& r, bool include_vector);

// Inverts the verdict, keeping an announced r consistent with it.
void flip(Announcement& a);

// Participant outcomes for one checked register, as seen by the checker.
struct RegisterCheck {
  int position = 0;            // register the checker believes was measured
  int substituted = -1;        // register participants 2..n actually measured, if tampered
  bool half_detectable = false;  // tampered pair whose per-check detection is 1/2
  Basis basis = Basis::Z;
  Outcome outcome;
  bool consistent = true;
};

struct StateCheckReport {
  bool passed = true;
  std::vector<RegisterCheck> registers;
};

// Z outcome must be q or ~q; full X outcome must have minus parity delta.
bool consistent_with(const GhzSpec& claimed, Basis basis, const Outcome& outcome);

// `claimed` is indexed by register position.
StateCheckReport step3_check(std::span<const int> positions, std::span<const Basis> bases,
                             std::span<const Outcome> outcomes, std::span<const GhzSpec> claimed);

// Throws ContractError unless both announcements concern the same pair.
CrossCheck cross_check(const Announcement& from_tp1, const Announcement& from_tp2);

// Pairwise pad over the key registers: T_ij[b] = t_xor(claimed[key[b]], i, j).
Bits pair_pad(std::span<const GhzSpec> claimed, std::span<const int> key_positions, int i, int j,
              FaultInjection fault = FaultInjection::None);

// Recomputes R_ij from TP1's tamper-proof commitment and the C records; the TP
// whose verdict differs is the liar.
Liar arbiter_identify(std::span<const GhzSpec> committed, std::span<const int> key_positions,
                      std::span<const Bits> comparison_info, const Announcement& from_tp1,
                      const Announcement& from_tp2);

// Whether a Step-3 check whose other participants were redirected from
// register `checked` to register `substituted` is caught with probability
// exactly 1/2: the particle-2..n parts of q must agree up to complement.
// Otherwise a Z check always fails and the per-check rate is 3/4.
bool substitution_half_detectable(const GhzSpec& checked, const GhzSpec& substituted);

struct ProtocolParams {
  int n = 3;
  int m = 8;
  int check_rounds = 8;
  int decoy_count = 16;
  Variant variant = Variant::ClassicalBroadcast;
  bool announce_vectors = false;
  int decoy_tolerance = 0;
  std::vector<std::uint64_t> spec_pool;  // GHZ indices TP1 draws from; empty = whole family
  bool record_events = true;
  FaultInjection fault = FaultInjection::None;
};

struct BaselineParams {
  int m = 8;
  int check_rounds = 8;
  int decoy_count = 8;
  int decoy_tolerance = 0;
  bool record_events = true;
  FaultInjection fault = FaultInjection::None;
};

struct PairResult {
  int i = 1;
  int j = 2;
  Bits truth;  // M_i xor M_j
  Bits r_tp1;  // computed internally, before any announcement tampering
  std::optional<Bits> r_tp2;
  Announcement tp1;
  std::optional<Announcement> tp2;
  std::optional<CrossCheck> check;
  Liar liar = Liar::None;

  Verdict true_verdict() const { return all_zero(truth) ? Verdict::Identical : Verdict::Different; }
};

struct AttackOutcome {
  bool detected = false;
  int detection_step = 0;
  std::uint64_t guess_bits = 0;
  std::uint64_t guess_correct = 0;
  std::uint64_t counterfactual_bits = 0;
  std::uint64_t counterfactual_correct = 0;

  double guess_accuracy() const noexcept {
    return guess_bits ? static_cast<double>(guess_correct) / static_cast<double>(guess_bits) : 0.0;
  }
};

struct ProtocolRun {
  ProtocolTranscript transcript;
  int n = 0;
  int m = 0;
  std::vector<Bits> secrets;
  std::vector<GhzSpec> prepared;  // nominal preparation before any TP1 override
  std::vector<GhzSpec> claimed;   // what TP2 (and the arbiter) were told
  std::vector<int> checked_positions;
  std::vector<int> key_positions;   // as used by the TPs
  std::vector<std::vector<int>> participant_key_positions;
  std::vector<Bits> keys;           // K_i
  std::vector<Bits> comparison;     // C_i
  std::vector<RegisterCheck> checks;
  std::vector<PairResult> pairs;
  AttackOutcome attack;

  bool completed() const noexcept { return transcript.completed(); }
  const std::optional<Abort>& abort_info() const noexcept { return transcript.abort_info(); }
};

// Seven-step multiparty comparison with two TPs. `secrets` holds n bit strings
// of length m.
ProtocolRun run_proposed(const ProtocolParams& params, const std::vector<Bits>& secrets, Adversary& adversary,
                         RandomStream& rng);
ProtocolRun run_proposed(const ProtocolParams& params, const std::vector<Bits>& secrets, RandomStream& rng);

// Two-party single-TP baseline over |phi+> / |psi-> pairs. TP is reported as
// TP1; participants are P1 (Alice) and P2 (Bob).
ProtocolRun run_zhang_baseline(const BaselineParams& params, const std::vector<Bits>& secrets, Adversary& adversary,
                               RandomStream& rng);
ProtocolRun run_zhang_baseline(const BaselineParams& params, const std::vector<Bits>& secrets, RandomStream& rng);

}  // namespace qpc
