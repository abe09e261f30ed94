#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/adversary.hpp"
#include "qpc/bits.hpp"
#include "qpc/protocol.hpp"

namespace qpc {

enum class ProtocolKind { Proposed, ZhangBaseline };
enum class SecretPolicy { Explicit, Uniform, ForcedEqual, ForcedUnequal };

std::string_view to_string(ProtocolKind kind) noexcept;
std::string_view to_string(SecretPolicy policy) noexcept;
ProtocolKind protocol_kind_from_string(std::string_view text);
SecretPolicy secret_policy_from_string(std::string_view text);

struct Scenario {
  ProtocolKind protocol = ProtocolKind::Proposed;
  int n = 3;
  int m = 8;
  std::optional<int> check_rounds;  // default m
  std::optional<int> decoy_count;   // default 2m (proposed), m (baseline)
  Variant variant = Variant::ClassicalBroadcast;
  AdversaryConfig adversary;
  SecretPolicy secret_policy = SecretPolicy::Uniform;
  std::vector<Bits> secret_values;  // explicit policy only
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> spec_pool;
  bool announce_vectors = false;
  int decoy_tolerance = 0;
  FaultInjection fault = FaultInjection::None;

  int c() const noexcept { return check_rounds.value_or(m); }
  int l() const noexcept { return decoy_count.value_or(protocol == ProtocolKind::Proposed ? 2 * m : m); }

  // Throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Integer tallies for a batch of trials. Merging is plain addition, so the
// totals do not depend on how trials were split across threads.
struct TrialCounters {
  std::uint64_t trials = 0;
  std::uint64_t completed = 0;
  std::uint64_t detected = 0;
  std::array<std::uint64_t, 8> detected_at{};  // by protocol step

  std::uint64_t pairs = 0;           // pairs that reached announcement
  std::uint64_t r_exact = 0;         // every computed R equals M_i xor M_j
  std::uint64_t accepted_pairs = 0;  // pairs in completed runs
  std::uint64_t verdict_correct = 0;
  std::uint64_t wrong_verdict_accepted = 0;
  std::uint64_t cross_checked = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t liar_identified = 0;

  std::uint64_t checks_z = 0;
  std::uint64_t check_fail_z = 0;
  std::uint64_t checks_x = 0;
  std::uint64_t check_fail_x = 0;

  std::uint64_t tamper_trials = 0;
  std::uint64_t tamper_detected = 0;
  std::uint64_t tamper_half_trials = 0;  // every substitution half-detectable
  std::uint64_t tamper_half_detected = 0;

  std::uint64_t guess_bits = 0;
  std::uint64_t guess_correct = 0;
  std::uint64_t counterfactual_bits = 0;
  std::uint64_t counterfactual_correct = 0;

  void merge(const TrialCounters& other);

  friend bool operator==(const TrialCounters&, const TrialCounters&) = default;
};

// Stable (name, member) listing used for serialization. detected_at is
// flattened as detected_step1 .. detected_step7.
struct CounterField {
  std::string_view name;
  std::uint64_t TrialCounters::*member;
};
std::vector<CounterField> counter_fields();

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval at 95%.
Interval wilson(std::uint64_t successes, std::uint64_t trials);

struct Metric {
  std::string name;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> target;

  // 3 sigma of a binomial at the target rate; zero when the target is 0 or 1.
  double tolerance() const;
  // True when there is no target or the estimate is within tolerance.
  bool agrees() const;

  friend bool operator==(const Metric&, const Metric&) = default;
};

Metric make_metric(std::string name, std::uint64_t successes, std::uint64_t trials,
                   std::optional<double> target = std::nullopt);

struct TrialStats {
  Scenario scenario;
  TrialCounters counters;
  std::vector<Metric> metrics;

  const Metric* find(std::string_view name) const;
  const Metric& at(std::string_view name) const;  // throws RangeError

  friend bool operator==(const TrialStats&, const TrialStats&) = default;
};

// Closed-form probabilities:
//   intercept_detection(l)  = 1 - (3/4)^l
//   tamper_detection(l)     = 1 - (1/2)^l
//   fake_state_detection(c) = 1 - (3/4)^c
double closed_form(std::string_view kind, int param);

// Secrets for one trial under the scenario's policy.
std::vector<Bits> draw_secrets(const Scenario& s, RandomStream& rng);

// Trial `index` of the scenario, using the stream derive_seed(seed, index).
ProtocolRun run_trial(const Scenario& s, std::uint64_t index, bool record_events);

TrialCounters tally(const Scenario& s, const ProtocolRun& run);
std::vector<Metric> derive_metrics(const Scenario& s, const TrialCounters& counters);

// jobs = 0 picks the hardware concurrency.
TrialStats run_scenario(const Scenario& s, unsigned jobs = 1);

}  // namespace qpc
