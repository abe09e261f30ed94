#include "qpc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "qpc/errors.hpp"

namespace qpc {

std::string_view to_string(ProtocolKind kind) noexcept {
  return kind == ProtocolKind::Proposed ? "proposed" : "zhang_baseline";
}

std::string_view to_string(SecretPolicy policy) noexcept {
  switch (policy) {
    case SecretPolicy::Explicit: return "explicit";
    case SecretPolicy::Uniform: return "uniform";
    case SecretPolicy::ForcedEqual: return "forced_equal";
    case SecretPolicy::ForcedUnequal: return "forced_unequal";
  }
  return "unknown";
}

ProtocolKind protocol_kind_from_string(std::string_view text) {
  if (text == "proposed") return ProtocolKind::Proposed;
  if (text == "zhang_baseline") return ProtocolKind::ZhangBaseline;
  throw ConfigError("protocol", "expected 'proposed' or 'zhang_baseline', got '" + std::string(text) + "'");
}

SecretPolicy secret_policy_from_string(std::string_view text) {
  for (auto p : {SecretPolicy::Explicit, SecretPolicy::Uniform, SecretPolicy::ForcedEqual,
                 SecretPolicy::ForcedUnequal}) {
    if (to_string(p) == text) return p;
  }
  throw ConfigError("secrets.policy", "unknown secret policy '" + std::string(text) + "'");
}

void Scenario::validate() const {
  if (protocol == ProtocolKind::ZhangBaseline) {
    if (n != 2) throw ConfigError("n", "the baseline protocol has exactly 2 participants");
  } else if (n < GhzSpec::kMinParticles || n > GhzSpec::kMaxParticles) {
    throw ConfigError("n", "must be between 2 and 20");
  }
  if (m < 1) throw ConfigError("m", "must be at least 1");
  if (c() < 0) throw ConfigError("check_rounds", "must be non-negative");
  if (protocol == ProtocolKind::Proposed && c() > m) {
    throw ConfigError("check_rounds", "at most m of the 2m registers can be checked");
  }
  if (l() < 0) throw ConfigError("decoy_count", "must be non-negative");
  if (decoy_tolerance < 0) throw ConfigError("decoy_tolerance", "must be non-negative");
  if (trials < 1) throw ConfigError("trials", "must be at least 1");

  if (secret_policy == SecretPolicy::Explicit) {
    if (secret_values.size() != static_cast<std::size_t>(n)) {
      throw ConfigError("secrets.values", "explicit policy needs one secret per participant");
    }
    for (const auto& v : secret_values) {
      if (v.size() != static_cast<std::size_t>(m)) throw ConfigError("secrets.values", "every secret must have m bits");
    }
  } else if (!secret_values.empty()) {
    throw ConfigError("secrets.values", "values are only allowed with the explicit policy");
  }
  if (secret_policy == SecretPolicy::ForcedUnequal && m < 63 && (std::uint64_t{1} << m) < static_cast<std::uint64_t>(n)) {
    throw ConfigError("secrets.policy", "m too small for n pairwise distinct secrets");
  }

  for (auto index : spec_pool) {
    if (protocol == ProtocolKind::ZhangBaseline) throw ConfigError("spec_pool", "not used by the baseline protocol");
    if (index < 1 || index > family_size(n)) throw ConfigError("spec_pool", "GHZ index outside the family");
  }

  qpc::validate(adversary, n);
  const auto kind = adversary.kind;
  if (protocol == ProtocolKind::ZhangBaseline &&
      (kind == AdversaryKind::Tp2FakeResult || kind == AdversaryKind::Tp2Intercept ||
       kind == AdversaryKind::ClassicalPositionTamper)) {
    throw ConfigError("adversary.kind", std::string(to_string(kind)) + " needs the proposed protocol");
  }
  if (kind == AdversaryKind::ClassicalPositionTamper) {
    if (adversary.tampered_checks.value_or(c()) > c()) {
      throw ConfigError("adversary.params.tampered_checks", "cannot exceed check_rounds");
    }
    if (c() < 1) throw ConfigError("check_rounds", "position tamper needs at least one check round");
  }
}

void TrialCounters::merge(const TrialCounters& other) {
  for (const auto& f : counter_fields()) this->*f.member += other.*f.member;
  for (std::size_t s = 0; s < detected_at.size(); ++s) detected_at[s] += other.detected_at[s];
}

std::vector<CounterField> counter_fields() {
  using C = TrialCounters;
  return {
      {"trials", &C::trials},
      {"completed", &C::completed},
      {"detected", &C::detected},
      {"pairs", &C::pairs},
      {"r_exact", &C::r_exact},
      {"accepted_pairs", &C::accepted_pairs},
      {"verdict_correct", &C::verdict_correct},
      {"wrong_verdict_accepted", &C::wrong_verdict_accepted},
      {"cross_checked", &C::cross_checked},
      {"conflicts", &C::conflicts},
      {"liar_identified", &C::liar_identified},
      {"checks_z", &C::checks_z},
      {"check_fail_z", &C::check_fail_z},
      {"checks_x", &C::checks_x},
      {"check_fail_x", &C::check_fail_x},
      {"tamper_trials", &C::tamper_trials},
      {"tamper_detected", &C::tamper_detected},
      {"tamper_half_trials", &C::tamper_half_trials},
      {"tamper_half_detected", &C::tamper_half_detected},
      {"guess_bits", &C::guess_bits},
      {"guess_correct", &C::guess_correct},
      {"counterfactual_bits", &C::counterfactual_bits},
      {"counterfactual_correct", &C::counterfactual_correct},
  };
}

Interval wilson(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  // Clamp so the interval always contains the point estimate despite rounding.
  return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

double Metric::tolerance() const {
  if (!target || trials == 0) return 0.0;
  const double t = *target;
  return 3.0 * std::sqrt(t * (1.0 - t) / static_cast<double>(trials));
}

bool Metric::agrees() const {
  if (!target) return true;
  // Exact targets (0 or 1) are compared on the counts.
  if (*target == 0.0) return successes == 0;
  if (*target == 1.0) return successes == trials;
  return std::abs(estimate - *target) <= tolerance();
}

Metric make_metric(std::string name, std::uint64_t successes, std::uint64_t trials, std::optional<double> target) {
  Metric m;
  m.name = std::move(name);
  m.successes = successes;
  m.trials = trials;
  m.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  const auto ci = wilson(successes, trials);
  m.ci_low = ci.low;
  m.ci_high = ci.high;
  m.target = target;
  return m;
}

const Metric* TrialStats::find(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const Metric& TrialStats::at(std::string_view name) const {
  if (const auto* m = find(name)) return *m;
  throw RangeError("no metric named '" + std::string(name) + "'");
}

double closed_form(std::string_view kind, int param) {
  if (param < 0) throw RangeError("closed-form parameter must be non-negative");
  if (kind == "intercept_detection" || kind == "fake_state_detection") return 1.0 - std::pow(0.75, param);
  if (kind == "tamper_detection") return 1.0 - std::pow(0.5, param);
  throw ContractError("unknown closed form '" + std::string(kind) + "'");
}

std::vector<Bits> draw_secrets(const Scenario& s, RandomStream& rng) {
  const auto n = static_cast<std::size_t>(s.n);
  const auto m = static_cast<std::size_t>(s.m);
  std::vector<Bits> out;
  switch (s.secret_policy) {
    case SecretPolicy::Explicit: return s.secret_values;
    case SecretPolicy::Uniform:
      for (std::size_t k = 0; k < n; ++k) out.push_back(random_bits(m, rng));
      return out;
    case SecretPolicy::ForcedEqual: return std::vector<Bits>(n, random_bits(m, rng));
    case SecretPolicy::ForcedUnequal: {
      std::set<Bits> seen;
      while (out.size() < n) {
        auto b = random_bits(m, rng);
        if (seen.insert(b).second) out.push_back(std::move(b));
      }
      return out;
    }
  }
  return out;
}

ProtocolRun run_trial(const Scenario& s, std::uint64_t index, bool record_events) {
  RandomStream rng(derive_seed(s.seed, index));
  const auto secrets = draw_secrets(s, rng);
  auto adversary = make_adversary(s.adversary, s.n);
  if (s.protocol == ProtocolKind::ZhangBaseline) {
    BaselineParams p;
    p.m = s.m;
    p.check_rounds = s.c();
    p.decoy_count = s.l();
    p.decoy_tolerance = s.decoy_tolerance;
    p.record_events = record_events;
    p.fault = s.fault;
    return run_zhang_baseline(p, secrets, *adversary, rng);
  }
  ProtocolParams p;
  p.n = s.n;
  p.m = s.m;
  p.check_rounds = s.c();
  p.decoy_count = s.l();
  p.variant = s.variant;
  p.announce_vectors = s.announce_vectors;
  p.decoy_tolerance = s.decoy_tolerance;
  p.spec_pool = s.spec_pool;
  p.record_events = record_events;
  p.fault = s.fault;
  return run_proposed(p, secrets, *adversary, rng);
}

namespace {

Liar expected_liar(AdversaryKind kind) {
  if (kind == AdversaryKind::Tp1FakeResult) return Liar::TP1;
  if (kind == AdversaryKind::Tp2FakeResult) return Liar::TP2;
  return Liar::None;
}

}  // namespace

TrialCounters tally(const Scenario& s, const ProtocolRun& run) {
  TrialCounters c;
  c.trials = 1;
  if (run.completed()) ++c.completed;
  if (const auto& abort = run.abort_info()) {
    ++c.detected;
    if (abort->step >= 1 && abort->step < static_cast<int>(c.detected_at.size())) ++c.detected_at[abort->step];
  }

  const Liar liar = expected_liar(s.adversary.kind);
  for (const auto& pr : run.pairs) {
    ++c.pairs;
    if (pr.r_tp1 == pr.truth && (!pr.r_tp2 || *pr.r_tp2 == pr.truth)) ++c.r_exact;
    if (pr.check) {
      ++c.cross_checked;
      if (*pr.check == CrossCheck::Conflict) {
        ++c.conflicts;
        if (liar != Liar::None && pr.liar == liar) ++c.liar_identified;
      }
    }
    if (run.completed()) {
      ++c.accepted_pairs;
      const auto truth = pr.true_verdict();
      const bool correct = pr.tp1.verdict == truth && (!pr.tp2 || pr.tp2->verdict == truth);
      if (correct) {
        ++c.verdict_correct;
      } else {
        ++c.wrong_verdict_accepted;
      }
    }
  }

  bool tampered = false;
  bool all_half = true;
  for (const auto& reg : run.checks) {
    if (reg.basis == Basis::Z) {
      ++c.checks_z;
      if (!reg.consistent) ++c.check_fail_z;
    } else {
      ++c.checks_x;
      if (!reg.consistent) ++c.check_fail_x;
    }
    if (reg.substituted >= 0) {
      tampered = true;
      all_half = all_half && reg.half_detectable;
    }
  }
  if (tampered) {
    const bool caught = run.abort_info() && run.abort_info()->cause == AbortCause::StateCheckMismatch;
    ++c.tamper_trials;
    if (caught) ++c.tamper_detected;
    if (all_half) {
      ++c.tamper_half_trials;
      if (caught) ++c.tamper_half_detected;
    }
  }

  c.guess_bits = run.attack.guess_bits;
  c.guess_correct = run.attack.guess_correct;
  c.counterfactual_bits = run.attack.counterfactual_bits;
  c.counterfactual_correct = run.attack.counterfactual_correct;
  return c;
}

std::vector<Metric> derive_metrics(const Scenario& s, const TrialCounters& c) {
  const auto kind = s.adversary.kind;
  const bool honest = kind == AdversaryKind::None;
  const bool fake_result = kind == AdversaryKind::Tp1FakeResult || kind == AdversaryKind::Tp2FakeResult;
  const bool intercept = kind == AdversaryKind::EveInterceptResend || kind == AdversaryKind::Tp2Intercept;

  std::vector<Metric> out;
  auto add = [&](std::string name, std::uint64_t k, std::uint64_t total, std::optional<double> target = {}) {
    if (total > 0) out.push_back(make_metric(std::move(name), k, total, target));
  };

  add("completion_rate", c.completed, c.trials, honest ? std::optional{1.0} : std::nullopt);
  add("detection_rate", c.detected, c.trials, honest ? std::optional{0.0} : std::nullopt);

  std::optional<double> step2_target;
  if (intercept && s.decoy_tolerance == 0) {
    step2_target = closed_form("intercept_detection", s.l() * static_cast<int>(s.adversary.links.size()));
  }
  const int checking_step = s.protocol == ProtocolKind::Proposed ? 3 : 4;
  std::optional<double> check_target;
  if (kind == AdversaryKind::Tp1FakeInitialState && !s.adversary.true_state_index && s.adversary.claimed_index == 1) {
    check_target = closed_form("fake_state_detection", s.c());
  }
  const int decoy_step = s.protocol == ProtocolKind::Proposed ? 2 : 3;
  for (int step = 2; step <= 7; ++step) {
    std::optional<double> target;
    if (step == decoy_step) target = step2_target;
    if (step == checking_step) target = check_target;
    if (target || c.detected_at[static_cast<std::size_t>(step)] > 0) {
      add("detection_step" + std::to_string(step), c.detected_at[static_cast<std::size_t>(step)], c.trials, target);
    }
  }

  add("r_exact", c.r_exact, c.pairs, honest ? std::optional{1.0} : std::nullopt);
  add("verdict_correct", c.verdict_correct, c.accepted_pairs, honest ? std::optional{1.0} : std::nullopt);
  add("wrong_verdict_accepted", c.wrong_verdict_accepted, c.accepted_pairs,
      honest ? std::optional{0.0} : std::nullopt);
  add("conflict_rate", c.conflicts, c.cross_checked,
      honest ? std::optional{0.0} : (fake_result ? std::optional{1.0} : std::nullopt));
  if (fake_result) add("liar_identified", c.liar_identified, c.conflicts, 1.0);

  const bool zero_vs_psi1 = check_target.has_value();
  add("check_fail_z", c.check_fail_z, c.checks_z, honest || zero_vs_psi1 ? std::optional{0.0} : std::nullopt);
  add("check_fail_x", c.check_fail_x, c.checks_x,
      honest ? std::optional{0.0} : (zero_vs_psi1 ? std::optional{0.5} : std::nullopt));

  add("tamper_detection", c.tamper_detected, c.tamper_trials);
  if (kind == AdversaryKind::ClassicalPositionTamper) {
    const int l = s.adversary.tampered_checks.value_or(s.c());
    add("tamper_detection_conditional", c.tamper_half_detected, c.tamper_half_trials, closed_form("tamper_detection", l));
  }

  const bool privacy = intercept || kind == AdversaryKind::ParticipantInfer;
  add("guess_accuracy", c.guess_correct, c.guess_bits, privacy ? std::optional{0.5} : std::nullopt);
  add("guess_accuracy_counterfactual", c.counterfactual_correct, c.counterfactual_bits, 1.0);
  return out;
}

TrialStats run_scenario(const Scenario& s, unsigned jobs) {
  s.validate();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(jobs, s.trials));

  std::vector<TrialCounters> partial(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](unsigned w) {
    try {
      for (std::uint64_t k = w; k < s.trials; k += workers) {
        partial[w].merge(tally(s, run_trial(s, k, false)));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  TrialStats stats;
  stats.scenario = s;
  for (const auto& p : partial) stats.counters.merge(p);
  stats.metrics = derive_metrics(s, stats.counters);
  return stats;
}

}  // namespace qpc
