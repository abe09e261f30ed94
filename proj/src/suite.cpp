#include "qpc/suite.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "qpc/errors.hpp"
#include "qpc/harness.hpp"
#include "qpc/oracle.hpp"
#include "qpc/stats_io.hpp"

namespace qpc {

using nlohmann::json;

bool CriterionResult::pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

bool SuiteReport::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass(); });
}

std::vector<std::string> available_suites() { return {"paper_tables"}; }

namespace {

std::uint64_t seed_for(const SuiteOptions& o, int criterion, int row) {
  return derive_seed(o.seed, static_cast<std::uint64_t>(criterion) * 1000 + static_cast<std::uint64_t>(row));
}

SuiteRow from_metric(std::string name, const Metric& metric, double target) {
  Metric m = metric;
  m.target = target;
  SuiteRow row;
  row.name = std::move(name);
  row.metric = m.name;
  row.observed = m.estimate;
  row.target = target;
  row.tolerance = m.tolerance();
  row.trials = m.trials;
  row.pass = m.agrees();
  return row;
}

SuiteRow missing_metric(std::string name, std::string metric, double target) {
  SuiteRow row;
  row.name = std::move(name);
  row.metric = std::move(metric);
  row.observed = std::nan("");
  row.target = target;
  return row;
}

SuiteRow metric_row(std::string name, const TrialStats& stats, std::string_view metric, double target) {
  if (const auto* m = stats.find(metric)) return from_metric(std::move(name), *m, target);
  return missing_metric(std::move(name), std::string(metric), target);
}

SuiteRow exact_count(std::string name, std::string metric, std::uint64_t mismatches, std::uint64_t cases) {
  SuiteRow row;
  row.name = std::move(name);
  row.metric = std::move(metric);
  row.observed = static_cast<double>(mismatches);
  row.target = 0.0;
  row.trials = cases;
  row.pass = mismatches == 0 && cases > 0;
  return row;
}

Scenario base(const SuiteOptions& o, int criterion, int row, int n, int m, std::uint64_t trials) {
  Scenario s;
  s.n = n;
  s.m = m;
  s.trials = trials;
  s.seed = seed_for(o, criterion, row);
  s.fault = o.fault;
  return s;
}

CriterionResult honest_correctness(const SuiteOptions& o) {
  CriterionResult out{1, "honest correctness", {}, 0.0};
  for (int n = 2; n <= 5; ++n) {
    auto s = base(o, 1, 2 * n, n, 16, 500);
    const auto uniform = run_scenario(s, o.jobs);
    s.seed = seed_for(o, 1, 2 * n + 1);
    s.secret_policy = SecretPolicy::ForcedEqual;
    const auto equal = run_scenario(s, o.jobs);
    TrialCounters c = uniform.counters;
    c.merge(equal.counters);
    TrialStats merged{s, c, derive_metrics(s, c)};
    const auto label = "honest n=" + std::to_string(n);
    out.rows.push_back(metric_row(label, merged, "r_exact", 1.0));
    out.rows.push_back(metric_row(label, merged, "verdict_correct", 1.0));
  }
  return out;
}

Scenario eve(const SuiteOptions& o, int row, int l, AdversaryKind kind) {
  auto s = base(o, 2, row, 3, 4, 10000);
  s.decoy_count = l;
  s.adversary.kind = kind;
  s.adversary.links = {1};
  return s;
}

CriterionResult outsider_detection(const SuiteOptions& o) {
  CriterionResult out{2, "intercept-resend detection by decoys", {}, 0.0};
  int row = 0;
  for (int l : {1, 5, 10, 20}) {
    const auto stats = run_scenario(eve(o, row++, l, AdversaryKind::EveInterceptResend), o.jobs);
    out.rows.push_back(metric_row("eve link 1 l=" + std::to_string(l), stats, "detection_step2",
                                  closed_form("intercept_detection", l)));
  }
  const auto stats = run_scenario(eve(o, row, 10, AdversaryKind::Tp2Intercept), o.jobs);
  out.rows.push_back(metric_row("tp2 link 1 l=10", stats, "detection_step2", closed_form("intercept_detection", 10)));
  return out;
}

CriterionResult fake_result(const SuiteOptions& o) {
  CriterionResult out{3, "fake-result detectability", {}, 0.0};
  int row = 0;
  for (auto kind : {AdversaryKind::Tp1FakeResult, AdversaryKind::Tp2FakeResult}) {
    auto s = base(o, 3, row++, 3, 8, 1000);
    s.adversary.kind = kind;
    const auto stats = run_scenario(s, o.jobs);
    const auto label = std::string(to_string(kind));
    out.rows.push_back(metric_row(label, stats, "conflict_rate", 1.0));
    out.rows.push_back(metric_row(label, stats, "liar_identified", 1.0));
  }
  auto s = base(o, 3, row, 2, 8, 1000);
  s.protocol = ProtocolKind::ZhangBaseline;
  s.adversary.kind = AdversaryKind::Tp1FakeResult;
  const auto stats = run_scenario(s, o.jobs);
  out.rows.push_back(metric_row("baseline tp1_fake_result", stats, "detection_rate", 0.0));
  out.rows.push_back(metric_row("baseline tp1_fake_result", stats, "wrong_verdict_accepted", 1.0));
  return out;
}

CriterionResult fake_state(const SuiteOptions& o) {
  CriterionResult out{4, "fake initial state detection", {}, 0.0};
  int row = 0;
  for (int c : {4, 8, 16}) {
    auto s = base(o, 4, row++, 3, 16, 10000);
    s.check_rounds = c;
    s.adversary.kind = AdversaryKind::Tp1FakeInitialState;
    const auto stats = run_scenario(s, o.jobs);
    const auto label = "zero vs Psi1 c=" + std::to_string(c);
    out.rows.push_back(metric_row(label, stats, "detection_rate", closed_form("fake_state_detection", c)));
    out.rows.push_back(metric_row(label, stats, "check_fail_x", 0.5));
    out.rows.push_back(metric_row(label, stats, "check_fail_z", 0.0));
  }
  for (int c = 1; c <= 3; ++c) {
    const auto [num, den] = exhaustive_fake_state_detection(c);
    std::uint64_t pow4 = 1;
    std::uint64_t pow3 = 1;
    for (int k = 0; k < c; ++k) {
      pow4 *= 4;
      pow3 *= 3;
    }
    SuiteRow r;
    r.name = "exhaustive oracle c=" + std::to_string(c);
    r.metric = "detection_probability";
    r.observed = static_cast<double>(num) / static_cast<double>(den);
    r.target = closed_form("fake_state_detection", c);
    r.trials = den;
    r.pass = num * pow4 == (pow4 - pow3) * den;
    out.rows.push_back(r);
  }
  return out;
}

CriterionResult tamper(const SuiteOptions& o) {
  CriterionResult out{5, "check-position tamper detection", {}, 0.0};
  int row = 0;
  for (int l : {1, 4, 8}) {
    auto s = base(o, 5, row++, 3, 8, 10000);
    s.check_rounds = l;
    s.spec_pool = {1, 7};
    s.adversary.kind = AdversaryKind::ClassicalPositionTamper;
    s.adversary.tampered_checks = l;
    const auto stats = run_scenario(s, o.jobs);
    out.rows.push_back(metric_row("tamper l=" + std::to_string(l), stats, "tamper_detection_conditional",
                                  closed_form("tamper_detection", l)));
  }
  auto s = base(o, 5, row, 3, 8, 1000);
  s.check_rounds = 4;
  s.spec_pool = {1, 7};
  s.variant = Variant::Tp2Relay;
  s.adversary.kind = AdversaryKind::ClassicalPositionTamper;
  s.adversary.tampered_checks = 4;
  const auto stats = run_scenario(s, o.jobs);
  out.rows.push_back(metric_row("tp2_relay under tamper l=4", stats, "completion_rate", 1.0));
  out.rows.push_back(metric_row("tp2_relay under tamper l=4", stats, "r_exact", 1.0));
  return out;
}

CriterionResult privacy(const SuiteOptions& o) {
  CriterionResult out{6, "privacy of undetected runs", {}, 0.0};
  auto s = base(o, 6, 0, 3, 16, 1000);
  s.adversary.kind = AdversaryKind::ParticipantInfer;
  s.adversary.attacker = 1;
  s.adversary.victim = 2;
  const auto infer = run_scenario(s, o.jobs);
  out.rows.push_back(metric_row("participant P1 on P2 blind", infer, "guess_accuracy", 0.5));
  out.rows.push_back(metric_row("participant P1 on P2 knowing states", infer, "guess_accuracy_counterfactual", 1.0));

  auto t = base(o, 6, 1, 3, 16, 1000);
  t.check_rounds = 1;
  t.decoy_count = 0;
  t.adversary.kind = AdversaryKind::Tp2Intercept;
  t.adversary.links = {2};
  const auto tp2 = run_scenario(t, o.jobs);
  out.rows.push_back(metric_row("tp2 intercept on P2 link", tp2, "guess_accuracy", 0.5));
  return out;
}

CriterionResult oracle_equivalence(const SuiteOptions& o) {
  CriterionResult out{7, "sampler vs statevector oracle", {}, 0.0};
  for (int n = 2; n <= 4; ++n) {
    SuiteRow r;
    r.name = "all specs n=" + std::to_string(n);
    r.metric = "max_tvd";
    r.observed = max_sampler_tvd(n, 100000, seed_for(o, 7, n), o.jobs);
    r.target = 0.02;
    r.relation = Relation::Below;
    r.trials = 100000;
    r.pass = r.observed < r.target;
    out.rows.push_back(r);
  }
  return out;
}

struct LiteralTerm {
  const char* label;
  int sign;
};

std::uint64_t literal_mismatches(const GhzSpec& spec, const std::vector<LiteralTerm>& expected) {
  const auto terms = x_expansion(spec);
  if (terms.size() != expected.size()) return std::max(terms.size(), expected.size());
  std::uint64_t bad = 0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (terms[t].label(spec.size()) != expected[t].label || terms[t].sign != expected[t].sign) ++bad;
  }
  return bad;
}

CriterionResult algebra(const SuiteOptions& o) {
  CriterionResult out{8, "algebraic invariants", {}, 0.0};

  std::uint64_t bad = 0;
  std::uint64_t cases = 0;
  for (int n = 2; n <= 8; ++n) {
    for (std::uint64_t i = 1; i <= family_size(n); ++i, ++cases) {
      if (index_of(ghz_from_index(i, n)) != i) ++bad;
    }
  }
  out.rows.push_back(exact_count("index round trip n=2..8", "mismatches", bad, cases));

  bad = literal_mismatches(ghz_from_index(1, 3), {{"+++", 1}, {"+--", 1}, {"-+-", 1}, {"--+", 1}});
  bad += literal_mismatches(ghz_from_index(5, 3), {{"+++", 1}, {"+--", -1}, {"-+-", 1}, {"--+", -1}});
  bad += literal_mismatches(ghz_from_index(7, 4), {{"++++", 1},
                                                   {"++--", 1},
                                                   {"+-+-", -1},
                                                   {"+--+", -1},
                                                   {"-++-", -1},
                                                   {"-+-+", -1},
                                                   {"--++", 1},
                                                   {"----", 1}});
  const auto psi5 = ghz_from_index(5, 3);
  const auto psi7 = ghz_from_index(7, 4);
  if (psi5.ket() != "(|010> + |101>)/sqrt2") ++bad;
  if (psi7.ket() != "(|0011> + |1100>)/sqrt2") ++bad;
  if (t_xor(psi7, 1, 2) != 0) ++bad;
  if (t_xor(psi7, 2, 4) != 1) ++bad;
  out.rows.push_back(exact_count("Psi1 Psi5 Psi7 literals", "mismatches", bad, 20));

  bad = 0;
  cases = 0;
  for (int n = 2; n <= 8; ++n) {
    for (std::uint64_t i = 1; i <= family_size(n); ++i) {
      const auto spec = ghz_from_index(i, n);
      const auto terms = x_expansion(spec);
      if (terms.size() != (std::size_t{1} << (n - 1))) ++bad;
      for (const auto& t : terms) {
        ++cases;
        if (t.minus_count() % 2 != spec.delta()) ++bad;
        const int expected = std::popcount(t.minus & spec.q_mask()) % 2 ? -1 : 1;
        if (t.sign != expected) ++bad;
      }
    }
  }
  out.rows.push_back(exact_count("X-expansion parity and sign n=2..8", "mismatches", bad, cases));

  bad = 0;
  cases = 0;
  for (int n = 2; n <= 6; ++n) {
    for (std::uint64_t i = 1; i <= family_size(n); ++i, ++cases) {
      const auto spec = ghz_from_index(i, n);
      auto back = StateVector::from_x_expansion(spec);
      back.hadamard_all(all_particles(n));
      back.reduce();
      auto direct = StateVector::ghz(spec);
      direct.reduce();
      if (!(back == direct)) ++bad;
    }
  }
  out.rows.push_back(exact_count("X-expansion maps back to the Z ket n=2..6", "mismatches", bad, cases));

  bad = 0;
  cases = 0;
  RandomStream rng(seed_for(o, 8, 0));
  for (int n = 2; n <= 5; ++n) {
    for (int s = 0; s < 10000; ++s) {
      const auto spec = ghz_from_index(1 + rng.below(family_size(n)), n);
      const auto outcome = sample_measurement(spec, all_particles(n), Basis::Z, rng);
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
          ++cases;
          if ((outcome.bit(i) ^ outcome.bit(j)) != t_xor(spec, i, j)) ++bad;
        }
      }
    }
  }
  out.rows.push_back(exact_count("t_xor vs sampled Z outcomes", "mismatches", bad, cases));
  return out;
}

CriterionResult determinism(const SuiteOptions& o) {
  CriterionResult out{9, "determinism across job counts", {}, 0.0};
  const unsigned many = std::max(4u, o.jobs);
  auto check = [&](std::string name, Scenario s) {
    const auto a = stats_to_json(run_scenario(s, 1)).dump();
    const auto b = stats_to_json(run_scenario(s, many)).dump();
    const auto c = stats_to_json(run_scenario(s, 1)).dump();
    out.rows.push_back(exact_count(std::move(name), "differing_outputs", (a != b) + (a != c), 3));
  };
  check("eve l=10 jobs 1 vs " + std::to_string(many), eve(o, 0, 10, AdversaryKind::EveInterceptResend));
  auto s = base(o, 9, 1, 4, 8, 2000);
  s.adversary.kind = AdversaryKind::ClassicalPositionTamper;
  check("tamper n=4 jobs 1 vs " + std::to_string(many), s);
  return out;
}

std::string_view fault_name(FaultInjection f) { return f == FaultInjection::None ? "none" : "txor"; }

}  // namespace

std::pair<std::uint64_t, std::uint64_t> exhaustive_fake_state_detection(int c) {
  if (c < 1 || c > 4) throw RangeError("exhaustive enumeration supports 1..4 rounds");
  constexpr int n = 3;
  const auto claimed = ghz_from_index(1, n);
  const auto zero = StateVector::basis_state(n, 0);

  // Per basis: outcome weights normalized to a shared 2^E denominator.
  struct Branch {
    std::vector<std::pair<Outcome, std::uint64_t>> outcomes;
  };
  std::array<Branch, 2> branches;
  int e_max = 0;
  std::array<std::pair<std::map<std::uint32_t, std::uint64_t>, std::uint64_t>, 2> weights;
  for (int b = 0; b < 2; ++b) {
    weights[b] = zero.born_weights(all_particles(n), b == 0 ? 0 : all_particles(n));
    e_max = std::max(e_max, std::countr_zero(weights[b].second));
  }
  const std::uint64_t round_total = std::uint64_t{1} << e_max;
  for (int b = 0; b < 2; ++b) {
    const auto scale = round_total / weights[b].second;
    for (const auto& [mask, w] : weights[b].first) {
      branches[b].outcomes.push_back({Outcome{all_particles(n), mask}, w * scale});
    }
  }

  // Enumerate every (basis, outcome) sequence over c rounds.
  std::uint64_t detected = 0;
  std::uint64_t denominator = 1;
  for (int r = 0; r < c; ++r) denominator *= 2 * round_total;
  std::function<void(int, std::uint64_t, bool)> walk = [&](int round, std::uint64_t weight, bool caught) {
    if (round == c) {
      if (caught) detected += weight;
      return;
    }
    for (int b = 0; b < 2; ++b) {
      const Basis basis = b == 0 ? Basis::Z : Basis::X;
      for (const auto& [outcome, w] : branches[b].outcomes) {
        walk(round + 1, weight * w, caught || !consistent_with(claimed, basis, outcome));
      }
    }
  };
  walk(0, 1, false);
  return {detected, denominator};
}

double max_sampler_tvd(int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  struct Case {
    std::uint64_t index;
    ParticleSet subset;
    Basis basis;
  };
  std::vector<Case> cases;
  for (std::uint64_t i = 1; i <= family_size(n); ++i) {
    for (ParticleSet subset = 1; subset <= all_particles(n); ++subset) {
      cases.push_back({i, subset, Basis::Z});
      cases.push_back({i, subset, Basis::X});
    }
  }
  std::vector<double> tvd(cases.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cases.size(); k = next++) {
      const auto& cs = cases[k];
      const auto spec = ghz_from_index(cs.index, n);
      const std::size_t outcomes = std::size_t{1} << n;
      std::vector<std::uint64_t> analytic(outcomes, 0);
      std::vector<std::uint64_t> oracle(outcomes, 0);
      RandomStream ra(derive_seed(seed, 2 * k));
      RandomStream rb(derive_seed(seed, 2 * k + 1));
      const OracleSampler sampler(StateVector::ghz(spec), cs.subset, cs.basis == Basis::X ? cs.subset : 0);
      for (std::uint64_t s = 0; s < samples; ++s) {
        ++analytic[sample_measurement(spec, cs.subset, cs.basis, ra).bits];
        ++oracle[sampler.sample(rb).bits];
      }
      double sum = 0.0;
      for (std::size_t z = 0; z < outcomes; ++z) {
        sum += std::abs(static_cast<double>(analytic[z]) - static_cast<double>(oracle[z]));
      }
      tvd[k] = 0.5 * sum / static_cast<double>(samples);
    }
  };
  const unsigned workers = std::max(1u, jobs);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  return *std::max_element(tvd.begin(), tvd.end());
}

CriterionResult run_criterion(int id, const SuiteOptions& options) {
  using Fn = CriterionResult (*)(const SuiteOptions&);
  static constexpr Fn table[] = {honest_correctness, outsider_detection, fake_result,
                                 fake_state,         tamper,             privacy,
                                 oracle_equivalence, algebra,            determinism};
  if (id < 1 || id > 9) throw ConfigError("criteria", "criterion ids run from 1 to 9");
  const auto start = std::chrono::steady_clock::now();
  auto result = table[id - 1](options);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SuiteReport run_suite(std::string_view name, const SuiteOptions& options) {
  if (name != "paper_tables") {
    std::string list;
    for (const auto& s : available_suites()) list += (list.empty() ? "" : ", ") + s;
    throw ConfigError("suite", "unknown suite '" + std::string(name) + "'; available: " + list);
  }
  SuiteReport report;
  report.suite = std::string(name);
  report.seed = options.seed;
  report.fault = options.fault;
  std::vector<int> ids = options.criteria;
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  for (int id : ids) report.criteria.push_back(run_criterion(id, options));
  return report;
}

json report_to_json(const SuiteReport& report) {
  json criteria = json::array();
  for (const auto& c : report.criteria) {
    json rows = json::array();
    for (const auto& r : c.rows) {
      rows.push_back({{"name", r.name},
                      {"metric", r.metric},
                      {"observed", std::isnan(r.observed) ? json(nullptr) : json(r.observed)},
                      {"target", r.target},
                      {"tolerance", r.tolerance},
                      {"relation", r.relation == Relation::Within ? "within" : "below"},
                      {"trials", r.trials},
                      {"pass", r.pass}});
    }
    criteria.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass()}, {"rows", rows}});
  }
  return json{{"schema_version", 1},
              {"suite", report.suite},
              {"seed", report.seed},
              {"fault", std::string(fault_name(report.fault))},
              {"pass", report.pass()},
              {"criteria", criteria}};
}

std::string format_table(const SuiteReport& report, bool with_timing) {
  std::ostringstream out;
  char line[256];
  for (const auto& c : report.criteria) {
    if (with_timing) {
      std::snprintf(line, sizeof line, "[%s] %d. %s (%.1fs)\n", c.pass() ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    c.seconds);
    } else {
      std::snprintf(line, sizeof line, "[%s] %d. %s\n", c.pass() ? "PASS" : "FAIL", c.id, c.title.c_str());
    }
    out << line;
    for (const auto& r : c.rows) {
      const char* rel = r.relation == Relation::Within ? "+/-" : "<";
      if (r.relation == Relation::Within) {
        std::snprintf(line, sizeof line, "    %-4s %-42s %-30s %10.6f  target %.6f %s %.6f  (n=%llu)\n",
                      r.pass ? "ok" : "FAIL", r.name.c_str(), r.metric.c_str(), r.observed, r.target, rel, r.tolerance,
                      static_cast<unsigned long long>(r.trials));
      } else {
        std::snprintf(line, sizeof line, "    %-4s %-42s %-30s %10.6f  %s %.6f  (n=%llu)\n", r.pass ? "ok" : "FAIL",
                      r.name.c_str(), r.metric.c_str(), r.observed, rel, r.target,
                      static_cast<unsigned long long>(r.trials));
      }
      out << line;
    }
  }
  out << (report.pass() ? "suite PASS\n" : "suite FAIL\n");
  return out.str();
}

}  // namespace qpc
