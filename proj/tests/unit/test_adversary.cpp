#include <doctest.h>

#include <cmath>

#include "qpc/adversary.hpp"
#include "qpc/errors.hpp"
#include "qpc/harness.hpp"

using namespace qpc;

namespace {

Scenario scenario(AdversaryKind kind, std::uint64_t trials = 2000) {
  Scenario s;
  s.n = 3;
  s.m = 8;
  s.trials = trials;
  s.seed = 31;
  s.adversary.kind = kind;
  return s;
}

bool near(const Metric& m, double target) {
  return std::abs(m.estimate - target) <= 3 * std::sqrt(target * (1 - target) / m.trials) + 1e-12;
}

}  // namespace

TEST_CASE("kind names round trip") {
  for (auto k : {AdversaryKind::None, AdversaryKind::EveInterceptResend, AdversaryKind::Tp1FakeInitialState,
                 AdversaryKind::Tp1FakeResult, AdversaryKind::Tp2FakeResult, AdversaryKind::Tp2Intercept,
                 AdversaryKind::ParticipantInfer, AdversaryKind::ClassicalPositionTamper}) {
    CHECK(adversary_kind_from_string(to_string(k)) == k);
    AdversaryConfig c;
    c.kind = k;
    CHECK(make_adversary(c, 3)->kind() == k);
  }
  CHECK_THROWS_AS(adversary_kind_from_string("mallory"), ConfigError);
}

TEST_CASE("inactive adversary adds no perturbation") {
  RandomStream seeds(4);
  ProtocolParams p;
  std::vector<Bits> secrets;
  for (int k = 0; k < p.n; ++k) secrets.push_back(random_bits(static_cast<std::size_t>(p.m), seeds));
  RandomStream a(77);
  RandomStream b(77);
  auto none = make_adversary(AdversaryConfig{}, p.n);
  CHECK(run_proposed(p, secrets, a).transcript == run_proposed(p, secrets, *none, b).transcript);
}

TEST_CASE("validation") {
  AdversaryConfig c;
  c.kind = AdversaryKind::EveInterceptResend;
  c.links = {4};
  CHECK_THROWS_AS(validate(c, 3), ConfigError);
  c.links = {1, 1};
  CHECK_THROWS_AS(validate(c, 3), ConfigError);
  c.links = {};
  CHECK_THROWS_AS(validate(c, 3), ConfigError);
  c.kind = AdversaryKind::Tp1FakeResult;
  c.pairs = {{2, 1}};
  CHECK_THROWS_AS(validate(c, 3), ConfigError);
  c.kind = AdversaryKind::Tp1FakeInitialState;
  c.claimed_index = 9;
  CHECK_THROWS_AS(validate(c, 3), ConfigError);
  c.kind = AdversaryKind::ParticipantInfer;
  c.victim = 0;
  try {
    validate(c, 3);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "adversary.params.victim");
  }
}

TEST_CASE("fake result by either TP always conflicts and the arbiter names it") {
  for (auto kind : {AdversaryKind::Tp1FakeResult, AdversaryKind::Tp2FakeResult}) {
    const auto stats = run_scenario(scenario(kind, 300));
    CHECK(stats.at("conflict_rate").estimate == 1.0);
    CHECK(stats.at("liar_identified").estimate == 1.0);
    CHECK(stats.at("detection_step7").estimate == 1.0);
  }
  auto one_pair = scenario(AdversaryKind::Tp2FakeResult, 100);
  one_pair.adversary.pairs = {{2, 3}};
  const auto stats = run_scenario(one_pair);
  CHECK(stats.counters.conflicts == 100);
  CHECK(stats.counters.cross_checked == 300);
}

TEST_CASE("fake result against the baseline goes unnoticed") {
  auto s = scenario(AdversaryKind::Tp1FakeResult, 300);
  s.n = 2;
  s.protocol = ProtocolKind::ZhangBaseline;
  const auto stats = run_scenario(s);
  CHECK(stats.counters.detected == 0);
  CHECK(stats.at("wrong_verdict_accepted").estimate == 1.0);
}

TEST_CASE("fake initial state: Z checks never fail, X checks fail half the time") {
  auto s = scenario(AdversaryKind::Tp1FakeInitialState, 4000);
  s.check_rounds = 4;
  const auto stats = run_scenario(s);
  CHECK(stats.counters.check_fail_z == 0);
  CHECK(near(stats.at("check_fail_x"), 0.5));
  CHECK(near(stats.at("detection_step3"), closed_form("fake_state_detection", 4)));
  CHECK(stats.at("guess_accuracy").estimate == 1.0);
}

TEST_CASE("fake initial state with a wrong GHZ state") {
  auto s = scenario(AdversaryKind::Tp1FakeInitialState, 300);
  s.adversary.true_state_index = 5;
  s.adversary.claimed_index = 1;
  const auto stats = run_scenario(s);
  CHECK(stats.counters.detected > 0);
}

TEST_CASE("intercept-resend decoy detection") {
  auto s = scenario(AdversaryKind::EveInterceptResend, 5000);
  s.decoy_count = 5;
  const auto stats = run_scenario(s);
  CHECK(near(stats.at("detection_step2"), closed_form("intercept_detection", 5)));
  CHECK(stats.at("detection_step2").target.has_value());

  s.adversary.links = {1, 3};
  const auto two = run_scenario(s);
  CHECK(near(two.at("detection_step2"), closed_form("intercept_detection", 10)));
}

TEST_CASE("tp2 intercept without decoys passes the decoy check") {
  auto s = scenario(AdversaryKind::Tp2Intercept, 500);
  s.decoy_count = 0;
  const auto stats = run_scenario(s);
  CHECK(stats.counters.detected_at[2] == 0);
}

TEST_CASE("participant inference") {
  auto s = scenario(AdversaryKind::ParticipantInfer, 1000);
  const auto stats = run_scenario(s);
  CHECK(near(stats.at("guess_accuracy"), 0.5));
  CHECK(stats.at("guess_accuracy_counterfactual").estimate == 1.0);
  s.adversary.victim = 1;
  CHECK(run_scenario(s).at("guess_accuracy").estimate == 1.0);
}

TEST_CASE("position tamper") {
  auto s = scenario(AdversaryKind::ClassicalPositionTamper, 4000);
  s.check_rounds = 2;
  s.spec_pool = {1, 7};
  const auto stats = run_scenario(s);
  CHECK(stats.counters.tamper_trials == 4000);
  CHECK(stats.counters.tamper_half_trials == 4000);
  CHECK(near(stats.at("tamper_detection_conditional"), closed_form("tamper_detection", 2)));

  s.spec_pool = {1, 5};
  s.trials = 2000;
  const auto mixed = run_scenario(s);
  CHECK(mixed.at("tamper_detection").estimate > closed_form("tamper_detection", 2));

  s.variant = Variant::Tp2Relay;
  const auto relay = run_scenario(s);
  CHECK(relay.counters.completed == relay.counters.trials);
  CHECK(relay.counters.tamper_trials == 0);
}
