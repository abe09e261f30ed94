#include <doctest.h>

#include "qpc/adversary.hpp"
#include "qpc/errors.hpp"
#include "qpc/protocol.hpp"

using namespace qpc;

namespace {

Outcome outcome_of(const char* label) {
  Outcome o;
  for (int k = 0; label[k]; ++k) {
    o.measured |= ParticleSet{1} << k;
    if (label[k] == '1' || label[k] == '-') o.bits |= 1u << k;
  }
  return o;
}

std::vector<Bits> random_secrets(int n, int m, RandomStream& rng) {
  std::vector<Bits> out;
  for (int k = 0; k < n; ++k) out.push_back(random_bits(static_cast<std::size_t>(m), rng));
  return out;
}

}  // namespace

TEST_CASE("consistency of check outcomes with the claimed state") {
  const auto psi1 = ghz_from_index(1, 3);
  CHECK(consistent_with(psi1, Basis::Z, outcome_of("000")));
  CHECK(consistent_with(psi1, Basis::Z, outcome_of("111")));
  CHECK_FALSE(consistent_with(psi1, Basis::Z, outcome_of("010")));
  for (const auto* ok : {"+++", "+--", "-+-", "--+"}) CHECK(consistent_with(psi1, Basis::X, outcome_of(ok)));
  for (const auto* bad : {"-++", "---", "++-", "+-+"}) CHECK_FALSE(consistent_with(psi1, Basis::X, outcome_of(bad)));

  const std::vector<GhzSpec> claimed{psi1, ghz_from_index(5, 3)};
  const std::vector<int> positions{0, 1};
  const std::vector<Basis> bases{Basis::Z, Basis::Z};
  const std::vector<Outcome> outcomes{outcome_of("000"), outcome_of("101")};
  const auto report = step3_check(positions, bases, outcomes, claimed);
  CHECK(report.passed);
  const std::vector<Outcome> bad{outcome_of("000"), outcome_of("111")};
  CHECK_FALSE(step3_check(positions, bases, bad, claimed).passed);
  CHECK_THROWS_AS(step3_check(positions, bases, std::vector<Outcome>{outcome_of("000")}, claimed), ContractError);
}

TEST_CASE("announcements and cross checks") {
  const auto same = make_announcement(PartyId::tp1(), 1, 2, bits_from_string("0000"), false);
  CHECK(same.verdict == Verdict::Identical);
  CHECK_FALSE(same.r.has_value());
  auto diff = make_announcement(PartyId::tp2(), 1, 2, bits_from_string("0100"), true);
  CHECK(diff.verdict == Verdict::Different);
  CHECK(*diff.r == bits_from_string("0100"));
  CHECK(cross_check(same, same) == CrossCheck::Accepted);
  CHECK(cross_check(same, diff) == CrossCheck::Conflict);
  flip(diff);
  CHECK(diff.verdict == Verdict::Identical);
  CHECK(all_zero(*diff.r));
  auto other = make_announcement(PartyId::tp2(), 1, 3, bits_from_string("0000"), false);
  CHECK_THROWS_AS(cross_check(same, other), ContractError);
}

TEST_CASE("worked XOR example") {
  const auto k = bits_from_string("0110");
  const auto m = bits_from_string("1010");
  const auto c = xor_bits(k, m);
  CHECK(c == bits_from_string("1100"));
  const auto pad = bits_from_string("0000");
  const auto r = xor_bits(pad, xor_bits(c, c));
  CHECK(make_announcement(PartyId::tp1(), 1, 2, r, false).verdict == Verdict::Identical);
}

TEST_CASE("tamper half-detectability") {
  const auto psi1 = ghz_from_index(1, 3);
  CHECK(substitution_half_detectable(psi1, ghz_from_index(7, 3)));
  CHECK(substitution_half_detectable(psi1, ghz_from_index(2, 3)));
  CHECK(substitution_half_detectable(psi1, psi1));
  CHECK_FALSE(substitution_half_detectable(psi1, ghz_from_index(5, 3)));
}

TEST_CASE("honest runs compute M_i xor M_j exactly") {
  RandomStream rng(17);
  for (int n = 2; n <= 6; ++n) {
    for (int t = 0; t < 30; ++t) {
      ProtocolParams p;
      p.n = n;
      p.m = 12;
      p.check_rounds = 6;
      p.decoy_count = 10;
      p.variant = t % 2 ? Variant::Tp2Relay : Variant::ClassicalBroadcast;
      p.announce_vectors = t % 3 == 0;
      const auto secrets = random_secrets(n, p.m, rng);
      const auto run = run_proposed(p, secrets, rng);
      REQUIRE(run.completed());
      CHECK(run.pairs.size() == static_cast<std::size_t>(n * (n - 1) / 2));
      CHECK(run.checked_positions.size() == 6);
      CHECK(run.key_positions.size() == 12);
      for (const auto& pr : run.pairs) {
        CHECK(pr.r_tp1 == xor_bits(secrets[pr.i - 1], secrets[pr.j - 1]));
        CHECK(*pr.r_tp2 == pr.r_tp1);
        CHECK(pr.tp1.verdict == pr.true_verdict());
        CHECK(*pr.check == CrossCheck::Accepted);
        CHECK(pr.tp1.r.has_value() == p.announce_vectors);
      }
    }
  }
}

TEST_CASE("equal secrets give identical verdicts") {
  RandomStream rng(5);
  ProtocolParams p;
  p.n = 4;
  const auto s = random_bits(8, rng);
  const auto run = run_proposed(p, {s, s, s, s}, rng);
  for (const auto& pr : run.pairs) CHECK(pr.tp1.verdict == Verdict::Identical);
}

TEST_CASE("arbiter identifies the liar") {
  RandomStream rng(6);
  ProtocolParams p;
  p.n = 3;
  const auto run = run_proposed(p, random_secrets(3, p.m, rng), rng);
  REQUIRE(run.completed());
  const auto& pr = run.pairs.front();
  CHECK(arbiter_identify(run.claimed, run.key_positions, run.comparison, pr.tp1, *pr.tp2) == Liar::None);
  auto lie = pr.tp1;
  flip(lie);
  CHECK(arbiter_identify(run.claimed, run.key_positions, run.comparison, lie, *pr.tp2) == Liar::TP1);
  auto lie2 = *pr.tp2;
  flip(lie2);
  CHECK(arbiter_identify(run.claimed, run.key_positions, run.comparison, pr.tp1, lie2) == Liar::TP2);
}

TEST_CASE("honest transcript is ordered and complete") {
  RandomStream rng(2);
  ProtocolParams p;
  const auto run = run_proposed(p, random_secrets(p.n, p.m, rng), rng);
  CHECK(run.transcript.completed());
  CHECK_FALSE(run.transcript.aborted());
  int last = 0;
  for (const auto& e : run.transcript.events()) {
    CHECK(e.step >= last);
    last = e.step;
  }
  CHECK(last == 7);
  CHECK(ProtocolTranscript::from_json(run.transcript.to_json()) == run.transcript);
}

TEST_CASE("same seed, same run") {
  ProtocolParams p;
  p.n = 4;
  RandomStream a(99);
  RandomStream b(99);
  RandomStream sa(1);
  const auto secrets = random_secrets(4, p.m, sa);
  CHECK(run_proposed(p, secrets, a).transcript == run_proposed(p, secrets, b).transcript);
}

TEST_CASE("parameter contracts") {
  RandomStream rng(1);
  ProtocolParams p;
  p.n = 3;
  CHECK_THROWS_AS(run_proposed(p, random_secrets(2, p.m, rng), rng), ContractError);
  CHECK_THROWS_AS(run_proposed(p, random_secrets(3, p.m + 1, rng), rng), ContractError);
  p.check_rounds = p.m + 1;
  CHECK_THROWS_AS(run_proposed(p, random_secrets(3, p.m, rng), rng), ContractError);
}

TEST_CASE("broken pad fault breaks correctness") {
  RandomStream rng(8);
  ProtocolParams p;
  p.fault = FaultInjection::BrokenPad;
  const auto secrets = random_secrets(p.n, p.m, rng);
  const auto run = run_proposed(p, secrets, rng);
  for (const auto& pr : run.pairs) CHECK(pr.r_tp1 != xor_bits(secrets[pr.i - 1], secrets[pr.j - 1]));
}

TEST_CASE("baseline protocol") {
  RandomStream rng(12);
  BaselineParams p;
  for (int t = 0; t < 50; ++t) {
    const auto secrets = random_secrets(2, p.m, rng);
    const auto run = run_zhang_baseline(p, secrets, rng);
    REQUIRE(run.completed());
    REQUIRE(run.pairs.size() == 1);
    CHECK(run.pairs[0].r_tp1 == xor_bits(secrets[0], secrets[1]));
    CHECK_FALSE(run.pairs[0].check.has_value());
    for (std::size_t b = 0; b < run.key_positions.size(); ++b) {
      const auto& spec = run.prepared[static_cast<std::size_t>(run.key_positions[b])];
      CHECK((run.keys[0][b] ^ run.keys[1][b]) == t_xor(spec, 1, 2));
      if (index_of(spec) == 4) CHECK((run.keys[0][b] ^ run.keys[1][b]) == 1);
    }
  }
  for (const auto& spec : run_zhang_baseline(p, random_secrets(2, p.m, rng), rng).prepared) {
    CHECK((index_of(spec) == 1 || index_of(spec) == 4));
  }
  CHECK_THROWS_AS(run_zhang_baseline(p, random_secrets(3, p.m, rng), rng), ContractError);
}
