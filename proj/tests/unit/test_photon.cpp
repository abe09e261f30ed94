#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "qpc/errors.hpp"
#include "qpc/photon.hpp"

using namespace qpc;

TEST_CASE("generate_decoys") {
  RandomStream rng(1);
  CHECK(generate_decoys(0, rng).empty());
  const std::size_t l = 400000;
  std::map<DecoyState, std::size_t> counts;
  for (auto d : generate_decoys(l, rng)) ++counts[d];
  CHECK(counts.size() == 4);
  const double sigma = std::sqrt(0.25 * 0.75 / l);
  for (const auto& [state, c] : counts) CHECK(std::abs(c / double(l) - 0.25) <= 3 * sigma);
}

TEST_CASE("measure_decoy") {
  RandomStream rng(2);
  for (int t = 0; t < 100; ++t) {
    auto one = Eigenstate::One;
    CHECK(measure_decoy(one, Basis::Z, rng) == 1);
    auto plus = Eigenstate::Plus;
    CHECK(measure_decoy(plus, Basis::X, rng) == 0);
  }
  int ones = 0;
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    auto zero = Eigenstate::Zero;
    ones += measure_decoy(zero, Basis::X, rng);
  }
  CHECK(std::abs(ones / double(draws) - 0.5) <= 3 * std::sqrt(0.25 / draws));

  int mismatches = 0;
  for (int t = 0; t < draws; ++t) {
    auto d = Eigenstate::Minus;
    measure_decoy(d, Basis::Z, rng);
    mismatches += measure_decoy(d, Basis::X, rng) != 1;
  }
  CHECK(std::abs(mismatches / double(draws) - 0.5) <= 3 * std::sqrt(0.25 / draws));
}

TEST_CASE("interleave") {
  RandomStream rng(3);
  const std::vector<DecoyState> one{Eigenstate::Plus};
  const auto single = interleave({}, one, rng);
  REQUIRE(single.sequence.size() == 1);
  CHECK(single.sequence[0] == PhotonSlot::decoy(Eigenstate::Plus));
  CHECK(single.decoy_positions == std::vector<std::size_t>{0});

  const int m = 5;
  std::vector<PhotonSlot> carriers;
  for (int r = 0; r < 2 * m; ++r) carriers.push_back(PhotonSlot::carrier(r, 2));
  const auto decoys = generate_decoys(2 * m, rng);
  const auto merged = interleave(carriers, decoys, rng);
  CHECK(merged.sequence.size() == 4 * m);
  CHECK(std::is_sorted(merged.decoy_positions.begin(), merged.decoy_positions.end()));
  std::vector<PhotonSlot> kept;
  for (const auto& s : merged.sequence) {
    if (!s.is_decoy()) kept.push_back(s);
  }
  CHECK(kept == carriers);
  for (std::size_t d = 0; d < decoys.size(); ++d) {
    CHECK(merged.sequence[merged.decoy_positions[d]].decoy_state() == decoys[d]);
  }
}

TEST_CASE("public_discussion") {
  RandomStream rng(4);
  for (int l : {0, 1, 7, 50}) {
    const auto decoys = generate_decoys(static_cast<std::size_t>(l), rng);
    const auto merged = interleave({}, decoys, rng);
    auto seq = merged.sequence;
    std::vector<QubitRegister> regs;
    QuantumChannel(PartyId::tp1(), PartyId::participant(1)).transmit(seq, regs, rng);
    std::vector<DecoyAnnouncement> ann;
    std::vector<int> res;
    for (std::size_t d = 0; d < decoys.size(); ++d) {
      ann.push_back({merged.decoy_positions[d], basis_of(decoys[d])});
      res.push_back(measure_decoy(seq[merged.decoy_positions[d]].decoy_state(), basis_of(decoys[d]), rng));
    }
    const auto report = public_discussion(ann, res, decoys);
    CHECK(report.passed);
    CHECK(report.mismatches == 0);
    CHECK(report.checked == decoys.size());
  }

  const std::vector<DecoyState> expected{Eigenstate::Zero, Eigenstate::Plus};
  const std::vector<DecoyAnnouncement> ann{{0, Basis::Z}, {1, Basis::X}};
  CHECK_FALSE(public_discussion(ann, std::vector<int>{1, 0}, expected).passed);
  CHECK(public_discussion(ann, std::vector<int>{1, 0}, expected, 1).passed);
  CHECK_THROWS_AS(public_discussion(ann, std::vector<int>{0}, expected), ContractError);
  const std::vector<DecoyAnnouncement> wrong_basis{{0, Basis::X}, {1, Basis::X}};
  CHECK_THROWS_AS(public_discussion(wrong_basis, std::vector<int>{0, 0}, expected), ContractError);
}

TEST_CASE("intercept-resend tap detects each decoy with probability 1/4") {
  RandomStream rng(5);
  QuantumChannel channel(PartyId::tp1(), PartyId::participant(1));
  channel.add_tap([](PhotonSlot& slot, std::vector<QubitRegister>&, RandomStream& r) {
    if (slot.is_decoy()) measure_decoy(slot.decoy_state(), r.bit() ? Basis::X : Basis::Z, r);
  });
  CHECK(channel.tap_count() == 1);
  const std::size_t l = 40000;
  const auto decoys = generate_decoys(l, rng);
  const auto merged = interleave({}, decoys, rng);
  auto seq = merged.sequence;
  std::vector<QubitRegister> regs;
  channel.transmit(seq, regs, rng);
  std::vector<DecoyAnnouncement> ann;
  std::vector<int> res;
  for (std::size_t d = 0; d < l; ++d) {
    ann.push_back({d, basis_of(decoys[d])});
    res.push_back(measure_decoy(seq[d].decoy_state(), basis_of(decoys[d]), rng));
  }
  const auto report = public_discussion(ann, res, decoys);
  CHECK(std::abs(report.mismatches / double(l) - 0.25) <= 3 * std::sqrt(0.25 * 0.75 / l));
}
