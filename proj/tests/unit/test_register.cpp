#include <doctest.h>

#include <cmath>
#include <map>

#include "qpc/errors.hpp"
#include "qpc/oracle.hpp"
#include "qpc/qubit_register.hpp"

using namespace qpc;

TEST_CASE("Z measurement of one particle collapses the rest") {
  RandomStream rng(3);
  for (int t = 0; t < 200; ++t) {
    auto reg = QubitRegister::ghz(ghz_from_index(7, 4));
    const int b1 = reg.measure(particles({1}), Basis::Z, rng).bit(1);
    CHECK(reg.is_consumed(1));
    CHECK(reg.predict(2, Basis::Z) == b1);
    CHECK(reg.predict(3, Basis::Z) == 1 - b1);
    CHECK(reg.predict(4, Basis::Z) == 1 - b1);
    CHECK(reg.measure(particles({4}), Basis::Z, rng).bit(4) == 1 - b1);
  }
}

TEST_CASE("consumed particles cannot be measured again") {
  RandomStream rng(1);
  auto reg = QubitRegister::ghz(ghz_from_index(1, 3));
  reg.measure(particles({2}), Basis::X, rng);
  CHECK_THROWS_AS(reg.measure(particles({2}), Basis::Z, rng), StateError);
  CHECK_THROWS_AS(reg.measure(particles({4}), Basis::Z, rng), RangeError);
  CHECK_THROWS_AS(reg.measure(0, Basis::Z, rng), RangeError);
}

TEST_CASE("X measurements one particle at a time keep the parity") {
  RandomStream rng(9);
  for (std::uint64_t i = 1; i <= 16; ++i) {
    const auto spec = ghz_from_index(i, 4);
    for (int t = 0; t < 100; ++t) {
      auto reg = QubitRegister::ghz(spec);
      int parity = 0;
      for (int k = 1; k <= 4; ++k) parity ^= reg.measure(particles({k}), Basis::X, rng).bit(k);
      CHECK(parity == spec.delta());
    }
  }
}

TEST_CASE("mixed-basis single-particle measurements match the oracle marginals") {
  // Particles 1 and 2 in X, then 3 in Z: for Psi_1 every outcome is uniform.
  RandomStream rng(21);
  std::map<int, int> counts;
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    auto reg = QubitRegister::ghz(ghz_from_index(1, 3));
    const int a = reg.measure(particles({1}), Basis::X, rng).bit(1);
    const int b = reg.measure(particles({2}), Basis::X, rng).bit(2);
    const int c = reg.measure(particles({3}), Basis::Z, rng).bit(3);
    ++counts[a * 4 + b * 2 + c];
  }
  CHECK(counts.size() == 8);
  for (const auto& [k, v] : counts) CHECK(std::abs(v / double(draws) - 0.125) < 3 * std::sqrt(0.125 * 0.875 / draws));
}

TEST_CASE("disturb leaves the particle measurable in its new eigenstate") {
  RandomStream rng(4);
  for (int t = 0; t < 100; ++t) {
    auto reg = QubitRegister::ghz(ghz_from_index(1, 3));
    const int bit = reg.disturb(2, Basis::Z, rng);
    CHECK_FALSE(reg.is_consumed(2));
    CHECK(reg.measure(particles({2}), Basis::Z, rng).bit(2) == bit);
    CHECK(reg.measure(particles({1}), Basis::Z, rng).bit(1) == bit);
  }
}

TEST_CASE("product registers and eigenstate helpers") {
  RandomStream rng(2);
  auto reg = QubitRegister::product({Eigenstate::Zero, Eigenstate::One, Eigenstate::Plus});
  CHECK(reg.entangled() == 0);
  CHECK(reg.predict(1, Basis::Z) == 0);
  CHECK(reg.predict(2, Basis::Z) == 1);
  CHECK_FALSE(reg.predict(3, Basis::Z).has_value());
  CHECK(reg.predict(3, Basis::X) == 0);
  const auto o = reg.measure(all_particles(3), Basis::Z, rng);
  CHECK(o.bit(1) == 0);
  CHECK(o.bit(2) == 1);

  CHECK(eigenstate(Basis::X, 1) == Eigenstate::Minus);
  CHECK(basis_of(Eigenstate::Plus) == Basis::X);
  CHECK(bit_of(Eigenstate::One) == 1);
  auto s = Eigenstate::One;
  CHECK(measure_eigenstate(s, Basis::Z, rng) == 1);
}

TEST_CASE("statevector weights are exact") {
  const auto zero = StateVector::basis_state(3, 0);
  const auto [wz, tz] = zero.born_weights(all_particles(3), 0);
  CHECK(tz == 1);
  CHECK(wz.at(0) == 1);
  const auto [wx, tx] = zero.born_weights(all_particles(3), all_particles(3));
  CHECK(tx == 8);
  CHECK(wx.size() == 8);

  // |psi-> = (|01> - |10>)/sqrt2 measured in Z: anticorrelated.
  const auto psi_minus = StateVector::ghz(ghz_from_index(4, 2));
  const auto [w, t] = psi_minus.born_weights(all_particles(2), 0);
  CHECK(t == 2);
  CHECK(w.size() == 2);
  CHECK(w.at(0b01) == 1);
  CHECK(w.at(0b10) == 1);
  CHECK(psi_minus.coefficient(0b10) == 1);
  CHECK(psi_minus.coefficient(0b01) == -1);
}

TEST_CASE("statevector capacity bound") {
  CHECK_NOTHROW(StateVector::ghz(ghz_from_index(1, 12)));
  CHECK_THROWS_AS(StateVector::ghz(ghz_from_index(1, 13)), CapabilityError);
  RandomStream rng(1);
  CHECK_THROWS_AS(oracle_sample(ghz_from_index(1, 13), 1, Basis::Z, rng), CapabilityError);
}

TEST_CASE("oracle sampler reproduces Psi_1 X outcomes") {
  RandomStream rng(8);
  const OracleSampler s(StateVector::ghz(ghz_from_index(1, 3)), all_particles(3), all_particles(3));
  CHECK(s.total() == 16);
  std::map<std::string, int> seen;
  for (int d = 0; d < 4000; ++d) ++seen[s.sample(rng).label(Basis::X)];
  CHECK(seen.size() == 4);
  for (const auto* k : {"+++", "+--", "-+-", "--+"}) CHECK(seen.count(k) == 1);
}
