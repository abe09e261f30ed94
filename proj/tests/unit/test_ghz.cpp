#include <doctest.h>

#include <bit>
#include <map>
#include <set>

#include "qpc/bits.hpp"
#include "qpc/errors.hpp"
#include "qpc/ghz.hpp"
#include "qpc/oracle.hpp"
#include "qpc/random.hpp"

using namespace qpc;

namespace {

std::vector<std::string> labels(const GhzSpec& s) {
  std::vector<std::string> out;
  for (const auto& t : x_expansion(s)) out.push_back((t.sign > 0 ? "+" : "-") + t.label(s.size()));
  return out;
}

}  // namespace

TEST_CASE("splitmix64 reference vector and stream split") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(derive_seed(0, 0) == splitmix64(0x9E3779B97F4A7C15ULL));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t k = 0; k < 1000; ++k) seeds.insert(derive_seed(42, k));
  CHECK(seeds.size() == 1000);
}

TEST_CASE("bit strings") {
  CHECK(xor_bits(bits_from_string("1010"), bits_from_string("0110")) == bits_from_string("1100"));
  CHECK(to_string(bits_from_string("0011")) == "0011");
  CHECK(all_zero(bits_from_string("0000")));
  CHECK_FALSE(all_zero(bits_from_string("0100")));
  CHECK_THROWS_AS(xor_bits(bits_from_string("1"), bits_from_string("10")), ContractError);
  CHECK_THROWS_AS(bits_from_string("01a"), ContractError);
}

TEST_CASE("ghz_from_index examples") {
  const auto psi1 = ghz_from_index(1, 3);
  CHECK(psi1.q_bits() == std::vector<int>{0, 0, 0});
  CHECK(psi1.delta() == 0);
  CHECK(psi1.ket() == "(|000> + |111>)/sqrt2");

  const auto psi5 = ghz_from_index(5, 3);
  CHECK(psi5.q_bits() == std::vector<int>{0, 1, 0});
  CHECK(psi5.delta() == 0);

  const auto psi7 = ghz_from_index(7, 4);
  CHECK(psi7.q_bits() == std::vector<int>{0, 0, 1, 1});
  CHECK(psi7.ket() == "(|0011> + |1100>)/sqrt2");

  const auto minus = ghz_from_index(2, 2);
  CHECK(minus.q_bits() == std::vector<int>{0, 0});
  CHECK(minus.delta() == 1);
  CHECK(minus.ket() == "(|00> - |11>)/sqrt2");
}

TEST_CASE("ghz spec validation") {
  CHECK_THROWS_AS(ghz_from_index(0, 3), RangeError);
  CHECK_THROWS_AS(ghz_from_index(9, 3), RangeError);
  CHECK_THROWS_AS(GhzSpec(1, 0, 0), RangeError);
  CHECK_THROWS_AS(GhzSpec(21, 0, 0), RangeError);
  CHECK_THROWS_AS(GhzSpec(3, 0b001, 0), RangeError);
  CHECK_THROWS_AS(GhzSpec(3, 0, 2), RangeError);
  CHECK(family_size(20) == (std::uint64_t{1} << 20));
}

TEST_CASE("index round trip is a bijection") {
  for (int n = 2; n <= 10; ++n) {
    std::set<std::pair<std::uint32_t, int>> seen;
    for (std::uint64_t i = 1; i <= family_size(n); ++i) {
      const auto s = ghz_from_index(i, n);
      CHECK(index_of(s) == i);
      seen.insert({s.q_mask(), s.delta()});
    }
    CHECK(seen.size() == family_size(n));
  }
}

TEST_CASE("x_expansion literals") {
  CHECK(labels(ghz_from_index(5, 3)) == std::vector<std::string>{"++++", "-+--", "+-+-", "---+"});
  CHECK(labels(ghz_from_index(1, 3)) == std::vector<std::string>{"++++", "++--", "+-+-", "+--+"});
  CHECK(labels(ghz_from_index(1, 2)) == std::vector<std::string>{"+++", "+--"});
}

TEST_CASE("x_expansion parity, count and sign properties") {
  for (int n = 2; n <= 9; ++n) {
    for (std::uint64_t i = 1; i <= family_size(n); ++i) {
      const auto s = ghz_from_index(i, n);
      const auto terms = x_expansion(s);
      REQUIRE(terms.size() == (std::size_t{1} << (n - 1)));
      std::set<std::uint32_t> masks;
      for (const auto& t : terms) {
        CHECK(t.minus_count() % 2 == s.delta());
        CHECK(t.sign == (std::popcount(t.minus & s.q_mask()) % 2 ? -1 : 1));
        masks.insert(t.minus);
      }
      CHECK(masks.size() == terms.size());
    }
  }
}

TEST_CASE("x_expansion agrees with the statevector") {
  for (int n = 2; n <= 7; ++n) {
    for (std::uint64_t i = 1; i <= family_size(n); ++i) {
      const auto s = ghz_from_index(i, n);
      auto rotated = StateVector::ghz(s);
      rotated.hadamard_all(all_particles(n));
      rotated.reduce();
      const auto expected = StateVector::from_x_expansion(s);
      CHECK(rotated == expected);
    }
  }
}

TEST_CASE("t_xor examples and properties") {
  const auto psi7 = ghz_from_index(7, 4);
  CHECK(t_xor(psi7, 1, 2) == 0);
  CHECK(t_xor(psi7, 2, 4) == 1);
  for (int k = 1; k <= 4; ++k) CHECK(t_xor(psi7, k, k) == 0);
  CHECK_THROWS_AS(t_xor(psi7, 0, 2), RangeError);
  CHECK_THROWS_AS(t_xor(psi7, 1, 5), RangeError);

  RandomStream rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const auto s = ghz_from_index(1 + rng.below(family_size(n)), n);
    const auto o = sample_measurement(s, all_particles(n), Basis::Z, rng);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) CHECK((o.bit(i) ^ o.bit(j)) == t_xor(s, i, j));
      for (int k = 1; k <= n; ++k) CHECK((t_xor(s, i, k) ^ t_xor(s, k, 1)) == t_xor(s, i, 1));
    }
  }
}

TEST_CASE("sample_measurement examples") {
  RandomStream rng(11);
  const auto psi1 = ghz_from_index(1, 3);
  std::map<std::string, int> z;
  std::map<std::string, int> x;
  std::map<std::string, int> x23;
  const int draws = 40000;
  for (int d = 0; d < draws; ++d) {
    ++z[sample_measurement(psi1, all_particles(3), Basis::Z, rng).label(Basis::Z)];
    ++x[sample_measurement(psi1, all_particles(3), Basis::X, rng).label(Basis::X)];
    ++x23[sample_measurement(psi1, particles({2, 3}), Basis::X, rng).label(Basis::X)];
  }
  CHECK(z.size() == 2);
  CHECK(z.count("000") == 1);
  CHECK(z.count("111") == 1);
  CHECK(x.size() == 4);
  for (const auto* k : {"+++", "+--", "-+-", "--+"}) CHECK(x.count(k) == 1);
  CHECK(x23.size() == 4);
  const auto within = [&](int count, double p) {
    return std::abs(count / double(draws) - p) <= 3 * std::sqrt(p * (1 - p) / draws);
  };
  CHECK(within(z["000"], 0.5));
  for (const auto& [k, v] : x) CHECK(within(v, 0.25));
  for (const auto& [k, v] : x23) CHECK(within(v, 0.25));
}

TEST_CASE("sample_measurement rejects bad positions") {
  RandomStream rng(1);
  const auto s = ghz_from_index(1, 3);
  CHECK_THROWS_AS(sample_measurement(s, 0, Basis::Z, rng), RangeError);
  CHECK_THROWS_AS(sample_measurement(s, particles({4}), Basis::Z, rng), RangeError);
}
