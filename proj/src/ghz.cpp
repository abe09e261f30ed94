#include "qpc/ghz.hpp"

#include <bit>

#include "qpc/errors.hpp"
#include "qpc/qubit_register.hpp"

namespace qpc {

namespace {

void check_size(int n) {
  if (n < GhzSpec::kMinParticles || n > GhzSpec::kMaxParticles) {
    throw RangeError("GHZ particle count must be in [2, 20], got " + std::to_string(n));
  }
}

void check_particle(int n, int k) {
  if (k < 1 || k > n) {
    throw RangeError("particle index " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
}

}  // namespace

char basis_symbol(Basis basis) noexcept { return basis == Basis::Z ? 'Z' : 'X'; }

ParticleSet particles(std::initializer_list<int> indices) {
  ParticleSet set = 0;
  for (int k : indices) {
    check_particle(GhzSpec::kMaxParticles, k);
    set |= ParticleSet{1} << (k - 1);
  }
  return set;
}

ParticleSet all_particles(int n) {
  check_size(n);
  return (ParticleSet{1} << n) - 1;
}

GhzSpec::GhzSpec(int n, std::uint32_t q_mask, int delta) : n_(n), q_(q_mask), delta_(delta) {
  check_size(n);
  if (q_mask & ~all_particles(n)) throw RangeError("q has bits beyond particle " + std::to_string(n));
  if (q_mask & 1u) throw RangeError("q_1 must be 0");
  if (delta != 0 && delta != 1) throw RangeError("delta must be 0 or 1");
}

GhzSpec GhzSpec::from_bits(const std::vector<int>& q, int delta) {
  std::uint32_t mask = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] != 0 && q[k] != 1) throw RangeError("q entries must be bits");
    if (q[k]) mask |= 1u << k;
  }
  return GhzSpec(static_cast<int>(q.size()), mask, delta);
}

int GhzSpec::q(int k) const {
  check_particle(n_, k);
  return static_cast<int>((q_ >> (k - 1)) & 1u);
}

std::vector<int> GhzSpec::q_bits() const {
  std::vector<int> out(n_);
  for (int k = 1; k <= n_; ++k) out[k - 1] = q(k);
  return out;
}

std::string GhzSpec::ket() const {
  std::string a, b;
  for (int k = 1; k <= n_; ++k) {
    a.push_back(q(k) ? '1' : '0');
    b.push_back(q(k) ? '0' : '1');
  }
  return "(|" + a + "> " + (delta_ ? "- " : "+ ") + "|" + b + ">)/sqrt2";
}

bool Outcome::contains(int k) const noexcept {
  return k >= 1 && k <= 32 && ((measured >> (k - 1)) & 1u);
}

int Outcome::bit(int k) const {
  if (!contains(k)) throw RangeError("particle " + std::to_string(k) + " not in outcome");
  return static_cast<int>((bits >> (k - 1)) & 1u);
}

int Outcome::size() const noexcept { return std::popcount(measured); }

std::string Outcome::label(Basis basis) const {
  std::string out;
  for (int k = 1; k <= 32; ++k) {
    if (!contains(k)) continue;
    const int b = bit(k);
    out.push_back(basis == Basis::Z ? (b ? '1' : '0') : (b ? '-' : '+'));
  }
  return out;
}

int XTerm::minus_count() const noexcept { return std::popcount(minus); }

std::string XTerm::label(int n) const {
  std::string out;
  for (int k = 1; k <= n; ++k) out.push_back((minus >> (k - 1)) & 1u ? '-' : '+');
  return out;
}

std::uint64_t family_size(int n) {
  check_size(n);
  return std::uint64_t{1} << n;
}

GhzSpec ghz_from_index(std::uint64_t index, int n) {
  const auto count = family_size(n);
  if (index < 1 || index > count) {
    throw RangeError("GHZ index " + std::to_string(index) + " outside 1.." + std::to_string(count));
  }
  const std::uint64_t c = index - 1;
  const int delta = static_cast<int>(c & 1u);
  const std::uint64_t rest = c >> 1;
  std::uint32_t q = 0;
  for (int k = 2; k <= n; ++k) {
    if ((rest >> (n - k)) & 1u) q |= 1u << (k - 1);
  }
  return GhzSpec(n, q, delta);
}

std::uint64_t index_of(const GhzSpec& spec) {
  const int n = spec.size();
  std::uint64_t rest = 0;
  for (int k = 2; k <= n; ++k) rest |= static_cast<std::uint64_t>(spec.q(k)) << (n - k);
  return 2 * rest + static_cast<std::uint64_t>(spec.delta()) + 1;
}

std::vector<XTerm> x_expansion(const GhzSpec& spec) {
  const int n = spec.size();
  std::vector<XTerm> terms;
  terms.reserve(std::size_t{1} << (n - 1));
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    // v is the big-endian reading of the x-string: x_1 is its top bit.
    std::uint32_t minus = 0;
    for (int k = 1; k <= n; ++k) {
      if ((v >> (n - k)) & 1u) minus |= 1u << (k - 1);
    }
    if ((std::popcount(minus) & 1) != spec.delta()) continue;
    const int delta_sign = std::popcount(minus & spec.q_mask()) & 1;
    terms.push_back(XTerm{minus, delta_sign ? -1 : 1});
  }
  return terms;
}

int t_xor(const GhzSpec& spec, int i, int j) { return spec.q(i) ^ spec.q(j); }

Outcome sample_measurement(const GhzSpec& spec, ParticleSet positions, Basis basis, RandomStream& rng) {
  auto reg = QubitRegister::ghz(spec);
  return reg.measure(positions, basis, rng);
}

}  // namespace qpc
