#include "qpc/oracle.hpp"

#include <algorithm>
#include <bit>

#include "qpc/errors.hpp"

namespace qpc {

namespace {

void check_capacity(int n) {
  if (n > StateVector::kMaxParticles) {
    throw CapabilityError("statevector oracle supports at most 12 particles, got " + std::to_string(n));
  }
  if (n < 1) throw RangeError("statevector needs at least one particle");
}

}  // namespace

StateVector::StateVector(int n, int exponent) : n_(n), exponent_(exponent) {
  check_capacity(n);
  coeff_.assign(std::size_t{1} << n, 0);
}

StateVector StateVector::ghz(const GhzSpec& spec) {
  StateVector sv(spec.size(), 1);
  const std::uint32_t full = (1u << spec.size()) - 1;
  sv.coeff_[spec.q_mask()] = 1;
  sv.coeff_[~spec.q_mask() & full] = spec.delta() ? -1 : 1;
  return sv;
}

StateVector StateVector::basis_state(int n, std::uint32_t bits) {
  StateVector sv(n, 0);
  sv.coeff_.at(bits) = 1;
  return sv;
}

StateVector StateVector::from_x_expansion(const GhzSpec& spec) {
  StateVector sv(spec.size(), spec.size() - 1);
  for (const auto& term : x_expansion(spec)) sv.coeff_[term.minus] = term.sign;
  return sv;
}

void StateVector::hadamard(int particle) {
  if (particle < 1 || particle > n_) throw RangeError("hadamard: particle out of range");
  const std::uint32_t bit = 1u << (particle - 1);
  for (std::uint32_t z = 0; z < coeff_.size(); ++z) {
    if (z & bit) continue;
    const auto a = coeff_[z];
    const auto b = coeff_[z | bit];
    coeff_[z] = a + b;
    coeff_[z | bit] = a - b;
  }
  ++exponent_;
}

void StateVector::hadamard_all(ParticleSet which) {
  for (int k = 1; k <= n_; ++k) {
    if ((which >> (k - 1)) & 1u) hadamard(k);
  }
}

void StateVector::reduce() {
  while (exponent_ >= 2 && std::all_of(coeff_.begin(), coeff_.end(), [](std::int64_t c) { return c % 2 == 0; })) {
    for (auto& c : coeff_) c /= 2;
    exponent_ -= 2;
  }
}

std::pair<std::map<std::uint32_t, std::uint64_t>, std::uint64_t> StateVector::born_weights(
    ParticleSet measured, ParticleSet x_particles) const {
  StateVector rotated = *this;
  rotated.hadamard_all(x_particles & measured);
  std::map<std::uint32_t, std::uint64_t> weights;
  std::uint64_t total = 0;
  for (std::uint32_t z = 0; z < rotated.coeff_.size(); ++z) {
    const auto c = rotated.coeff_[z];
    if (c == 0) continue;
    const auto w = static_cast<std::uint64_t>(c * c);
    weights[z & measured] += w;
    total += w;
  }
  return {std::move(weights), total};
}

OracleSampler::OracleSampler(const StateVector& state, ParticleSet measured, ParticleSet x_particles)
    : measured_(measured), total_(0) {
  auto [weights, total] = state.born_weights(measured, x_particles);
  for (const auto& [bits, w] : weights) {
    total_ += w;
    cumulative_.emplace_back(bits, total_);
  }
  const int exponent = state.exponent() + std::popcount(x_particles & measured);
  if (total_ != total || total_ != (std::uint64_t{1} << exponent)) {
    throw StateError("statevector is not normalized");
  }
}

Outcome OracleSampler::sample(RandomStream& rng) const {
  const std::uint64_t u = rng.below(total_);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u,
                             [](std::uint64_t value, const auto& entry) { return value < entry.second; });
  return Outcome{measured_, it->first};
}

Outcome oracle_sample(const GhzSpec& spec, ParticleSet positions, Basis basis, RandomStream& rng) {
  check_capacity(spec.size());
  if (positions == 0 || (positions & ~all_particles(spec.size()))) {
    throw RangeError("positions must be a nonempty subset of the register");
  }
  const OracleSampler sampler(StateVector::ghz(spec), positions, basis == Basis::X ? positions : 0);
  return sampler.sample(rng);
}

}  // namespace qpc
