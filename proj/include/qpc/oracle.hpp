#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qpc/ghz.hpp"

namespace qpc {

// Exact brute-force statevector over n <= 12 qubits, used to cross-check the
// analytic sampler. Every amplitude in this family is an integer multiple of
// 2^(-exponent/2), so the state is kept as integer coefficients plus one
// dyadic exponent:
//
//   amplitude(z) = coefficient(z) / sqrt(2)^exponent
//
// Basis index z carries particle k at bit k-1.
class StateVector {
 public:
  static constexpr int kMaxParticles = 12;

  static StateVector ghz(const GhzSpec& spec);
  static StateVector basis_state(int n, std::uint32_t bits);
  // Coefficients of the X-basis expansion, labelled by minus masks, taken from
  // x_expansion(). Applying hadamard_all() maps it back to the Z basis.
  static StateVector from_x_expansion(const GhzSpec& spec);

  int size() const noexcept { return n_; }
  int exponent() const noexcept { return exponent_; }
  std::int64_t coefficient(std::uint32_t index) const { return coeff_.at(index); }
  const std::vector<std::int64_t>& coefficients() const noexcept { return coeff_; }

  void hadamard(int particle);
  void hadamard_all(ParticleSet which);
  // Removes common factors of two: coefficients halve, exponent drops by 2.
  void reduce();

  // Exact Born weights of measuring `measured` with particles in `x_particles`
  // rotated to the X basis. Keys are outcome bit masks restricted to
  // `measured`; weights sum to 2^exponent after the rotation.
  std::pair<std::map<std::uint32_t, std::uint64_t>, std::uint64_t> born_weights(ParticleSet measured,
                                                                              ParticleSet x_particles) const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  StateVector(int n, int exponent);

  int n_;
  int exponent_;
  std::vector<std::int64_t> coeff_;
};

// Samples a fixed measurement of a fixed state from the exact Born
// distribution.
class OracleSampler {
 public:
  OracleSampler(const StateVector& state, ParticleSet measured, ParticleSet x_particles);

  Outcome sample(RandomStream& rng) const;
  const std::vector<std::pair<std::uint32_t, std::uint64_t>>& cumulative() const noexcept { return cumulative_; }
  std::uint64_t total() const noexcept { return total_; }

 private:
  ParticleSet measured_;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> cumulative_;
  std::uint64_t total_;
};

// One-shot statevector sample; distributionally identical to
// sample_measurement(). Throws CapabilityError for n > 12.
Outcome oracle_sample(const GhzSpec& spec, ParticleSet positions, Basis basis, RandomStream& rng);

}  // namespace qpc
