#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qpc/ghz.hpp"

namespace qpc {

// Single-qubit eigenstates of Z and X. Used for decoy photons and for
// particles that have left a GHZ superposition.
enum class Eigenstate : std::uint8_t { Zero, One, Plus, Minus };

Basis basis_of(Eigenstate state) noexcept;
int bit_of(Eigenstate state) noexcept;
Eigenstate eigenstate(Basis basis, int bit) noexcept;
const char* symbol(Eigenstate state) noexcept;

// Projective measurement of `state` in `basis`. Same basis: deterministic.
// Other basis: uniform bit, and `state` is re-prepared in the measured
// eigenstate.
int measure_eigenstate(Eigenstate& state, Basis basis, RandomStream& rng);

// Shared n-particle register as handed out by a preparer. Starts either as a
// GHZ state or as a product of eigenstates, and tracks the collapse caused by
// single-basis measurements of any particle subset.
//
// Internally the particles still entangled form a GHZ state over that subset
// (q restricted, phase delta); every other particle is an Eigenstate.
// Measuring part of the entangled subset in Z collapses all of it; in X it
// shrinks the subset and folds the outcome parity into delta.
class QubitRegister {
 public:
  static QubitRegister ghz(const GhzSpec& spec);
  static QubitRegister product(const std::vector<Eigenstate>& states);

  int size() const noexcept { return n_; }
  ParticleSet entangled() const noexcept { return entangled_; }
  ParticleSet consumed() const noexcept { return consumed_; }
  bool is_consumed(int particle) const;

  // Exclusive measurement by the particle holders; the particles are consumed
  // and cannot be measured again. Throws StateError on consumed particles.
  Outcome measure(ParticleSet which, Basis basis, RandomStream& rng);

  // In-flight projective measurement (intercept-resend). The particle stays
  // unconsumed, left in the measured eigenstate.
  int disturb(int particle, Basis basis, RandomStream& rng);

  // Outcome a measurement would produce with certainty, if any.
  std::optional<int> predict(int particle, Basis basis) const;

 private:
  explicit QubitRegister(int n) : n_(n) {}
  void check_particles(ParticleSet which) const;
  Outcome collapse(ParticleSet which, Basis basis, RandomStream& rng);

  int n_;
  ParticleSet entangled_ = 0;
  std::uint32_t q_ = 0;
  int delta_ = 0;
  ParticleSet consumed_ = 0;
  std::array<Eigenstate, GhzSpec::kMaxParticles> local_{};
};

}  // namespace qpc
