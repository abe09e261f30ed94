#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "qpc/random.hpp"

namespace qpc {

enum class Basis : std::uint8_t { Z, X };

char basis_symbol(Basis basis) noexcept;

// Set of 1-based particle indices packed into a mask: particle k <-> bit k-1.
using ParticleSet = std::uint32_t;

ParticleSet particles(std::initializer_list<int> indices);
ParticleSet all_particles(int n);

// One member of the n-particle GHZ family
//
//   (|q_1 ... q_n> + (-1)^delta |~q_1 ... ~q_n>) / sqrt(2),   q_1 = 0.
//
// q is stored as a mask with q_k at bit k-1, so bit 0 is always clear.
class GhzSpec {
 public:
  static constexpr int kMinParticles = 2;
  static constexpr int kMaxParticles = 20;

  GhzSpec(int n, std::uint32_t q_mask, int delta);
  static GhzSpec from_bits(const std::vector<int>& q, int delta);

  int size() const noexcept { return n_; }
  int q(int k) const;
  int delta() const noexcept { return delta_; }
  std::uint32_t q_mask() const noexcept { return q_; }
  std::vector<int> q_bits() const;

  // e.g. "(|010> + |101>)/sqrt2"
  std::string ket() const;

  friend bool operator==(const GhzSpec&, const GhzSpec&) = default;

 private:
  int n_;
  std::uint32_t q_;
  int delta_;
};

// Results of one exclusive measurement. Z: 0 <-> |0>, 1 <-> |1>; X: 0 <-> |+>,
// 1 <-> |->. Bit k-1 of `bits` holds particle k when k is in `measured`.
struct Outcome {
  ParticleSet measured = 0;
  std::uint32_t bits = 0;

  bool contains(int k) const noexcept;
  int bit(int k) const;
  int size() const noexcept;
  // Measured particles in ascending order, e.g. "010" (Z) or "+-+" (X).
  std::string label(Basis basis) const;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// One term of the X-basis expansion; amplitude magnitude 1/sqrt(2^(n-1)) is
// implicit.
struct XTerm {
  std::uint32_t minus = 0;  // bit k-1 set <-> x_k = '-'
  int sign = 1;

  int minus_count() const noexcept;
  std::string label(int n) const;  // "+--"

  friend bool operator==(const XTerm&, const XTerm&) = default;
};

// Canonical bijection 1..2^n -> GhzSpec: c = i-1, delta = c mod 2, and
// (q_2 .. q_n) are the big-endian bits of floor(c/2).
GhzSpec ghz_from_index(std::uint64_t index, int n);
std::uint64_t index_of(const GhzSpec& spec);
std::uint64_t family_size(int n);

// All 2^(n-1) x-strings whose minus count has parity delta, each signed by
// (-1)^(XOR of q_k over minus positions). Ordered by the big-endian reading of
// the x-string (x_1 most significant).
std::vector<XTerm> x_expansion(const GhzSpec& spec);

// Fixed XOR of the Z outcomes of particles i and j: q_i ^ q_j.
int t_xor(const GhzSpec& spec, int i, int j);

// Analytic sampler for a fresh register:
//  Z: q or its complement restricted to `positions`, each with probability 1/2;
//  X on all particles: uniform over strings whose minus parity equals delta;
//  X on a proper subset: independent uniform bits.
Outcome sample_measurement(const GhzSpec& spec, ParticleSet positions, Basis basis, RandomStream& rng);

}  // namespace qpc
