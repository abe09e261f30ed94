#include "qpc/qubit_register.hpp"

#include <bit>

#include "qpc/errors.hpp"

namespace qpc {

Basis basis_of(Eigenstate state) noexcept {
  return (state == Eigenstate::Zero || state == Eigenstate::One) ? Basis::Z : Basis::X;
}

int bit_of(Eigenstate state) noexcept {
  return (state == Eigenstate::One || state == Eigenstate::Minus) ? 1 : 0;
}

Eigenstate eigenstate(Basis basis, int bit) noexcept {
  if (basis == Basis::Z) return bit ? Eigenstate::One : Eigenstate::Zero;
  return bit ? Eigenstate::Minus : Eigenstate::Plus;
}

const char* symbol(Eigenstate state) noexcept {
  switch (state) {
    case Eigenstate::Zero: return "|0>";
    case Eigenstate::One: return "|1>";
    case Eigenstate::Plus: return "|+>";
    case Eigenstate::Minus: return "|->";
  }
  return "?";
}

int measure_eigenstate(Eigenstate& state, Basis basis, RandomStream& rng) {
  if (basis_of(state) == basis) return bit_of(state);
  const int bit = rng.bit();
  state = eigenstate(basis, bit);
  return bit;
}

QubitRegister QubitRegister::ghz(const GhzSpec& spec) {
  QubitRegister reg(spec.size());
  reg.entangled_ = all_particles(spec.size());
  reg.q_ = spec.q_mask();
  reg.delta_ = spec.delta();
  return reg;
}

QubitRegister QubitRegister::product(const std::vector<Eigenstate>& states) {
  const int n = static_cast<int>(states.size());
  if (n < 1 || n > GhzSpec::kMaxParticles) throw RangeError("product register size must be in [1, 20]");
  QubitRegister reg(n);
  for (int k = 0; k < n; ++k) reg.local_[k] = states[k];
  return reg;
}

bool QubitRegister::is_consumed(int particle) const {
  check_particles(ParticleSet{1} << (particle - 1));
  return (consumed_ >> (particle - 1)) & 1u;
}

void QubitRegister::check_particles(ParticleSet which) const {
  const ParticleSet valid = (n_ >= 32) ? ~ParticleSet{0} : ((ParticleSet{1} << n_) - 1);
  if (which == 0) throw RangeError("measurement needs at least one particle");
  if (which & ~valid) throw RangeError("particle outside register of size " + std::to_string(n_));
}

Outcome QubitRegister::measure(ParticleSet which, Basis basis, RandomStream& rng) {
  check_particles(which);
  if (which & consumed_) throw StateError("particle already measured and consumed");
  Outcome out = collapse(which, basis, rng);
  consumed_ |= which;
  return out;
}

int QubitRegister::disturb(int particle, Basis basis, RandomStream& rng) {
  const ParticleSet which = ParticleSet{1} << (particle - 1);
  check_particles(which);
  if (which & consumed_) throw StateError("particle already measured and consumed");
  return collapse(which, basis, rng).bit(particle);
}

std::optional<int> QubitRegister::predict(int particle, Basis basis) const {
  const ParticleSet which = ParticleSet{1} << (particle - 1);
  check_particles(which);
  if (which & entangled_) return std::nullopt;
  const Eigenstate state = local_[particle - 1];
  if (basis_of(state) != basis) return std::nullopt;
  return bit_of(state);
}

Outcome QubitRegister::collapse(ParticleSet which, Basis basis, RandomStream& rng) {
  const ParticleSet joint = which & entangled_;
  if (joint != 0) {
    if (basis == Basis::Z) {
      // Both branches of the superposition agree on the pairwise XORs; pick one
      // and every entangled particle becomes a Z eigenstate.
      const std::uint32_t branch = rng.bit() ? ~q_ : q_;
      for (int k = 1; k <= n_; ++k) {
        if ((entangled_ >> (k - 1)) & 1u) local_[k - 1] = eigenstate(Basis::Z, (branch >> (k - 1)) & 1u);
      }
      entangled_ = 0;
    } else {
      const bool whole = (joint == entangled_);
      int parity = 0;
      int last = 0;
      for (int k = 1; k <= n_; ++k) {
        if ((joint >> (k - 1)) & 1u) last = k;
      }
      for (int k = 1; k <= n_; ++k) {
        if (!((joint >> (k - 1)) & 1u)) continue;
        int bit = (whole && k == last) ? (parity ^ delta_) : rng.bit();
        parity ^= bit;
        local_[k - 1] = eigenstate(Basis::X, bit);
      }
      entangled_ &= ~joint;
      if (!whole) delta_ ^= parity;
      if (std::popcount(entangled_) == 1) {
        // A one-particle "GHZ" state is |+> or |->.
        const int k = std::countr_zero(entangled_) + 1;
        local_[k - 1] = eigenstate(Basis::X, delta_);
        entangled_ = 0;
      }
    }
  }

  Outcome out{which, 0};
  for (int k = 1; k <= n_; ++k) {
    if (!((which >> (k - 1)) & 1u)) continue;
    out.bits |= static_cast<std::uint32_t>(measure_eigenstate(local_[k - 1], basis, rng)) << (k - 1);
  }
  return out;
}

}  // namespace qpc
