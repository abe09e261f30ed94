#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "qpc/party.hpp"
#include "qpc/qubit_register.hpp"

namespace qpc {

using DecoyState = Eigenstate;

// Reference to particle `particle` (1-based) of register `position` (0-based)
// in the preparer's register bank.
struct CarrierRef {
  int position = 0;
  int particle = 1;

  friend bool operator==(const CarrierRef&, const CarrierRef&) = default;
};

// One transmissible unit: a decoy photon (mutable, attackers may re-prepare
// it) or a handle to a GHZ particle.
struct PhotonSlot {
  std::variant<DecoyState, CarrierRef> content;

  static PhotonSlot decoy(DecoyState state) { return PhotonSlot{state}; }
  static PhotonSlot carrier(int position, int particle) { return PhotonSlot{CarrierRef{position, particle}}; }

  bool is_decoy() const noexcept { return std::holds_alternative<DecoyState>(content); }
  DecoyState& decoy_state() { return std::get<DecoyState>(content); }
  const DecoyState& decoy_state() const { return std::get<DecoyState>(content); }
  const CarrierRef& carrier_ref() const { return std::get<CarrierRef>(content); }

  friend bool operator==(const PhotonSlot&, const PhotonSlot&) = default;
};

std::vector<DecoyState> generate_decoys(std::size_t count, RandomStream& rng);

struct Interleaved {
  std::vector<PhotonSlot> sequence;
  std::vector<std::size_t> decoy_positions;  // 0-based, ascending
};

// Inserts decoys at a uniformly random subset of positions; carriers keep
// their relative order.
Interleaved interleave(const std::vector<PhotonSlot>& carriers, std::span<const DecoyState> decoys, RandomStream& rng);

// Receiver-side projective measurement of a decoy as it arrived.
int measure_decoy(DecoyState& decoy, Basis basis, RandomStream& rng);

struct DecoyAnnouncement {
  std::size_t position = 0;
  Basis basis = Basis::Z;
};

struct CheckReport {
  bool passed = true;
  std::size_t mismatches = 0;
  std::size_t checked = 0;
};

// Sender announces positions and bases, receiver returns the bits it measured,
// sender compares with what it prepared. Passes iff mismatches <= tolerance.
// Throws ContractError when the three lists are not aligned.
CheckReport public_discussion(std::span<const DecoyAnnouncement> announcements, std::span<const int> results,
                              std::span<const DecoyState> expected, std::size_t tolerance = 0);

// One-way quantum link with an ordered list of taps. Each tap sees every slot
// in transit, in registration order, and may measure or re-prepare it.
class QuantumChannel {
 public:
  using Tap = std::function<void(PhotonSlot&, std::vector<QubitRegister>&, RandomStream&)>;

  QuantumChannel(PartyId from, PartyId to) : from_(from), to_(to) {}

  const PartyId& from() const noexcept { return from_; }
  const PartyId& to() const noexcept { return to_; }
  std::size_t tap_count() const noexcept { return taps_.size(); }

  void add_tap(Tap tap) { taps_.push_back(std::move(tap)); }
  void transmit(std::vector<PhotonSlot>& sequence, std::vector<QubitRegister>& registers, RandomStream& rng) const;

 private:
  PartyId from_;
  PartyId to_;
  std::vector<Tap> taps_;
};

}  // namespace qpc
