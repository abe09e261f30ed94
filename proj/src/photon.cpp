#include "qpc/photon.hpp"

#include <algorithm>
#include <numeric>

#include "qpc/errors.hpp"

namespace qpc {

std::vector<DecoyState> generate_decoys(std::size_t count, RandomStream& rng) {
  std::vector<DecoyState> out(count);
  for (auto& d : out) d = static_cast<DecoyState>(rng.below(4));
  return out;
}

Interleaved interleave(const std::vector<PhotonSlot>& carriers, std::span<const DecoyState> decoys,
                       RandomStream& rng) {
  const std::size_t total = carriers.size() + decoys.size();
  std::vector<std::size_t> all(total);
  std::iota(all.begin(), all.end(), std::size_t{0});

  Interleaved out;
  out.decoy_positions.reserve(decoys.size());
  std::sample(all.begin(), all.end(), std::back_inserter(out.decoy_positions), decoys.size(), rng.engine());

  out.sequence.reserve(total);
  std::size_t next_carrier = 0;
  std::size_t next_decoy = 0;
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (next_decoy < out.decoy_positions.size() && out.decoy_positions[next_decoy] == pos) {
      out.sequence.push_back(PhotonSlot::decoy(decoys[next_decoy++]));
    } else {
      out.sequence.push_back(carriers[next_carrier++]);
    }
  }
  return out;
}

int measure_decoy(DecoyState& decoy, Basis basis, RandomStream& rng) { return measure_eigenstate(decoy, basis, rng); }

CheckReport public_discussion(std::span<const DecoyAnnouncement> announcements, std::span<const int> results,
                              std::span<const DecoyState> expected, std::size_t tolerance) {
  if (announcements.size() != results.size() || announcements.size() != expected.size()) {
    throw ContractError("public_discussion: announcements, results and expected states must align");
  }
  CheckReport report;
  report.checked = announcements.size();
  for (std::size_t i = 0; i < announcements.size(); ++i) {
    if (announcements[i].basis != basis_of(expected[i])) {
      throw ContractError("public_discussion: announced basis differs from the prepared basis");
    }
    if (results[i] != bit_of(expected[i])) ++report.mismatches;
  }
  report.passed = report.mismatches <= tolerance;
  return report;
}

void QuantumChannel::transmit(std::vector<PhotonSlot>& sequence, std::vector<QubitRegister>& registers,
                              RandomStream& rng) const {
  if (taps_.empty()) return;
  for (auto& slot : sequence) {
    for (const auto& tap : taps_) tap(slot, registers, rng);
  }
}

}  // namespace qpc
