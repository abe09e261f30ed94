#include "qpc/bits.hpp"

#include <algorithm>

#include "qpc/errors.hpp"

namespace qpc {

Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) {
    throw ContractError("xor_bits: length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  }
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

bool all_zero(const Bits& bits) noexcept {
  return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 0; });
}

Bits random_bits(std::size_t length, RandomStream& rng) {
  Bits out(length);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.bit());
  return out;
}

std::string to_string(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

Bits bits_from_string(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ContractError("bit string may only contain '0' and '1', got '" + std::string(text) + "'");
    }
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

}  // namespace qpc
