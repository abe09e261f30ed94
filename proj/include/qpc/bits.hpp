#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/random.hpp"

namespace qpc {

// Classical bit string; one element per bit, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

Bits xor_bits(const Bits& a, const Bits& b);
bool all_zero(const Bits& bits) noexcept;
Bits random_bits(std::size_t length, RandomStream& rng);

std::string to_string(const Bits& bits);
// Parses a string of '0'/'1' characters; throws ContractError otherwise.
Bits bits_from_string(std::string_view text);

}  // namespace qpc
