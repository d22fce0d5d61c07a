#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace otm {

std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len);
std::array<uint8_t, 32> sha256(const std::vector<uint8_t>& data);

/// SHA-256 of (label || data), expanded with a 32-bit counter suffix when
/// more than one block of output is needed.  The label provides domain
/// separation between unrelated uses of the hash.
std::vector<uint8_t> labeled_hash(std::string_view label,
                                  const std::vector<uint8_t>& data,
                                  size_t out_bytes);

}  // namespace otm
