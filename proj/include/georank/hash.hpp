#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace georank {

/// FNV-1a 64-bit over bytes. Used for feature hashing, cache keys, and store
/// integrity checksums (non-cryptographic).
constexpr uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 1469598103934665603ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

/// Lowercase hex rendering of a 64-bit value, fixed 16 chars.
std::string to_hex(uint64_t v);

}  // namespace georank
