#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hyperqa::hash {

// Hex-encoded SHA-256. Used for cache keys and fixture lookup, so it must be
// stable across platforms and runs.
std::string sha256_hex(std::string_view data);

// First 8 bytes of SHA-256 as an integer; handy for seeding deterministic RNGs.
std::uint64_t sha256_seed(std::string_view data);

}  // namespace hyperqa::hash
