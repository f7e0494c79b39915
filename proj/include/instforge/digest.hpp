#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace instforge {

std::string sha256_hex(std::string_view data);

/// Digest of a JSON value over its canonical serialization (sorted keys,
/// shortest round-trip numbers). Stable across runs and platforms.
std::string canonical_digest(const nlohmann::json& value);

/// First 8 bytes of the SHA-256 of `data`, big-endian.
std::uint64_t hash64(std::string_view data);

}  // namespace instforge
