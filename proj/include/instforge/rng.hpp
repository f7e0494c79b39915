#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace instforge {

/// Seeded generator whose draws are identical on every platform: only the
/// raw mt19937_64 stream is used (std distributions are implementation
/// defined).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  /// Uniform real in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// Child seed for (base, label); used for per-stage and per-record streams so
/// that reruns of one record never shift another record's draws.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

}  // namespace instforge
