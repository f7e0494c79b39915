#include "instforge/rng.hpp"

#include <limits>
#include <string>

#include "instforge/digest.hpp"

namespace instforge {

std::uint64_t SeededRng::uniform(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return next();
  const std::uint64_t range = span + 1;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % range);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return lo + x % range;
}

double SeededRng::unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  return hash64(std::to_string(base) + "/" + std::string(label));
}

}  // namespace instforge
