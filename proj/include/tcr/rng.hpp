#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace tcr {

// std::mt19937_64 is fully specified by the C++ standard (the 10000th output
// of a default-seeded engine is 9981545732273789042), so its stream is
// identical on every conforming library. The standard distributions and
// std::shuffle are not, hence the helpers below.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection sampling. `bound` must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

/// Fisher-Yates shuffle driven only by uniform_below.
template <typename T>
void portable_shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace tcr
