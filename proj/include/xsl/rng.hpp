#pragma once

#include <cstdint>
#include <random>

namespace xsl {

using Rng = std::mt19937_64;

/// Independent named streams derived from one user seed, so adding draws in
/// one stage never perturbs another.
enum class Stream : std::uint32_t { roles = 1, sample = 2, split = 3, world = 4 };

inline Rng make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

}  // namespace xsl
