#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sigmil {

using Rng = std::mt19937_64;

/// Independent generator for a named purpose ("features", "sampling", ...),
/// derived from one global seed. Streams with different labels never share state.
inline Rng make_stream(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label keeps the split stable across platforms.
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

}  // namespace sigmil
