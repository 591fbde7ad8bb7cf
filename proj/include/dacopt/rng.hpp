#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dacopt {

// Every random draw in the toolkit flows from one root seed through
// derive_seed(root, stream, index). Work units (a descent restart, an SA
// chain, a mismatch realization) own disjoint generator streams, so results
// do not depend on thread count and any unit can be re-run in isolation.
enum class RngStream : std::uint64_t {
  kDescentInit = 1,
  kSaChain = 2,
  kRealization = 3,
  kWaveform = 4,
  kArchitecture = 5,
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, RngStream stream,
                                    std::uint64_t index) {
  return mix64(mix64(root ^ mix64(static_cast<std::uint64_t>(stream))) ^ index);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::mt19937_64 make_generator(std::uint64_t root, RngStream stream,
                                      std::uint64_t index) {
  return std::mt19937_64(derive_seed(root, stream, index));
}

}  // namespace dacopt
