#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace wdn {

using Engine = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for a tuple of coordinates, e.g. (seed, node, tag).
constexpr std::uint64_t stream_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

inline Engine make_engine(std::initializer_list<std::uint64_t> parts) {
  return Engine(stream_seed(parts));
}

}  // namespace wdn
