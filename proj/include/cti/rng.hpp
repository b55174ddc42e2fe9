#pragma once

#include <cstdint>
#include <random>

namespace cti {

// splitmix64 finalizer: bijective on 64-bit words, decorrelates nearby inputs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic substream derivation: the generator for stream `id` under a
// master seed depends only on (seed, id), never on how many draws other
// streams have consumed. This is what makes traces independent of thread
// scheduling.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t id) {
  return splitmix64(splitmix64(master) ^ splitmix64(id + 0x632be59bd9b4e019ull));
}

inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t id) {
  return std::mt19937_64(substream_seed(master, id));
}

}  // namespace cti
