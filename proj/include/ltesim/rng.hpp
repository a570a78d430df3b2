#pragma once
// Deterministic seeded random streams. Every consumer gets its own stream
// derived from (master seed, purpose string, index) so adding a device or a
// run never perturbs the draws of another.
#include <cstdint>
#include <string_view>

namespace ltesim {

// splitmix64, the canonical 64-bit state mixer.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t hash_str(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Stream derivation: stable under addition of unrelated streams.
  static Rng derive(uint64_t master, std::string_view purpose, uint64_t index) {
    uint64_t s = mix64(master ^ mix64(hash_str(purpose)) ^ mix64(index * 0x9e3779b97f4a7c15ull + 1));
    return Rng(s);
  }

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) via 128-bit multiply (no modulo bias worth caring about
  // at these ranges, and fully platform-deterministic).
  uint32_t uniform_below(uint32_t n) {
    return static_cast<uint32_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  uint64_t state_;
};

}  // namespace ltesim
