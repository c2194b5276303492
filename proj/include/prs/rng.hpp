#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace prs {

// splitmix64 step; used to derive independent stream seeds from one master
// seed without consuming state from the main engine.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
  splitmix64(s);
  return splitmix64(s);
}

// Deterministic random stream. std::mt19937_64 supplies the raw bits; the
// derived quantities (bounded ints, unit doubles, shuffles) are implemented
// here because the std distributions are implementation-defined and would
// break byte-identical reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t u64() { return engine_(); }

  // Unbiased integer in [0, bound), bound >= 1. Rejection sampling on the
  // top of the range keeps the distribution exact.
  uint64_t below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = u64();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (u64() & 1ULL) != 0; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream; does not disturb this stream's state.
  Rng derive(uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace prs
