#pragma once

// splitmix64: deterministic across platforms, unlike std:: distributions.

#include <cstdint>

namespace spinflow {

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform_pm1() {  // [-1, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0;
  }
  double uniform01() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

}  // namespace spinflow
