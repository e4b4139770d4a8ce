#pragma once

#include <cstdint>

namespace codesurvey {

// SplitMix64 (Sebastiano Vigna, public domain). Used everywhere a seeded,
// platform-stable stream is needed: review sampling and test data generation.
// std::mt19937 output would also be portable, but distributions are not, so
// we keep the whole pipeline on this one fixed algorithm.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Not perfectly uniform for huge n; fine for sampling and fixtures.
    uint64_t bounded(uint64_t n) { return n == 0 ? 0 : next() % n; }

    // [0, 1) with 53 bits of mantissa.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    uint64_t state_;
};

}  // namespace codesurvey
