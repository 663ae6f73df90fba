#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace uamcts {

// Seeded random stream. Every draw is built from raw 64-bit engine output so
// sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller (no cached second value).
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Independent per-run stream seed derived from a master seed and a run index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace uamcts
