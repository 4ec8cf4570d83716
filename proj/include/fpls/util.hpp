#pragma once

#include <cstdint>
#include <functional>

namespace fpls {

/// Deterministic RNG with an explicit 53-bit uniform, so streams do not
/// depend on the standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Worker count: min(hardware, FPLS_THREADS) with FPLS_THREADS >= 1.
unsigned worker_count();

/// Runs fn(0..n-1) on up to worker_count() threads. Results must be
/// written to disjoint slots so the outcome is schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fpls
