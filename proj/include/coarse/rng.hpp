#pragma once

#include <cstdint>
#include <vector>

namespace coarse {

// splitmix64. Deterministic across platforms, unlike std:: distributions;
// every randomized routine in the library threads one of these through with
// an explicit seed (default 0 at the CLI).
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n); n > 0
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // uniform in [0, 1)
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() & 1u) != 0; }
};

// k distinct values from [0, n), sorted. Requires k <= n.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

}  // namespace coarse
