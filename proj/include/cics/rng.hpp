#ifndef CICS_RNG_HPP
#define CICS_RNG_HPP

#include <cstdint>
#include <random>

namespace cics {

// Caller-owned RNG state. uniform01 maps the raw 64-bit draw explicitly so
// that streams are reproducible independent of the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // derive an independent stream, e.g. one per Monte Carlo trial
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cics

#endif
