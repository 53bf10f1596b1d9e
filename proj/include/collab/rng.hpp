#ifndef COLLAB_RNG_HPP_
#define COLLAB_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace collab {

// splitmix64 finalizer.  Used to derive well-separated per-replicate seeds
// from a master seed without consuming the master stream.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Thin wrapper around mt19937_64 producing doubles with a fixed bit
// convention, so output does not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Exponential with the given rate; rate must be positive.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  std::uint64_t bits() { return gen_(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection keeps the draw exactly uniform.
    std::uint64_t limit = ~0ULL - ~0ULL % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace collab

#endif  // COLLAB_RNG_HPP_
