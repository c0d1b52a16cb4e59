#ifndef ZIPBOOST_RANDOM_H_
#define ZIPBOOST_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace zipboost {

// 64-bit FNV-1a. Used for content fingerprints and seed derivation.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

// Derives an independent seed for a named sub-stream ("split", "ts:Area",
// "rqr", ...) so that components can be reproduced in isolation.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

// Portable random source. std::mt19937_64's output sequence is fixed by the
// standard, but the <random> distributions are not, so every draw here is
// built directly on the raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52; }

  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  double normal();

  // Poisson(mu) for mu >= 0: inversion below mu = 10, PTRS above.
  int poisson(double mu);

  // Zero-inflated Poisson: structural zero with probability p, else Poisson(mu).
  int zip(double mu, double p);

 private:
  std::mt19937_64 engine_;
};

// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

}  // namespace zipboost

#endif  // ZIPBOOST_RANDOM_H_
