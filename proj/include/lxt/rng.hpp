#ifndef LXT_RNG_HPP_
#define LXT_RNG_HPP_

#include <cstdint>
#include <iterator>
#include <random>
#include <utility>

namespace lxt {

/// Seeded pseudo-random source built on std::mt19937_64, whose output sequence
/// is fixed by the C++ standard. All conversions to floating point, integer
/// ranges and permutations are done here rather than through <random>
/// distributions, whose algorithms differ between standard libraries, so that
/// a given seed yields the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream. Same (seed, stream) always gives the same child.
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [0, 1) with 24 random bits.
  float uniform_float();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Fisher-Yates shuffle.
  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    auto n = static_cast<std::uint64_t>(std::distance(first, last));
    for (std::uint64_t i = n; i > 1; --i) {
      std::uint64_t j = uniform_int(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to derive well-mixed child seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace lxt

#endif  // LXT_RNG_HPP_
