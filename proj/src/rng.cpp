#include "lxt/rng.hpp"

#include <stdexcept>

namespace lxt {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(mix_seed(seed_ ^ mix_seed(stream + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

float Rng::uniform_float() {
  return static_cast<float>(engine_() >> 40) * 0x1.0p-24f;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: empty range");
  // Reject the low residue so every value in [0, n) is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

}  // namespace lxt
