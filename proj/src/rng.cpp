#include "veritas/rng.hpp"

#include <cmath>

#include "veritas/error.hpp"

namespace veritas {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kZeroReplacement = 0x853C49E6748FEA9BULL;

RngState nonzero(std::uint64_t x) noexcept { return RngState{x == 0 ? kZeroReplacement : x}; }
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngState seed_state(std::uint64_t seed) noexcept { return nonzero(splitmix64(seed)); }

RngState derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  return nonzero(splitmix64(seed + (stream + 1) * kGamma));
}

std::uint64_t Rng::next_u64() noexcept {
  std::uint64_t x = state_.value;
  x ^= x >> 12;
  x ^= x << 25;
  x ^= x >> 27;
  state_.value = x;
  return x * 0x2545F4914F6CDD1DULL;
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Reject the short tail of the 2^64 range so the modulo is unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

int Rng::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli: p must lie in [0,1]");
  return uniform() < p ? 1 : 0;
}

BernoulliDraw next_bernoulli(RngState state, double p) {
  Rng rng(state);
  const int outcome = rng.bernoulli(p);
  return {outcome, rng.state()};
}

}  // namespace veritas
