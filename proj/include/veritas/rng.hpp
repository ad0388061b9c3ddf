#pragma once

#include <cstdint>

namespace veritas {

// Deterministic 64-bit PRNG: xorshift64* (Vigna 2016, shifts 12/25/27,
// multiplier 0x2545F4914F6CDD1D) seeded through the splitmix64 finalizer.
// The generator is a value: copying an Rng forks the stream.
struct RngState {
  std::uint64_t value = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed expansion. Never yields the all-zero xorshift state.
RngState seed_state(std::uint64_t seed) noexcept;

// Replication stream i of a seed. Distinct i give distinct states because
// seed + (i+1)*gamma is injective in i and splitmix64 is a bijection.
RngState derive(std::uint64_t seed, std::uint64_t stream) noexcept;

struct BernoulliDraw {
  int outcome = 0;
  RngState state;
};

// outcome = 1 iff the next uniform in [0,1) is < p. Throws DomainError for
// p outside [0,1] (NaN included).
BernoulliDraw next_bernoulli(RngState state, double p);

class Rng {
 public:
  explicit Rng(RngState state) noexcept : state_(state) {}
  static Rng from_seed(std::uint64_t seed) noexcept { return Rng(seed_state(seed)); }

  std::uint64_t next_u64() noexcept;
  // 53-bit uniform in [0,1).
  double uniform() noexcept;
  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  int bernoulli(double p);

  RngState state() const noexcept { return state_; }

 private:
  RngState state_;
};

}  // namespace veritas
