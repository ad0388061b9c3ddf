#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "veritas/error.hpp"
#include "veritas/pac.hpp"
#include "veritas/rng.hpp"

using namespace veritas;

TEST_CASE("exact enumeration: h = c and h = not c") {
  const Concept c = [](Instance x) { return (x * 2654435761u) % 3 == 0; };
  const Concept not_c = [&](Instance x) { return !c(x); };
  const FiniteDistribution d({1, 2, 3, 4, 5, 0, 7});
  CHECK(pac_error_estimate(c, c, d, 10, 1) == 0.0);
  CHECK(pac_error_estimate(not_c, c, d, 10, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("exact enumeration is the weighted disagreement mass") {
  const FiniteDistribution d({1, 1, 2});
  const Concept c = [](Instance) { return true; };
  const Concept h = [](Instance x) { return x != 2; };
  CHECK(pac_error_exact(h, c, d) == doctest::Approx(0.5));
}

TEST_CASE("Monte Carlo on half the mass") {
  const Concept c = [](Instance) { return false; };
  const Concept h = [](Instance x) { return x % 2 == 0; };
  // Opaque sampler: Monte Carlo path, 3*sqrt(0.25/1e4) = 0.015.
  const InstanceSampler sampler = [](double u) { return static_cast<Instance>(u * 1000.0); };
  CHECK(std::abs(pac_error_estimate(h, c, sampler, 10000, 5) - 0.5) <= 0.02);
}

TEST_CASE("sampler never picks zero-mass instances") {
  const FiniteDistribution d({0, 1, 0, 1, 0});
  Rng rng = Rng::from_seed(4);
  for (int i = 0; i < 2000; ++i) {
    const auto x = d.sample(rng.uniform());
    CHECK((x == 1 || x == 3));
  }
  CHECK(d.sample(1.0) == 3);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(FiniteDistribution({}), DomainError);
  CHECK_THROWS_AS(FiniteDistribution({0, 0}), DomainError);
  CHECK_THROWS_AS(FiniteDistribution({-1, 2}), DomainError);
  const Concept c = [](Instance) { return true; };
  CHECK_THROWS_AS(pac_error_estimate(c, c, FiniteDistribution::uniform(2), 0, 1), DomainError);
}

TEST_CASE("property: Monte Carlo within 3 sigma of enumeration") {
  Rng rng = Rng::from_seed(2024);
  const std::uint64_t n = 20000;
  int outside = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t size = 2 + rng.below(200);
    std::vector<double> w(size);
    std::vector<bool> hv(size), cv(size);
    for (std::size_t i = 0; i < size; ++i) {
      w[i] = rng.uniform();
      hv[i] = rng.bernoulli(0.5);
      cv[i] = rng.bernoulli(0.5);
    }
    const FiniteDistribution d(w);
    const Concept h = [&](Instance x) { return hv[x]; };
    const Concept c = [&](Instance x) { return cv[x]; };
    const double exact = pac_error_exact(h, c, d);
    const double mc = pac_error_monte_carlo(h, c, d, n, rng.next_u64());
    const double bound = 3.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(n));
    if (std::abs(mc - exact) > bound + 1e-12) ++outside;
  }
  CHECK(outside == 0);
}
