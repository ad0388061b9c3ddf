#include "veritas/pac.hpp"

#include <algorithm>
#include <cmath>

#include "veritas/error.hpp"
#include "veritas/rng.hpp"

namespace veritas {

FiniteDistribution::FiniteDistribution(std::vector<double> weights) {
  if (weights.empty()) throw DomainError("finite distribution needs at least one instance");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("instance weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("instance weights sum to zero");
  prob_.reserve(weights.size());
  cumulative_.reserve(weights.size());
  double acc = 0.0;
  for (double w : weights) {
    prob_.push_back(w / total);
    acc += w / total;
    cumulative_.push_back(acc);
  }
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
  return FiniteDistribution(std::vector<double>(n, 1.0));
}

Instance FiniteDistribution::sample(double u) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    // u beyond the rounded total: take the last instance with positive mass.
    std::size_t i = prob_.size() - 1;
    while (prob_[i] == 0.0) --i;
    return i;
  }
  return static_cast<Instance>(it - cumulative_.begin());
}

double pac_error_exact(const Concept& h, const Concept& c, const FiniteDistribution& d) {
  if (d.size() > kMaxEnumeration) throw DomainError("instance space too large to enumerate");
  double mass = 0.0;
  for (Instance x = 0; x < d.size(); ++x)
    if (h(x) != c(x)) mass += d.probability(x);
  return std::clamp(mass, 0.0, 1.0);
}

double pac_error_monte_carlo(const Concept& h, const Concept& c, const InstanceDistribution& d,
                             std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("pac_error_monte_carlo: n must be >= 1");
  Rng rng = Rng::from_seed(seed);
  std::uint64_t disagreements = 0;
  // One uniform per stratum [i/n, (i+1)/n): unbiased, variance never above iid draws.
  const double below_one = std::nextafter(1.0, 0.0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = std::min((static_cast<double>(i) + rng.uniform()) / static_cast<double>(n), below_one);
    const Instance x = std::holds_alternative<FiniteDistribution>(d)
                           ? std::get<FiniteDistribution>(d).sample(u)
                           : std::get<InstanceSampler>(d)(u);
    if (h(x) != c(x)) ++disagreements;
  }
  return static_cast<double>(disagreements) / static_cast<double>(n);
}

double pac_error_estimate(const Concept& h, const Concept& c, const InstanceDistribution& d,
                          std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("pac_error_estimate: n must be >= 1");
  if (const auto* finite = std::get_if<FiniteDistribution>(&d);
      finite && finite->size() <= kMaxEnumeration)
    return pac_error_exact(h, c, *finite);
  return pac_error_monte_carlo(h, c, d, n, seed);
}

}  // namespace veritas
