#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

namespace veritas {

using Instance = std::uint64_t;
using Concept = std::function<bool(Instance)>;

// Instance space {0, ..., weights.size()-1} with probabilities proportional to
// weights. Sampling uses the cumulative table and one uniform per draw.
class FiniteDistribution {
 public:
  // Throws DomainError for empty, negative, non-finite or all-zero weights.
  explicit FiniteDistribution(std::vector<double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  double probability(Instance x) const { return prob_.at(x); }
  const std::vector<double>& probabilities() const noexcept { return prob_; }
  Instance sample(double u) const;

  static FiniteDistribution uniform(std::size_t n);

 private:
  std::vector<double> prob_;
  std::vector<double> cumulative_;
};

// Opaque sampler for instance spaces that are not enumerated.
using InstanceSampler = std::function<Instance(double uniform01)>;

using InstanceDistribution = std::variant<FiniteDistribution, InstanceSampler>;

inline constexpr std::size_t kMaxEnumeration = std::size_t{1} << 20;

// error(h) = Pr_{x ~ D}[h(x) != c(x)], exact weighted disagreement mass.
// Throws DomainError when the space exceeds kMaxEnumeration.
double pac_error_exact(const Concept& h, const Concept& c, const FiniteDistribution& d);

// Mean disagreement over n draws, one stratified uniform per draw.
double pac_error_monte_carlo(const Concept& h, const Concept& c, const InstanceDistribution& d,
                             std::uint64_t n, std::uint64_t seed);

// Enumerates when D is a declared finite space of at most 2^20 points;
// Monte Carlo otherwise. Throws DomainError when n == 0.
double pac_error_estimate(const Concept& h, const Concept& c, const InstanceDistribution& d,
                          std::uint64_t n, std::uint64_t seed);

}  // namespace veritas
