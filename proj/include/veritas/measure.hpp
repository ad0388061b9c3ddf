#pragma once

#include <functional>
#include <span>
#include <vector>

namespace veritas {

// Finite-support probability measure. Support strictly increasing; masses
// normalized to sum to one at construction.
class DiscreteMeasure {
 public:
  // Throws DomainError on size mismatch, empty or unsorted support, negative
  // or non-finite masses, or zero total mass.
  DiscreteMeasure(std::vector<double> support, std::vector<double> mass);

  static DiscreteMeasure uniform(std::vector<double> support);

  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t size() const noexcept { return support_.size(); }

 private:
  std::vector<double> support_;
  std::vector<double> mass_;
};

// Radon-Nikodym derivative dnu/dmu on a shared finite support.
struct Density {
  std::vector<double> ratio;
};

// h(x) = nu(x)/mu(x) where mu(x) > 0, 0 where both vanish.
// Throws DomainError when supports differ, AbsoluteContinuityViolation when
// mu(x) = 0 < nu(x).
Density radon_nikodym(const DiscreteMeasure& nu, const DiscreteMeasure& mu);

// Gain of taking `decision` when `outcome` is realized.
using GainFunction = std::function<double(double decision, double outcome)>;

// Lifts a gain that depends on the decision only.
GainFunction pointwise(std::function<double(double)> f);

// E_nu[f(decision, .)]
double expected_gain(const GainFunction& f, double decision, const DiscreteMeasure& nu);
// E_mu[f(decision, .) * h]
double expected_gain(const GainFunction& f, double decision, const DiscreteMeasure& mu,
                     const Density& h);

struct Maximizer {
  std::size_t index = 0;  // position in the feasible list
  double point = 0.0;
  double value = 0.0;
};

// Exhaustive search over the feasible decisions; ties go to the smallest index.
// Throws DomainError for an empty feasible set.
Maximizer argmax_expected_gain(const GainFunction& f, const DiscreteMeasure& nu,
                               std::span<const double> feasible);
Maximizer argmax_expected_gain(const GainFunction& f, const DiscreteMeasure& mu, const Density& h,
                               std::span<const double> feasible);

struct EquivalenceReport {
  double objective_gap = 0.0;  // max over feasible of |E_nu f - E_mu f h|
  bool same_argmax = false;
  Maximizer argmax_nu;
  Maximizer argmax_mu;
  double kl_nu_mu = 0.0;
};

EquivalenceReport observational_equivalence_report(const GainFunction& f, const DiscreteMeasure& mu,
                                                   const DiscreteMeasure& nu,
                                                   std::span<const double> feasible);

// sum p log(p/q) in nats, 0 log 0 = 0. Throws DomainError for differing
// supports, AbsoluteContinuityViolation when q(x) = 0 < p(x).
double kl_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q);

}  // namespace veritas
