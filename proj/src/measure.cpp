#include "veritas/measure.hpp"

#include <algorithm>
#include <cmath>

#include "veritas/error.hpp"

namespace veritas {

DiscreteMeasure::DiscreteMeasure(std::vector<double> support, std::vector<double> mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  if (support_.empty()) throw DomainError("measure support is empty");
  if (support_.size() != mass_.size()) throw DomainError("support and mass sizes differ");
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (!std::isfinite(support_[i])) throw DomainError("support point not finite");
    if (i > 0 && !(support_[i - 1] < support_[i]))
      throw DomainError("support must be strictly increasing");
  }
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("masses must be finite and >= 0");
    total += m;
  }
  if (!(total > 0.0)) throw DomainError("measure has zero total mass");
  if (total != 1.0)
    for (double& m : mass_) m /= total;
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<double> support) {
  std::vector<double> mass(support.size(), 1.0);
  return DiscreteMeasure(std::move(support), std::move(mass));
}

namespace {

void require_same_support(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (!std::equal(a.support().begin(), a.support().end(), b.support().begin(), b.support().end()))
    throw DomainError("measures must share the same support");
}

template <class Objective>
Maximizer search(std::span<const double> feasible, Objective objective) {
  if (feasible.empty()) throw DomainError("feasible set is empty");
  Maximizer best{0, feasible[0], objective(feasible[0])};
  for (std::size_t i = 1; i < feasible.size(); ++i) {
    const double v = objective(feasible[i]);
    if (v > best.value) best = {i, feasible[i], v};
  }
  return best;
}

}  // namespace

Density radon_nikodym(const DiscreteMeasure& nu, const DiscreteMeasure& mu) {
  require_same_support(nu, mu);
  Density h;
  h.ratio.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double m = mu.mass()[i];
    const double n = nu.mass()[i];
    if (m > 0.0)
      h.ratio.push_back(n / m);
    else if (n == 0.0)
      h.ratio.push_back(0.0);
    else
      throw AbsoluteContinuityViolation(i);
  }
  return h;
}

GainFunction pointwise(std::function<double(double)> f) {
  return [f = std::move(f)](double decision, double) { return f(decision); };
}

double expected_gain(const GainFunction& f, double decision, const DiscreteMeasure& nu) {
  double total = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) total += f(decision, nu.support()[i]) * nu.mass()[i];
  return total;
}

double expected_gain(const GainFunction& f, double decision, const DiscreteMeasure& mu,
                     const Density& h) {
  if (h.ratio.size() != mu.size()) throw DomainError("density length differs from support");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    total += f(decision, mu.support()[i]) * h.ratio[i] * mu.mass()[i];
  return total;
}

Maximizer argmax_expected_gain(const GainFunction& f, const DiscreteMeasure& nu,
                               std::span<const double> feasible) {
  return search(feasible, [&](double x) { return expected_gain(f, x, nu); });
}

Maximizer argmax_expected_gain(const GainFunction& f, const DiscreteMeasure& mu, const Density& h,
                               std::span<const double> feasible) {
  return search(feasible, [&](double x) { return expected_gain(f, x, mu, h); });
}

EquivalenceReport observational_equivalence_report(const GainFunction& f, const DiscreteMeasure& mu,
                                                   const DiscreteMeasure& nu,
                                                   std::span<const double> feasible) {
  const Density h = radon_nikodym(nu, mu);
  EquivalenceReport r;
  for (double x : feasible)
    r.objective_gap = std::max(r.objective_gap,
                               std::abs(expected_gain(f, x, nu) - expected_gain(f, x, mu, h)));
  r.argmax_nu = argmax_expected_gain(f, nu, feasible);
  r.argmax_mu = argmax_expected_gain(f, mu, h, feasible);
  r.same_argmax = r.argmax_nu.index == r.argmax_mu.index;
  r.kl_nu_mu = kl_divergence(nu, mu);
  return r;
}

double kl_divergence(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require_same_support(p, q);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.mass()[i];
    const double qi = q.mass()[i];
    if (pi == 0.0) continue;
    if (qi == 0.0) throw AbsoluteContinuityViolation(i);
    total += pi * std::log(pi / qi);
  }
  return std::max(total, 0.0);
}

}  // namespace veritas
