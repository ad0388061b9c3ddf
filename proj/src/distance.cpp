#include "veritas/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "veritas/error.hpp"
#include "veritas/model.hpp"

namespace veritas {

namespace {

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

double log_bernoulli(std::uint8_t outcome, double p) {
  const double q = clamp_probability(p);
  return outcome ? std::log(q) : std::log1p(-q);
}

}  // namespace

double bernoulli_kl(double p, double q) {
  double total = 0.0;
  if (p > 0.0) total += p * std::log(p / clamp_probability(q));
  if (p < 1.0) total += (1.0 - p) * std::log((1.0 - p) / (1.0 - clamp_probability(q)));
  return std::max(total, 0.0);
}

DistanceResult evaluate_distance(const DistanceSpec& spec, std::span<const double> candidate,
                                 std::optional<std::span<const double>> truth) {
  if (!spec.truth_available)
    return NotEvaluable{
        "the true function is not effectively calculable, so the distance has an "
        "argument no machine can supply"};
  if (!truth)
    return NotEvaluable{"truth flagged available but no true values were supplied"};
  if (candidate.empty()) throw DomainError("evaluate_distance: empty candidate");
  if (candidate.size() != truth->size()) throw DomainError("evaluate_distance: length mismatch");

  double total = 0.0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const double c = candidate[i];
    const double t = (*truth)[i];
    if (!(c >= 0.0 && c <= 1.0) || !(t >= 0.0 && t <= 1.0))
      throw DomainError("evaluate_distance: probabilities must lie in [0,1]");
    total += spec.kind == DistanceKind::SquaredError ? (c - t) * (c - t) : bernoulli_kl(t, c);
  }
  return total / static_cast<double>(candidate.size());
}

double likelihood_indistinguishability(std::span<const std::uint8_t> outcomes,
                                       std::span<const double> model_a,
                                       std::span<const double> model_b) {
  if (outcomes.size() != model_a.size() || outcomes.size() != model_b.size())
    throw DomainError("likelihood_indistinguishability: length mismatch");
  double diff = 0.0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    if (model_a[t] == model_b[t]) continue;
    diff += log_bernoulli(outcomes[t], model_a[t]) - log_bernoulli(outcomes[t], model_b[t]);
  }
  return diff;
}

}  // namespace veritas
