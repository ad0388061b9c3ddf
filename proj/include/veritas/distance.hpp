#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace veritas {

enum class DistanceKind { KullbackLeibler, SquaredError };

struct DistanceSpec {
  DistanceKind kind = DistanceKind::SquaredError;
  bool truth_available = false;
};

// The distance to a truth that no machine can compute is not a number.
struct NotEvaluable {
  std::string reason;
};

using DistanceResult = std::variant<double, NotEvaluable>;

// Candidate and truth are per-point Bernoulli probabilities over a common
// evaluation set. SquaredError is the mean squared difference;
// KullbackLeibler is the mean of KL(Bernoulli(truth) || Bernoulli(candidate)).
// Without truth_available and a supplied truth the result is NotEvaluable.
// Throws DomainError on length mismatch or empty input.
DistanceResult evaluate_distance(const DistanceSpec& spec, std::span<const double> candidate,
                                 std::optional<std::span<const double>> truth);

double bernoulli_kl(double p, double q);

// sum log L_A - sum log L_B over the observed outcomes, probabilities
// clamped at kProbabilityFloor. Throws DomainError on length mismatch.
double likelihood_indistinguishability(std::span<const std::uint8_t> outcomes,
                                       std::span<const double> model_a,
                                       std::span<const double> model_b);

}  // namespace veritas
