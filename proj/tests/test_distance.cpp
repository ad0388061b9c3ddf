#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "veritas/distance.hpp"
#include "veritas/error.hpp"
#include "veritas/processes.hpp"

using namespace veritas;

namespace {

std::vector<double> truths_of(const Path& p) {
  std::vector<double> v;
  for (const auto& s : p) v.push_back(s.truth);
  return v;
}

}  // namespace

TEST_CASE("evaluate_distance") {
  const std::vector<double> c{0.2, 0.8, 0.5};
  const std::span<const double> cs(c);
  CHECK(std::get<double>(evaluate_distance({DistanceKind::SquaredError, true}, c, cs)) == 0.0);
  CHECK(std::get<double>(evaluate_distance({DistanceKind::KullbackLeibler, true}, c, cs)) == 0.0);

  const std::vector<double> t{0.3, 0.8, 0.5};
  CHECK(std::get<double>(evaluate_distance({DistanceKind::SquaredError, true}, c, std::span<const double>(t))) ==
        doctest::Approx(0.01 / 3.0));

  CHECK(std::holds_alternative<NotEvaluable>(evaluate_distance({DistanceKind::SquaredError, false}, c, cs)));
  CHECK(std::holds_alternative<NotEvaluable>(evaluate_distance({DistanceKind::KullbackLeibler, true}, c, std::nullopt)));
  CHECK(!std::get<NotEvaluable>(evaluate_distance({DistanceKind::SquaredError, false}, c, cs)).reason.empty());

  const std::vector<double> short_truth{0.1};
  CHECK_THROWS_AS(evaluate_distance({DistanceKind::SquaredError, true}, c, std::span<const double>(short_truth)),
                  DomainError);
}

TEST_CASE("bernoulli_kl") {
  CHECK(bernoulli_kl(0.3, 0.3) == 0.0);
  CHECK(bernoulli_kl(0.5, 0.25) == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)));
  CHECK(bernoulli_kl(0.2, 0.8) > 0.0);
}

TEST_CASE("likelihood_indistinguishability") {
  const std::vector<std::uint8_t> y{1, 0, 1, 1};
  const std::vector<double> a{0.9, 0.1, 0.6, 0.7};
  CHECK(likelihood_indistinguishability(y, a, a) == 0.0);
  CHECK_THROWS_AS(likelihood_indistinguishability(y, a, std::vector<double>{0.5}), DomainError);
  const std::vector<double> certain{0.0, 0.0, 0.0, 0.0};
  CHECK(std::isfinite(likelihood_indistinguishability(y, a, certain)));
}

TEST_CASE("regime data: truth beats the flat model, swapped schedule loses") {
  const auto path = simulate({RegimeSwitchProcess{0.2, 0.8}, 20000}, seed_state(13));
  const auto y = outcomes_of(path);
  const auto truth = truths_of(path);
  const std::vector<double> flat(truth.size(), 0.5);
  std::vector<double> swapped(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) swapped[i] = 1.0 - truth[i];
  CHECK(likelihood_indistinguishability(y, flat, truth) < 0.0);
  CHECK(likelihood_indistinguishability(y, swapped, truth) < 0.0);
}

TEST_CASE("short samples cannot tell the schedules apart reliably") {
  // With 4 observations and close regimes the sign of the ratio depends on the draw.
  int positive = 0, negative = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto path = simulate({RegimeSwitchProcess{0.45, 0.55}, 4}, seed_state(seed));
    const auto truth = truths_of(path);
    std::vector<double> swapped(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) swapped[i] = 1.0 - truth[i];
    const double llr = likelihood_indistinguishability(outcomes_of(path), swapped, truth);
    positive += llr > 0.0 ? 1 : 0;
    negative += llr < 0.0 ? 1 : 0;
  }
  CHECK(positive > 0);
  CHECK(negative > 0);
}
