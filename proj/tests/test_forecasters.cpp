#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "veritas/error.hpp"
#include "veritas/forecasters.hpp"
#include "veritas/prob.hpp"

using namespace veritas;

namespace {
Path path_with_outcomes(std::vector<std::uint8_t> outcomes, double truth = 0.5) {
  Path p;
  for (std::size_t t = 0; t < outcomes.size(); ++t) p.push_back({t, truth, outcomes[t], Regime::Iid});
  return p;
}

std::vector<double> forecasts(const std::vector<ForecastRecord>& r) {
  std::vector<double> out;
  for (const auto& x : r) out.push_back(x.forecast);
  return out;
}
}  // namespace

TEST_CASE("constant forecaster") {
  const auto r = run_forecaster(ConstantForecaster{0.7}, simulate({IidProcess{0.3}, 50}, seed_state(1)));
  for (const auto& rec : r) CHECK(rec.forecast == 0.7);
}

TEST_CASE("empirical frequency: running means") {
  const auto r = run_forecaster(EmpiricalFrequencyForecaster{0.5}, path_with_outcomes({1, 1, 0, 1}));
  CHECK(forecasts(r) == std::vector<double>{0.5, 1.0, 1.0, 2.0 / 3.0});
}

TEST_CASE("truth oracle copies the schedule") {
  const auto r = run_forecaster(TruthOracleForecaster{}, simulate({RegimeSwitchProcess{0.2, 0.8}, 5}, seed_state(1)));
  CHECK(forecasts(r) == std::vector<double>{0.2, 0.8, 0.2, 0.8, 0.2});
  CHECK(has_oracle_access(TruthOracleForecaster{}));
  CHECK_FALSE(has_oracle_access(EmpiricalFrequencyForecaster{}));
}

TEST_CASE("records carry outcomes and truths") {
  const auto path = simulate({BrokenClockProcess{0.5, 3, 0.9}, 6}, seed_state(4));
  const auto r = run_forecaster(BrokenClockReaderForecaster{0.5}, path);
  REQUIRE(r.size() == path.size());
  for (std::size_t t = 0; t < r.size(); ++t) {
    CHECK(r[t].t == t);
    CHECK(r[t].outcome == path[t].outcome);
    CHECK(r[t].truth == path[t].truth);
    CHECK(r[t].forecast == 0.5);
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(run_forecaster(ConstantForecaster{0.5}, Path{}), DomainError);
  CHECK_THROWS_AS(run_forecaster(ConstantForecaster{1.5}, path_with_outcomes({1})), DomainError);
  CHECK_THROWS_AS(observable_forecast(TruthOracleForecaster{}, {}), DomainError);
}

TEST_CASE("property: empirical forecast is exactly the prefix mean") {
  const auto path = simulate({IidProcess{0.37}, 3000}, seed_state(12));
  const auto r = run_forecaster(EmpiricalFrequencyForecaster{0.5}, path);
  const auto outcomes = outcomes_of(path);
  for (std::size_t t = 1; t < r.size(); t += 97) {
    const auto prefix = std::span(outcomes).first(t);
    CHECK(r[t].forecast == empirical_counts(prefix).value());
    CHECK(r[t].forecast == observable_forecast(EmpiricalFrequencyForecaster{0.5}, prefix));
  }
}

TEST_CASE("property: information barrier, truths never reach non-oracle forecasters") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto path = simulate({RegimeSwitchProcess{0.1, 0.9}, 400}, seed_state(seed));
    const auto hidden = redact_truths(path);
    for (const ForecasterSpec& spec : {ForecasterSpec{ConstantForecaster{0.4}},
                                       ForecasterSpec{EmpiricalFrequencyForecaster{0.3}},
                                       ForecasterSpec{BrokenClockReaderForecaster{0.1}}})
      CHECK(forecasts(run_forecaster(spec, path)) == forecasts(run_forecaster(spec, hidden)));
  }
}

TEST_CASE("empirical frequency on regime switching settles between the regimes") {
  const auto r = run_forecaster(EmpiricalFrequencyForecaster{0.5},
                                simulate({RegimeSwitchProcess{0.2, 0.8}, 200000}, seed_state(7)));
  const double gap = std::abs(0.8 - 0.2) / 2.0 - 0.01;
  for (std::size_t t = 100000; t < r.size(); t += 1000) {
    CHECK(std::abs(r[t].forecast - 0.2) >= gap);
    CHECK(std::abs(r[t].forecast - 0.8) >= gap);
  }
}
