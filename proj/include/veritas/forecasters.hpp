#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "veritas/processes.hpp"

namespace veritas {

struct ForecastRecord {
  std::uint64_t t = 0;
  double forecast = 0.0;  // Pi(A_{t+1} | history up to t)
  std::uint8_t outcome = 0;
  double truth = 0.0;

  friend bool operator==(const ForecastRecord&, const ForecastRecord&) = default;
};

struct ConstantForecaster {
  double alpha = 0.5;
};

// prior at t = 0, mean of outcomes[0..t) afterwards.
struct EmpiricalFrequencyForecaster {
  double prior = 0.5;
};

// Copies the hidden truth. This is the only forecaster with oracle access.
struct TruthOracleForecaster {};

// A constant forecaster that happens to match a broken-clock process before
// its switch step.
struct BrokenClockReaderForecaster {
  double alpha = 0.5;
};

using ForecasterSpec = std::variant<ConstantForecaster, EmpiricalFrequencyForecaster,
                                    TruthOracleForecaster, BrokenClockReaderForecaster>;

bool has_oracle_access(const ForecasterSpec& spec) noexcept;

// Throws DomainError for embedded probabilities outside [0,1].
void validate(const ForecasterSpec& spec);

// Forecast for step history.size() from the observed outcome prefix alone.
// Throws DomainError for an oracle forecaster, which cannot work from outcomes.
double observable_forecast(const ForecasterSpec& spec, std::span<const std::uint8_t> history);

// One record per step. Non-oracle forecasters see only the outcome prefix.
std::vector<ForecastRecord> run_forecaster(const ForecasterSpec& spec, const Path& path);

// Copy of path with every truth replaced by NaN.
Path redact_truths(const Path& path);

// CSV with header `t,forecast,outcome,truth`.
void write_records_csv(std::ostream& os, std::span<const ForecastRecord> records);

}  // namespace veritas
