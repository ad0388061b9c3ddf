#include "veritas/forecasters.hpp"

#include <limits>
#include <ostream>

#include "veritas/csv.hpp"
#include "veritas/detail/overloaded.hpp"
#include "veritas/error.hpp"

namespace veritas {

using detail::overloaded;

bool has_oracle_access(const ForecasterSpec& spec) noexcept {
  return std::holds_alternative<TruthOracleForecaster>(spec);
}

void validate(const ForecasterSpec& spec) {
  auto check = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " out of [0,1]");
  };
  std::visit(overloaded{
                 [&](const ConstantForecaster& f) { check(f.alpha, "constant.alpha"); },
                 [&](const EmpiricalFrequencyForecaster& f) { check(f.prior, "empirical.prior"); },
                 [](const TruthOracleForecaster&) {},
                 [&](const BrokenClockReaderForecaster& f) { check(f.alpha, "broken_clock_reader.alpha"); },
             },
             spec);
}

double observable_forecast(const ForecasterSpec& spec, std::span<const std::uint8_t> history) {
  return std::visit(
      overloaded{
          [](const ConstantForecaster& f) { return f.alpha; },
          [](const BrokenClockReaderForecaster& f) { return f.alpha; },
          [&](const EmpiricalFrequencyForecaster& f) {
            if (history.empty()) return f.prior;
            std::uint64_t ones = 0;
            for (auto v : history) ones += v;
            return static_cast<double>(ones) / static_cast<double>(history.size());
          },
          [](const TruthOracleForecaster&) -> double {
            throw DomainError("truth oracle has no observable-only forecast");
          },
      },
      spec);
}

std::vector<ForecastRecord> run_forecaster(const ForecasterSpec& spec, const Path& path) {
  if (path.empty()) throw DomainError("run_forecaster: empty path");
  validate(spec);
  std::vector<ForecastRecord> records;
  records.reserve(path.size());

  if (has_oracle_access(spec)) {
    for (const auto& s : path) records.push_back({s.t, s.truth, s.outcome, s.truth});
    return records;
  }

  // Running sums keep the empirical forecaster linear; the value matches
  // observable_forecast on the same prefix bit for bit.
  const auto* empirical = std::get_if<EmpiricalFrequencyForecaster>(&spec);
  std::vector<std::uint8_t> history;
  history.reserve(path.size());
  std::uint64_t ones = 0;
  for (const auto& s : path) {
    double forecast;
    if (empirical != nullptr) {
      forecast = history.empty() ? empirical->prior
                                 : static_cast<double>(ones) / static_cast<double>(history.size());
    } else {
      forecast = observable_forecast(spec, history);
    }
    records.push_back({s.t, forecast, s.outcome, s.truth});
    history.push_back(s.outcome);
    ones += s.outcome;
  }
  return records;
}

Path redact_truths(const Path& path) {
  Path out = path;
  for (auto& s : out) s.truth = std::numeric_limits<double>::quiet_NaN();
  return out;
}

void write_records_csv(std::ostream& os, std::span<const ForecastRecord> records) {
  os << "t,forecast,outcome,truth\n";
  for (const auto& r : records)
    os << r.t << ',' << format_double(r.forecast) << ',' << int(r.outcome) << ','
       << format_double(r.truth) << '\n';
}

}  // namespace veritas
