#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "veritas/forecasters.hpp"

namespace veritas {

// Selection on the forecast alone: |forecast - alpha| <= tolerance.
struct MatchForecast {};
// Additionally requires truth == alpha exactly (the correct-probability test set).
struct MatchForecastAndTruth {};
// Externally supplied mask, one entry per record.
struct OracleMask {
  std::vector<std::uint8_t> mask;
};

using SelectionMode = std::variant<MatchForecast, MatchForecastAndTruth, OracleMask>;

struct SelectionCriterion {
  double target_alpha = 0.5;
  double tolerance = 0.0;
  SelectionMode mode = MatchForecast{};
};

struct TestSet {
  std::vector<ForecastRecord> selected;
  std::vector<std::size_t> source_index;  // position of each selected record in the input
  // hits[k] = number of outcomes equal to 1 among selected[0..k]; exact.
  std::vector<std::uint64_t> hits;
  std::vector<double> p_k_trace;  // p_k = hits[k-1] / k, k = 1..K

  std::size_t size() const noexcept { return selected.size(); }
  double p_final() const { return p_k_trace.back(); }
};

// Throws DomainError on empty records, bad criterion or mask length mismatch;
// EmptyTestSet when nothing is selected.
TestSet build_test_set(std::span<const ForecastRecord> records, const SelectionCriterion& crit);

enum class CalibrationVerdict { Converged, Diverged, Inconclusive };
std::string_view to_string(CalibrationVerdict v) noexcept;

// Converged when every p_k in the trailing window_fraction of the trace lies
// within epsilon of alpha; Diverged when the final p_K is more than
// 2*epsilon away; otherwise Inconclusive.
CalibrationVerdict calibration_verdict(const TestSet& ts, double target_alpha, double epsilon,
                                       double window_fraction);

enum class Learnability { Learned, NotLearned, Inconclusive };
std::string_view to_string(Learnability v) noexcept;

struct LearnabilityVerdict {
  Learnability verdict = Learnability::Inconclusive;
  std::uint64_t burn_in = 0;
  double tail_error_rate = 0.0;
  // p_K of the MatchForecast(target_alpha) test set; empty when nothing matched.
  std::optional<double> p_k_final;
  std::vector<double> window_error_rates;  // trailing halves, largest first
  std::string notes;
};

// Finite-horizon proxy for "correct all but finitely often". A step is an
// error when |forecast - truth| > epsilon. Over the steps after burn_in:
//   Learned     error rate <= delta
//   NotLearned  error rate > delta and also > delta on every trailing window
//               of size ceil(L/2), ceil(L/4), ceil(L/8), ceil(L/16)
//   otherwise   Inconclusive
// Throws DomainError unless burn_in < records.size() and 0 < delta < 1.
LearnabilityVerdict success_criterion_check(std::span<const ForecastRecord> records,
                                            double target_alpha, double epsilon,
                                            std::uint64_t burn_in, double delta);

// CSV with header `k,p_k`.
void write_p_k_csv(std::ostream& os, const TestSet& ts);

}  // namespace veritas
