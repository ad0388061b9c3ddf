#include "veritas/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "veritas/csv.hpp"
#include "veritas/detail/overloaded.hpp"
#include "veritas/error.hpp"

namespace veritas {

using detail::overloaded;

std::string_view to_string(CalibrationVerdict v) noexcept {
  switch (v) {
    case CalibrationVerdict::Converged: return "Converged";
    case CalibrationVerdict::Diverged: return "Diverged";
    case CalibrationVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(Learnability v) noexcept {
  switch (v) {
    case Learnability::Learned: return "Learned";
    case Learnability::NotLearned: return "NotLearned";
    case Learnability::Inconclusive: return "Inconclusive";
  }
  return "?";
}

TestSet build_test_set(std::span<const ForecastRecord> records, const SelectionCriterion& crit) {
  if (records.empty()) throw DomainError("build_test_set: no records");
  if (!(crit.tolerance >= 0.0)) throw DomainError("selection tolerance must be >= 0");
  if (!(crit.target_alpha >= 0.0 && crit.target_alpha <= 1.0))
    throw DomainError("selection target_alpha out of [0,1]");
  if (const auto* m = std::get_if<OracleMask>(&crit.mode); m && m->mask.size() != records.size())
    throw DomainError("oracle mask length differs from record count");

  auto forecast_matches = [&](const ForecastRecord& r) {
    return std::abs(r.forecast - crit.target_alpha) <= crit.tolerance;
  };

  TestSet ts;
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const bool take = std::visit(
        overloaded{
            [&](const MatchForecast&) { return forecast_matches(r); },
            [&](const MatchForecastAndTruth&) {
              return forecast_matches(r) && r.truth == crit.target_alpha;
            },
            [&](const OracleMask& m) { return m.mask[i] != 0; },
        },
        crit.mode);
    if (!take) continue;
    hits += r.outcome;
    ts.selected.push_back(r);
    ts.source_index.push_back(i);
    ts.hits.push_back(hits);
    ts.p_k_trace.push_back(static_cast<double>(hits) / static_cast<double>(ts.selected.size()));
  }
  if (ts.selected.empty()) throw EmptyTestSet();
  return ts;
}

CalibrationVerdict calibration_verdict(const TestSet& ts, double target_alpha, double epsilon,
                                       double window_fraction) {
  if (ts.p_k_trace.empty()) throw EmptyTestSet();
  if (!(epsilon > 0.0)) throw DomainError("calibration_verdict: epsilon must be > 0");
  if (!(window_fraction > 0.0 && window_fraction < 1.0))
    throw DomainError("calibration_verdict: window_fraction must lie in (0,1)");

  const std::size_t n = ts.p_k_trace.size();
  auto window = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n)));
  window = std::clamp<std::size_t>(window, 1, n);

  bool inside = true;
  for (std::size_t k = n - window; k < n && inside; ++k)
    inside = std::abs(ts.p_k_trace[k] - target_alpha) <= epsilon;
  if (inside) return CalibrationVerdict::Converged;
  if (std::abs(ts.p_final() - target_alpha) > 2.0 * epsilon) return CalibrationVerdict::Diverged;
  return CalibrationVerdict::Inconclusive;
}

LearnabilityVerdict success_criterion_check(std::span<const ForecastRecord> records,
                                            double target_alpha, double epsilon,
                                            std::uint64_t burn_in, double delta) {
  if (burn_in >= records.size()) throw DomainError("success_criterion_check: burn_in >= length");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("success_criterion_check: delta not in (0,1)");
  if (!(epsilon >= 0.0)) throw DomainError("success_criterion_check: epsilon must be >= 0");

  // errors_after[i] = number of errors in records[burn_in + i ..]
  const auto tail = records.subspan(burn_in);
  const std::size_t len = tail.size();
  std::vector<std::uint64_t> suffix_errors(len + 1, 0);
  for (std::size_t i = len; i-- > 0;) {
    const bool error = !(std::abs(tail[i].forecast - tail[i].truth) <= epsilon);
    suffix_errors[i] = suffix_errors[i + 1] + (error ? 1 : 0);
  }

  LearnabilityVerdict v;
  v.burn_in = burn_in;
  v.tail_error_rate = static_cast<double>(suffix_errors[0]) / static_cast<double>(len);

  bool persistent = v.tail_error_rate > delta;
  for (std::size_t divisor = 2; divisor <= 16; divisor *= 2) {
    const std::size_t w = (len + divisor - 1) / divisor;
    const double rate = static_cast<double>(suffix_errors[len - w]) / static_cast<double>(w);
    v.window_error_rates.push_back(rate);
    persistent = persistent && rate > delta;
  }

  if (v.tail_error_rate <= delta)
    v.verdict = Learnability::Learned;
  else if (persistent)
    v.verdict = Learnability::NotLearned;
  else
    v.verdict = Learnability::Inconclusive;

  try {
    v.p_k_final = build_test_set(records, {target_alpha, 0.0, MatchForecast{}}).p_final();
  } catch (const EmptyTestSet&) {
  }

  v.notes =
      "checked: correctness of forecasts against truths after burn-in (component i). "
      "not checked: the learner being self-assured of its correctness (component ii), "
      "which has no computable definition.";
  return v;
}

void write_p_k_csv(std::ostream& os, const TestSet& ts) {
  os << "k,p_k\n";
  for (std::size_t k = 0; k < ts.p_k_trace.size(); ++k)
    os << (k + 1) << ',' << format_double(ts.p_k_trace[k]) << '\n';
}

}  // namespace veritas
