#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "veritas/measure.hpp"
#include "veritas/rng.hpp"

namespace veritas {

inline constexpr std::string_view kConfigSchema = "veritas.experiment/1";
inline constexpr std::string_view kReportSchema = "veritas.report/1";

enum class ExperimentKind {
  Thm3Calibration,
  Thm45BrokenClock,
  Thm6Regime,
  Thm7Equivalence,
  Thm8Mle,
  Thm9Ngram,
  Thm10Rstar,
};

std::string_view to_string(ExperimentKind k) noexcept;
std::optional<ExperimentKind> experiment_from_string(std::string_view name) noexcept;

struct Violation {
  std::string path;  // JSON pointer of the offending field
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Default parameters of an experiment (everything except seed and output_dir).
nlohmann::json default_config(ExperimentKind kind);

// User config merged over the experiment defaults. Unknown experiments are
// returned unchanged so validate can report them.
nlohmann::json with_defaults(const nlohmann::json& user);

// Violations of the merged config; empty iff runnable.
std::vector<Violation> validate(const nlohmann::json& config);

struct ExperimentConfig {
  ExperimentKind experiment;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  nlohmann::json params;  // merged config, as validated
};

// with_defaults + validate; throws ConfigError listing every violation.
ExperimentConfig parse_config(const nlohmann::json& user);

struct SummaryLine {
  std::string label;
  std::string value;
  // "pass", "fail" or empty for plain statistics; drives colouring.
  std::string status;
};

struct RunReport {
  nlohmann::json report;            // also written to report.json
  std::vector<std::string> files;   // written data files, relative to output_dir
  std::vector<SummaryLine> summary;
  double wall_time_seconds = 0.0;
};

// Runs the experiment and writes its files into config.output_dir (created
// if missing). Throws std::runtime_error on IO failure.
RunReport run(const ExperimentConfig& config);

// A randomized change-of-measure instance: gain f(x, w) = a*x*w + b*x^2 +
// c*w + d*sin(e*x*w), measures on a shared grid inside [-2, 2] with
// mu(x) = 0 => nu(x) = 0,
// and a random non-empty feasible subset of the grid.
struct EquivalenceInstance {
  std::vector<double> coefficients;  // a, b, c, d, e
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  std::vector<double> feasible;

  GainFunction gain() const;
};

EquivalenceInstance random_equivalence_instance(RngState state);

// Bundled toy corpus used by the n-gram experiment when no file is given.
std::string_view toy_corpus();

}  // namespace veritas
