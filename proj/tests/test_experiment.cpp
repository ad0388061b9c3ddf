#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iterator>

#include "veritas/experiment.hpp"

using namespace veritas;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool has_violation(const std::vector<Violation>& vs, const std::string& path, const std::string& text) {
  for (const auto& v : vs)
    if (v.path == path && v.message.find(text) != std::string::npos) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("veritas-test-" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("experiment names round-trip") {
  for (auto k : {ExperimentKind::Thm3Calibration, ExperimentKind::Thm45BrokenClock, ExperimentKind::Thm6Regime,
                 ExperimentKind::Thm7Equivalence, ExperimentKind::Thm8Mle, ExperimentKind::Thm9Ngram,
                 ExperimentKind::Thm10Rstar})
    CHECK(experiment_from_string(to_string(k)) == k);
  CHECK(!experiment_from_string("thm11"));
}

TEST_CASE("defaults validate for every experiment") {
  for (const char* name : {"thm3_calibration", "thm4_5_broken_clock", "thm6_regime", "thm7_equivalence",
                           "thm8_mle", "thm9_ngram", "thm10_rstar"}) {
    CAPTURE(name);
    const json user{{"schema", kConfigSchema}, {"experiment", name}, {"seed", 1}};
    CHECK(validate(with_defaults(user)).empty());
  }
}

TEST_CASE("validation reports every violation with its path") {
  const json bad{{"schema", kConfigSchema},
                 {"experiment", "thm6_regime"},
                 {"process", {{"kind", "regime_switch"}, {"alpha", 1.2}}}};
  const auto vs = validate(with_defaults(bad));
  CHECK(has_violation(vs, "/process/alpha", "probability out of range"));
  CHECK(has_violation(vs, "/seed", ""));
  CHECK(vs.size() == 2);

  const json clock{{"schema", kConfigSchema},
                   {"experiment", "thm4_5_broken_clock"},
                   {"seed", 1},
                   {"horizon", 100},
                   {"process", {{"switch_step", 100}}},
                   {"verdict", {{"burn_in", 10}}}};
  CHECK(has_violation(validate(with_defaults(clock)), "/process/switch_step", "< horizon"));

  CHECK(has_violation(validate(with_defaults(json{{"schema", kConfigSchema}, {"experiment", "nope"}, {"seed", 1}})),
                      "/experiment", ""));
  CHECK(has_violation(validate(with_defaults(json{{"schema", "other"}, {"experiment", "thm9_ngram"}, {"seed", 1}})),
                      "/schema", ""));
  CHECK(has_violation(validate(with_defaults(json{{"schema", kConfigSchema}, {"experiment", "thm9_ngram"}, {"seed", -1}})),
                      "/seed", ""));
  CHECK(!validate(json::array()).empty());

  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() == 2);
  }
}

TEST_CASE("parse_config fills the output directory") {
  const auto cfg = parse_config(json{{"schema", kConfigSchema}, {"experiment", "thm9_ngram"}, {"seed", 3}});
  CHECK(cfg.experiment == ExperimentKind::Thm9Ngram);
  CHECK(cfg.seed == 3);
  CHECK(cfg.output_dir == fs::path("veritas-out/thm9_ngram"));
}

TEST_CASE("runs are byte-identical and reports are complete") {
  const std::vector<json> configs{
      {{"experiment", "thm3_calibration"}, {"horizon", 5000}, {"oracle_horizon", 5000}, {"verdict", {{"burn_in", 100}}}},
      {{"experiment", "thm4_5_broken_clock"}, {"horizon", 5000}, {"verdict", {{"burn_in", 200}}}},
      {{"experiment", "thm6_regime"}, {"horizon", 5000}, {"verdict", {{"burn_in", 100}}}},
      {{"experiment", "thm7_equivalence"}, {"equivalence", {{"instances", 50}}}},
      {{"experiment", "thm8_mle"}, {"mle", {{"samples", 500}, {"iterations", 50}}}},
      {{"experiment", "thm9_ngram"}},
      {{"experiment", "thm10_rstar"}, {"horizon", 2000}},
  };
  for (auto user : configs) {
    const std::string name = user["experiment"];
    CAPTURE(name);
    user["schema"] = kConfigSchema;
    user["seed"] = 21;
    auto cfg = parse_config(user);
    const auto dir_a = scratch(name + "-a"), dir_b = scratch(name + "-b");
    cfg.output_dir = dir_a;
    const auto a = run(cfg);
    cfg.output_dir = dir_b;
    const auto b = run(cfg);

    CHECK(a.files == b.files);
    CHECK(fs::exists(dir_a / "report.json"));
    for (const auto& f : a.files) {
      CHECK(fs::exists(dir_a / f));
      if (f == "report.json") continue;
      CHECK(slurp(dir_a / f) == slurp(dir_b / f));
    }
    for (const char* key : {"schema", "experiment", "seed", "config", "verdicts", "statistics", "performance_trace",
                            "files", "wall_time_seconds"})
      CHECK(a.report.contains(key));
    CHECK(a.report["schema"] == kReportSchema);
    CHECK(!a.summary.empty());

    json a_copy = a.report, b_copy = b.report;
    a_copy.erase("wall_time_seconds");
    b_copy.erase("wall_time_seconds");
    CHECK(a_copy == b_copy);
  }
}

TEST_CASE("a different seed changes the data") {
  json user{{"schema", kConfigSchema}, {"experiment", "thm10_rstar"}, {"horizon", 500}, {"seed", 1}};
  auto cfg = parse_config(user);
  const auto one = scratch("seed1"), two = scratch("seed2");
  cfg.output_dir = one;
  run(cfg);
  cfg.seed = 2;
  cfg.output_dir = two;
  run(cfg);
  CHECK(slurp(one / "path.csv") != slurp(two / "path.csv"));
}
