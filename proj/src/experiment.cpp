#include "veritas/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>

#include "veritas/calibration.hpp"
#include "veritas/csv.hpp"
#include "veritas/distance.hpp"
#include "veritas/error.hpp"
#include "veritas/forecasters.hpp"
#include "veritas/model.hpp"
#include "veritas/ngram.hpp"
#include "veritas/processes.hpp"

namespace veritas {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kNames{{
    {ExperimentKind::Thm3Calibration, "thm3_calibration"},
    {ExperimentKind::Thm45BrokenClock, "thm4_5_broken_clock"},
    {ExperimentKind::Thm6Regime, "thm6_regime"},
    {ExperimentKind::Thm7Equivalence, "thm7_equivalence"},
    {ExperimentKind::Thm8Mle, "thm8_mle"},
    {ExperimentKind::Thm9Ngram, "thm9_ngram"},
    {ExperimentKind::Thm10Rstar, "thm10_rstar"},
}};

constexpr std::string_view kToyCorpus =
    "the cat sat on the mat\n"
    "the dog sat on the log\n"
    "the cat saw the dog\n"
    "the dog saw the cat on the mat\n"
    "a cat is a small animal\n"
    "a dog is a loyal animal\n"
    "the bird sang on the branch\n"
    "the bird sang and sang \xE2\x80\xA6\n"
    "we saw the bird on the log\n"
    "the cat sat on the mat again\n"
    "it rained on the mat\n"
    "it rained and rained \xE2\x80\xA6\n"
    "the dog ran after the cat\n"
    "the cat ran up the tree\n"
    "a bird sat in the tree\n"
    "we sat on the log and saw the sun\n"
    "the sun rose over the tree\n"
    "the sun set over the log\n"
    "the cat is on the mat\n"
    "the dog is on the log\n";

bool uses_process(ExperimentKind k) {
  return k == ExperimentKind::Thm3Calibration || k == ExperimentKind::Thm45BrokenClock ||
         k == ExperimentKind::Thm6Regime || k == ExperimentKind::Thm10Rstar;
}

json verdict_defaults(double calibration_epsilon, double error_epsilon) {
  return {{"calibration_epsilon", calibration_epsilon},
          {"window_fraction", 0.5},
          {"error_epsilon", error_epsilon},
          {"burn_in", 1000},
          {"delta", 0.05}};
}

// ---------------------------------------------------------------------------
// validation

bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

class Validator {
 public:
  explicit Validator(const json& cfg) : cfg_(cfg) {}

  std::vector<Violation> take() { return std::move(out_); }

  void fail(const std::string& path, const std::string& message) { out_.push_back({path, message}); }

  const json* field(const std::string& path) {
    const json::json_pointer ptr(path);
    if (!cfg_.contains(ptr)) return nullptr;
    return &cfg_.at(ptr);
  }

  const json* require(const std::string& path) {
    const json* v = field(path);
    if (v == nullptr) fail(path, "missing required field");
    return v;
  }

  std::optional<double> number(const std::string& path) {
    const json* v = require(path);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  void probability(const std::string& path) {
    if (auto v = number(path); v && !(*v >= 0.0 && *v <= 1.0)) fail(path, "probability out of range [0,1]");
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& path, std::uint64_t min_value = 0) {
    const json* v = require(path);
    if (v == nullptr) return std::nullopt;
    if (!is_count(*v)) {
      fail(path, "expected a non-negative integer");
      return std::nullopt;
    }
    const auto n = v->get<std::uint64_t>();
    if (n < min_value) {
      fail(path, "must be >= " + std::to_string(min_value));
      return std::nullopt;
    }
    return n;
  }

  void positive(const std::string& path) {
    if (auto v = number(path); v && !(*v > 0.0)) fail(path, "must be > 0");
  }

  void open_unit(const std::string& path) {
    if (auto v = number(path); v && !(*v > 0.0 && *v < 1.0)) fail(path, "must lie in (0,1)");
  }

  std::optional<std::string> one_of(const std::string& path, std::initializer_list<std::string_view> options) {
    const json* v = require(path);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(path, "expected a string");
      return std::nullopt;
    }
    const auto s = v->get<std::string>();
    if (std::find(options.begin(), options.end(), s) == options.end()) {
      std::string list;
      for (auto o : options) list += (list.empty() ? "" : ", ") + std::string(o);
      fail(path, "unknown value '" + s + "' (expected one of: " + list + ")");
      return std::nullopt;
    }
    return s;
  }

 private:
  const json& cfg_;
  std::vector<Violation> out_;
};

void validate_process(Validator& v, std::optional<std::uint64_t> horizon) {
  const auto kind = v.one_of("/process/kind", {"iid", "regime_switch", "broken_clock"});
  if (!kind) return;
  if (*kind == "iid") {
    v.probability("/process/alpha");
  } else if (*kind == "regime_switch") {
    v.probability("/process/alpha");
    v.probability("/process/beta");
    v.one_of("/process/schedule", {"alternating"});
  } else {
    v.probability("/process/pre");
    v.probability("/process/post");
    const auto n = v.unsigned_integer("/process/switch_step");
    if (n && horizon && *n >= *horizon)
      v.fail("/process/switch_step", "broken clock switch step must be < horizon");
  }
}

void validate_forecaster(Validator& v) {
  const auto kind =
      v.one_of("/forecaster/kind", {"constant", "empirical_frequency", "truth_oracle", "broken_clock_reader"});
  if (!kind) return;
  if (*kind == "constant" || *kind == "broken_clock_reader") v.probability("/forecaster/alpha");
  if (*kind == "empirical_frequency") v.probability("/forecaster/prior");
}

void validate_verdict(Validator& v) {
  v.positive("/verdict/calibration_epsilon");
  v.open_unit("/verdict/window_fraction");
  if (auto e = v.number("/verdict/error_epsilon"); e && !(*e >= 0.0))
    v.fail("/verdict/error_epsilon", "must be >= 0");
  v.unsigned_integer("/verdict/burn_in");
  v.open_unit("/verdict/delta");
}

// ---------------------------------------------------------------------------
// config -> domain types

ProcessSpec process_from(const json& p, std::uint64_t horizon) {
  const auto kind = p.at("kind").get<std::string>();
  ProcessSpec spec;
  spec.horizon = horizon;
  if (kind == "iid")
    spec.kind = IidProcess{p.at("alpha").get<double>()};
  else if (kind == "regime_switch")
    spec.kind = RegimeSwitchProcess{p.at("alpha").get<double>(), p.at("beta").get<double>(),
                                    Schedule::Alternating};
  else
    spec.kind = BrokenClockProcess{p.at("pre").get<double>(), p.at("switch_step").get<std::uint64_t>(),
                                   p.at("post").get<double>()};
  return spec;
}

ForecasterSpec forecaster_from(const json& f) {
  const auto kind = f.at("kind").get<std::string>();
  if (kind == "constant") return ConstantForecaster{f.at("alpha").get<double>()};
  if (kind == "empirical_frequency") return EmpiricalFrequencyForecaster{f.at("prior").get<double>()};
  if (kind == "truth_oracle") return TruthOracleForecaster{};
  return BrokenClockReaderForecaster{f.at("alpha").get<double>()};
}

SelectionCriterion criterion_from(const json& c, const Path& path) {
  SelectionCriterion crit;
  crit.target_alpha = c.at("target_alpha").get<double>();
  crit.tolerance = c.at("tolerance").get<double>();
  const auto mode = c.at("mode").get<std::string>();
  if (mode == "match_forecast")
    crit.mode = MatchForecast{};
  else if (mode == "match_forecast_and_truth")
    crit.mode = MatchForecastAndTruth{};
  else
    crit.mode = OracleMask{oracle_selection(path, crit.target_alpha)};
  return crit;
}

struct VerdictParams {
  double calibration_epsilon;
  double window_fraction;
  double error_epsilon;
  std::uint64_t burn_in;
  double delta;
};

VerdictParams verdict_from(const json& v) {
  return {v.at("calibration_epsilon").get<double>(), v.at("window_fraction").get<double>(),
          v.at("error_epsilon").get<double>(), v.at("burn_in").get<std::uint64_t>(),
          v.at("delta").get<double>()};
}

// ---------------------------------------------------------------------------
// output helpers

class Output {
 public:
  explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  template <class Writer>
  void file(const std::string& name, Writer&& writer) {
    std::ofstream os(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + (dir_ / name).string() + " for writing");
    writer(os);
    if (!os) throw std::runtime_error("write failed: " + (dir_ / name).string());
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const noexcept { return files_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

struct Outcome {
  json verdicts = json::object();
  json statistics = json::object();
  json performance_trace = json::array();
  json extra = json::object();
  std::vector<SummaryLine> summary;

  void stat(const std::string& key, double value, const std::string& label) {
    statistics[key] = value;
    summary.push_back({label, format_double(value), ""});
  }

  void check(const std::string& key, bool ok, const std::string& label, const std::string& value) {
    verdicts[key] = value;
    summary.push_back({label, value, ok ? "pass" : "fail"});
  }
};

// Mean |forecast - truth| over ten consecutive blocks of the run. Improvement
// with experience shows up as a decreasing trace.
json performance_trace(std::span<const ForecastRecord> records) {
  json trace = json::array();
  const std::size_t blocks = std::min<std::size_t>(10, records.size());
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = records.size() * b / blocks;
    const std::size_t hi = records.size() * (b + 1) / blocks;
    double err = 0.0;
    for (std::size_t i = lo; i < hi; ++i) err += std::abs(records[i].forecast - records[i].truth);
    trace.push_back({{"step", hi}, {"mean_abs_error", err / static_cast<double>(hi - lo)}});
  }
  return trace;
}

void write_p_k_trace(Output& out, const TestSet& ts) {
  out.file("p_k.csv", [&](std::ostream& os) { write_p_k_csv(os, ts); });
  out.file("trace.dat", [&](std::ostream& os) {
    os << "# k p_k\n";
    for (std::size_t k = 0; k < ts.p_k_trace.size(); ++k)
      os << (k + 1) << ' ' << format_double(ts.p_k_trace[k]) << '\n';
  });
}

json learnability_json(const LearnabilityVerdict& v) {
  json j{{"verdict", to_string(v.verdict)},
         {"burn_in", v.burn_in},
         {"tail_error_rate", v.tail_error_rate},
         {"window_error_rates", v.window_error_rates},
         {"notes", v.notes}};
  j["p_k_final"] = v.p_k_final ? json(*v.p_k_final) : json(nullptr);
  return j;
}

std::string rational_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// ---------------------------------------------------------------------------
// experiments

Outcome run_thm3(const ExperimentConfig& cfg, Output& out) {
  const auto& p = cfg.params;
  const auto spec = process_from(p.at("process"), p.at("horizon").get<std::uint64_t>());
  const auto path = simulate(spec, seed_state(cfg.seed));
  const auto records = run_forecaster(forecaster_from(p.at("forecaster")), path);
  const auto crit = criterion_from(p.at("criterion"), path);
  const auto vp = verdict_from(p.at("verdict"));
  const auto ts = build_test_set(records, crit);
  const auto verdict = calibration_verdict(ts, crit.target_alpha, vp.calibration_epsilon, vp.window_fraction);

  out.file("path.csv", [&](std::ostream& os) { write_path_csv(os, path); });
  out.file("records.csv", [&](std::ostream& os) { write_records_csv(os, records); });
  write_p_k_trace(out, ts);

  Outcome o;
  o.stat("test_set_size", static_cast<double>(ts.size()), "test set size");
  o.stat("p_K", ts.p_final(), "p_K");
  o.stat("abs_p_K_minus_alpha", std::abs(ts.p_final() - crit.target_alpha), "|p_K - alpha|");
  o.check("calibration", verdict == CalibrationVerdict::Converged, "calibration verdict",
          std::string(to_string(verdict)));

  // Truth-oracle forecasters on each process kind, each on its own stream.
  const auto oracle_h = p.at("oracle_horizon").get<std::uint64_t>();
  const std::array<std::pair<std::string, std::pair<ProcessSpec, double>>, 3> kinds{{
      {"iid", {ProcessSpec{IidProcess{0.7}, oracle_h}, 0.7}},
      {"regime_switch", {ProcessSpec{RegimeSwitchProcess{0.2, 0.8}, oracle_h}, 0.2}},
      {"broken_clock", {ProcessSpec{BrokenClockProcess{0.5, 100, 0.9}, oracle_h}, 0.9}},
  }};
  json oracle = json::object();
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto& [name, setup] = kinds[i];
    const auto opath = simulate(setup.first, derive(cfg.seed, i));
    const auto orecords = run_forecaster(TruthOracleForecaster{}, opath);
    const auto ots = build_test_set(orecords, {setup.second, 0.0, MatchForecastAndTruth{}});
    const auto ov = calibration_verdict(ots, setup.second, vp.calibration_epsilon, vp.window_fraction);
    oracle[name] = {{"target_alpha", setup.second}, {"p_K", ots.p_final()}, {"verdict", to_string(ov)}};
    o.check("truth_oracle_" + name, ov == CalibrationVerdict::Converged, "truth oracle on " + name,
            std::string(to_string(ov)));
  }
  o.extra["truth_oracle"] = oracle;
  o.performance_trace = performance_trace(records);
  return o;
}

Outcome run_thm45(const ExperimentConfig& cfg, Output& out) {
  const auto& p = cfg.params;
  const auto spec = process_from(p.at("process"), p.at("horizon").get<std::uint64_t>());
  const auto path = simulate(spec, seed_state(cfg.seed));
  const auto records = run_forecaster(forecaster_from(p.at("forecaster")), path);
  const auto crit = criterion_from(p.at("criterion"), path);
  const auto vp = verdict_from(p.at("verdict"));
  const auto ts = build_test_set(records, crit);
  const auto cal = calibration_verdict(ts, crit.target_alpha, vp.calibration_epsilon, vp.window_fraction);
  const auto learn = success_criterion_check(records, crit.target_alpha, vp.error_epsilon, vp.burn_in, vp.delta);

  out.file("path.csv", [&](std::ostream& os) { write_path_csv(os, path); });
  out.file("records.csv", [&](std::ostream& os) { write_records_csv(os, records); });
  write_p_k_trace(out, ts);

  std::uint64_t correct = 0;
  for (const auto& r : records)
    if (std::abs(r.forecast - r.truth) <= vp.error_epsilon) ++correct;

  Outcome o;
  o.stat("p_K", ts.p_final(), "p_K");
  o.stat("correct_steps", static_cast<double>(correct), "steps with correct forecast");
  o.stat("tail_error_rate", learn.tail_error_rate, "error rate after burn-in");
  o.check("calibration", cal != CalibrationVerdict::Converged, "calibration verdict", std::string(to_string(cal)));
  o.check("learnability", learn.verdict == Learnability::NotLearned, "success criterion",
          std::string(to_string(learn.verdict)));
  o.extra["learnability"] = learnability_json(learn);
  o.performance_trace = performance_trace(records);
  return o;
}

Outcome run_thm6(const ExperimentConfig& cfg, Output& out) {
  const auto& p = cfg.params;
  const auto spec = process_from(p.at("process"), p.at("horizon").get<std::uint64_t>());
  const auto path = simulate(spec, seed_state(cfg.seed));
  const auto records = run_forecaster(forecaster_from(p.at("forecaster")), path);
  const auto crit = criterion_from(p.at("criterion"), path);
  const auto vp = verdict_from(p.at("verdict"));

  const auto outcomes = outcomes_of(path);
  const double unconditional = empirical_counts(outcomes).value();

  // Oracle-selected subsequence: reads the hidden truth, which no learner can.
  const auto oracle_records = run_forecaster(TruthOracleForecaster{}, path);
  const auto masked = build_test_set(oracle_records, crit);
  const auto cal = calibration_verdict(masked, crit.target_alpha, vp.calibration_epsilon, vp.window_fraction);
  const auto learn = success_criterion_check(records, crit.target_alpha, vp.error_epsilon, vp.burn_in, vp.delta);

  out.file("path.csv", [&](std::ostream& os) { write_path_csv(os, path); });
  out.file("records.csv", [&](std::ostream& os) { write_records_csv(os, records); });
  write_p_k_trace(out, masked);

  Outcome o;
  o.stat("unconditional_frequency", unconditional, "unconditional frequency");
  o.stat("oracle_masked_frequency", masked.p_final(), "oracle-masked frequency");
  o.stat("final_forecast", records.back().forecast, "final empirical forecast");
  o.check("oracle_masked_calibration", cal == CalibrationVerdict::Converged,
          "oracle-masked calibration", std::string(to_string(cal)));
  o.check("learnability", learn.verdict == Learnability::NotLearned, "empirical forecaster",
          std::string(to_string(learn.verdict)));
  o.extra["learnability"] = learnability_json(learn);
  o.performance_trace = performance_trace(records);
  return o;
}

Outcome run_thm7(const ExperimentConfig& cfg, Output& out) {
  const auto& eq = cfg.params.at("equivalence");
  const auto grid_size = eq.at("grid_size").get<std::size_t>();
  const auto instances = eq.at("instances").get<std::uint64_t>();

  // Showcase instance: f(x) = -(x - 0.3)^2 on a uniform grid over [0,1];
  // nu tilts mass linearly towards 1.
  std::vector<double> grid(grid_size), tilt(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    tilt[i] = 1.0 + grid[i];
  }
  const DiscreteMeasure mu = DiscreteMeasure::uniform(grid);
  const DiscreteMeasure nu(grid, tilt);
  const auto f = pointwise([](double x) { return -(x - 0.3) * (x - 0.3); });
  const auto report = observational_equivalence_report(f, mu, nu, grid);
  const Density h = radon_nikodym(nu, mu);

  out.file("trace.dat", [&](std::ostream& os) {
    os << "# x E_nu[f] E_mu[f*h]\n";
    for (double x : grid)
      os << format_double(x) << ' ' << format_double(expected_gain(f, x, nu)) << ' '
         << format_double(expected_gain(f, x, mu, h)) << '\n';
  });

  double max_gap = report.objective_gap;
  std::uint64_t agree = 0;
  out.file("instances.csv", [&](std::ostream& os) {
    os << "instance,support_size,feasible_size,objective_gap,argmax_nu,argmax_mu,same_argmax,kl\n";
    for (std::uint64_t i = 0; i < instances; ++i) {
      const auto inst = random_equivalence_instance(derive(cfg.seed, i));
      const auto r = observational_equivalence_report(inst.gain(), inst.mu, inst.nu, inst.feasible);
      max_gap = std::max(max_gap, r.objective_gap);
      agree += r.same_argmax ? 1 : 0;
      os << i << ',' << inst.mu.size() << ',' << inst.feasible.size() << ',' << format_double(r.objective_gap)
         << ',' << format_double(r.argmax_nu.point) << ',' << format_double(r.argmax_mu.point) << ','
         << (r.same_argmax ? 1 : 0) << ',' << format_double(r.kl_nu_mu) << '\n';
    }
  });

  Outcome o;
  o.stat("objective_gap", report.objective_gap, "objective gap (showcase)");
  o.stat("argmax_nu", report.argmax_nu.point, "argmax under nu");
  o.stat("argmax_mu", report.argmax_mu.point, "argmax under (mu, h)");
  o.stat("kl_nu_mu", report.kl_nu_mu, "KL(nu || mu)");
  o.stat("max_objective_gap", max_gap, "max objective gap (all instances)");
  o.check("same_argmax", report.same_argmax, "same maximizer (showcase)", report.same_argmax ? "true" : "false");
  o.check("gap_within_tolerance", max_gap <= 1e-12, "objective gap <= 1e-12", max_gap <= 1e-12 ? "true" : "false");
  o.check("random_instances_agree", agree == instances, "randomized instances with same maximizer",
          std::to_string(agree) + "/" + std::to_string(instances));
  o.extra["equivalence"] = {{"objective_gap", report.objective_gap}, {"argmax_nu", report.argmax_nu.point},
                            {"argmax_mu", report.argmax_mu.point},   {"kl", report.kl_nu_mu},
                            {"theta_hat", nullptr},                  {"gradcheck_max_err", nullptr}};
  // Both formulations reach the same optimum, so experience with the true
  // measure shows no improvement over the other one.
  o.performance_trace = {{{"formulation", "nu"}, {"optimal_value", report.argmax_nu.value}},
                         {{"formulation", "mu_h"}, {"optimal_value", report.argmax_mu.value}}};
  return o;
}

Outcome run_thm8(const ExperimentConfig& cfg, Output& out) {
  const auto& m = cfg.params.at("mle");
  const auto samples = m.at("samples").get<std::size_t>();
  const auto theta = m.at("theta_true").get<std::vector<double>>();
  const double range = m.at("input_range").get<double>();

  const ModelShape logistic{1, {}};
  std::vector<Sample> data;
  data.reserve(samples);
  Rng rng = Rng::from_seed(cfg.seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = (2.0 * rng.uniform() - 1.0) * range;
    const double p = probability(logistic, theta, std::array{x});
    data.push_back({{x}, static_cast<std::uint8_t>(rng.bernoulli(p))});
  }

  FitOptions opt;
  opt.step_size = m.at("step_size").get<double>();
  opt.iterations = m.at("iterations").get<std::uint64_t>();
  opt.init_seed = derive(cfg.seed, 1).value;
  opt.init_scale = m.at("init_scale").get<double>();
  const auto fit = mle_fit(logistic, data, opt);

  bool monotone = true;
  for (std::size_t i = 1; i < fit.ll_trace.size(); ++i)
    monotone = monotone && fit.ll_trace[i] >= fit.ll_trace[i - 1] - opt.tolerance;

  bool recovered = true;
  for (std::size_t k = 0; k < theta.size(); ++k)
    recovered = recovered && std::abs(fit.params[k] - theta[k]) <= m.at("recovery_tolerance").get<double>();

  double kl = 0.0;
  for (const auto& s : data) kl += bernoulli_kl(probability(logistic, theta, s.x), probability(logistic, fit.params, s.x));
  kl /= static_cast<double>(data.size());

  const double h = m.at("gradcheck_h").get<double>();
  const std::span<const Sample> check_data(data.data(), std::min<std::size_t>(data.size(), 500));
  double worst = 0.0;
  json per_shape = json::array();
  const auto shapes = m.at("shapes").get<std::vector<std::vector<std::size_t>>>();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const ModelShape shape{1, shapes[i]};
    const auto params = initial_parameters(shape, derive(cfg.seed, 100 + i).value, 1.0);
    const double err = grad_check(shape, params, check_data, h);
    worst = std::max(worst, err);
    per_shape.push_back({{"hidden", shapes[i]}, {"max_rel_err", err}});
  }

  out.file("data.csv", [&](std::ostream& os) {
    os << "x,y\n";
    for (const auto& s : data) os << format_double(s.x[0]) << ',' << int(s.y) << '\n';
  });
  out.file("trace.dat", [&](std::ostream& os) {
    os << "# iteration log_likelihood\n";
    for (std::size_t i = 0; i < fit.ll_trace.size(); ++i) os << i << ' ' << format_double(fit.ll_trace[i]) << '\n';
  });

  Outcome o;
  o.stat("theta_hat_0", fit.params[0], "fitted slope");
  o.stat("theta_hat_1", fit.params[1], "fitted intercept");
  o.stat("final_log_likelihood", fit.ll_trace.back(), "final log-likelihood");
  o.stat("kl_true_fitted", kl, "mean KL(true || fitted)");
  o.stat("gradcheck_max_err", worst, "grad check max rel error");
  o.check("theta_recovered", recovered, "parameters recovered", recovered ? "true" : "false");
  o.check("ll_monotone", monotone, "log-likelihood non-decreasing", monotone ? "true" : "false");
  o.check("gradcheck", worst <= 1e-4, "grad check <= 1e-4", worst <= 1e-4 ? "true" : "false");
  o.extra["equivalence"] = {{"objective_gap", nullptr}, {"argmax_nu", nullptr},     {"argmax_mu", nullptr},
                            {"kl", kl},                 {"theta_hat", fit.params}, {"gradcheck_max_err", worst}};
  o.extra["gradcheck_shapes"] = per_shape;
  o.extra["fit"] = {{"halvings", fit.halvings}, {"rejected_steps", fit.rejected_steps}, {"floor_hits", fit.floor_hits}};
  const std::size_t stride = std::max<std::size_t>(1, fit.ll_trace.size() / 20);
  for (std::size_t i = 0; i < fit.ll_trace.size(); i += stride)
    o.performance_trace.push_back({{"iteration", i}, {"log_likelihood", fit.ll_trace[i]}});
  return o;
}

// Occurrences of `context` that end a sentence: these have no continuation.
std::uint64_t sentence_final_occurrences(const Corpus& corpus, std::span<const Token> context) {
  std::uint64_t n = 0;
  for (const auto& s : corpus.sentences) {
    if (context.empty()) continue;
    if (s.size() >= context.size() && std::equal(context.begin(), context.end(), s.end() - context.size())) ++n;
  }
  return n;
}

Outcome run_thm9(const ExperimentConfig& cfg, Output& out) {
  const auto& g = cfg.params.at("ngram");
  std::string text;
  if (g.at("corpus").is_string()) {
    std::ifstream in(g.at("corpus").get<std::string>(), std::ios::binary);
    if (!in) throw std::runtime_error("cannot read corpus " + g.at("corpus").get<std::string>());
    text.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    text = std::string(kToyCorpus);
  }
  std::size_t n_max = g.at("n_max").get<std::size_t>();
  if (n_max == 0) {
    for (const auto& s : ingest(text, {'\n', 1}).corpus.sentences) n_max = std::max(n_max, s.size());
  }
  const auto [corpus, table] = ingest(text, {'\n', n_max});

  // Telescoping on every sentence short enough for the exact chain.
  std::uint64_t telescoped = 0, eligible = 0;
  for (const auto& s : corpus.sentences) {
    if (s.size() > n_max) continue;
    ++eligible;
    if (sentence_prob(table, s) == Rational(table.count(s), table.base_count())) ++telescoped;
  }

  // Per-context normalization, exactly, including the sentence-final deficit.
  std::uint64_t contexts = 0, normalized = 0;
  auto check_context = [&](std::span<const Token> ctx) {
    ++contexts;
    Rational total = 0;
    for (const auto& [next, count] : table.continuations(ctx)) total += conditional_prob(table, next, ctx);
    const std::uint64_t c = table.count(ctx);
    if (total == Rational(c - sentence_final_occurrences(corpus, ctx), c)) ++normalized;
  };
  check_context({});
  for (const auto& [seq, count] : table.counts())
    if (seq.size() < n_max) check_context(seq);

  // Direct observation on random in-corpus spans.
  const auto samples = g.at("samples").get<std::uint64_t>();
  Rng rng = Rng::from_seed(cfg.seed);
  std::uint64_t observed = 0;
  out.file("checks.csv", [&](std::ostream& os) {
    os << "sentence,chain_value,brute_force_value,equal\n";
    for (std::uint64_t i = 0; i < samples; ++i) {
      const auto& s = corpus.sentences[rng.below(corpus.sentences.size())];
      const auto len = 1 + rng.below(std::min<std::size_t>(s.size(), n_max));
      const auto start = rng.below(s.size() - len + 1);
      const std::span<const Token> span(s.data() + start, len);
      const auto r = direct_observation_check(table, corpus, span);
      observed += r.equal ? 1 : 0;
      os << '"' << join_tokens(span) << "\"," << rational_string(r.chain_value) << ','
         << rational_string(r.brute_force_value) << ',' << (r.equal ? 1 : 0) << '\n';
    }
  });
  out.file("table.tsv", [&](std::ostream& os) { write_table_tsv(os, table); });

  Outcome o;
  o.stat("sentences", static_cast<double>(corpus.sentences.size()), "sentences");
  o.stat("base_count", static_cast<double>(table.base_count()), "C(w_0) total tokens");
  o.stat("n_max", static_cast<double>(n_max), "n-gram order");
  o.stat("table_entries", static_cast<double>(table.size()), "table entries");
  o.check("telescoping", telescoped == eligible, "telescoping identity",
          std::to_string(telescoped) + "/" + std::to_string(eligible));
  o.check("normalization", normalized == contexts, "per-context normalization",
          std::to_string(normalized) + "/" + std::to_string(contexts));
  o.check("direct_observation", observed == samples, "direct observation (chain = brute force)",
          std::to_string(observed) + "/" + std::to_string(samples));
  return o;
}

Outcome run_thm10(const ExperimentConfig& cfg, Output& out) {
  const auto& p = cfg.params;
  const auto spec = process_from(p.at("process"), p.at("horizon").get<std::uint64_t>());
  const auto path = simulate(spec, seed_state(cfg.seed));
  const auto records = run_forecaster(forecaster_from(p.at("forecaster")), path);
  const auto kind = p.at("rstar").at("distance").get<std::string>() == "kullback_leibler"
                        ? DistanceKind::KullbackLeibler
                        : DistanceKind::SquaredError;

  std::vector<double> candidate, truth;
  for (const auto& r : records) {
    candidate.push_back(r.forecast);
    truth.push_back(r.truth);
  }
  // A machine has no access to the hidden schedule.
  const auto hidden = evaluate_distance({kind, false}, candidate, std::nullopt);
  // Only an oracle that is handed the schedule can compute the distance.
  const auto oracle = evaluate_distance({kind, true}, candidate, std::span<const double>(truth));

  const auto outcomes = outcomes_of(path);
  const std::vector<double> flat(outcomes.size(), 0.5);
  std::vector<double> swapped(outcomes.size());
  for (std::size_t t = 0; t < path.size(); ++t) {
    const auto* rs = std::get_if<RegimeSwitchProcess>(&spec.kind);
    swapped[t] = rs ? (t % 2 == 0 ? rs->beta : rs->alpha) : 1.0 - truth[t];
  }
  const double llr_flat = likelihood_indistinguishability(outcomes, flat, truth);
  const double llr_swapped = likelihood_indistinguishability(outcomes, swapped, truth);

  out.file("path.csv", [&](std::ostream& os) { write_path_csv(os, path); });
  out.file("records.csv", [&](std::ostream& os) { write_records_csv(os, records); });
  out.file("trace.dat", [&](std::ostream& os) {
    os << "# t cumulative_loglik(flat) - loglik(truth)\n";
    double acc = 0.0;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      acc += likelihood_indistinguishability(std::span(outcomes).subspan(t, 1), std::span(flat).subspan(t, 1),
                                             std::span<const double>(truth).subspan(t, 1));
      os << t << ' ' << format_double(acc) << '\n';
    }
  });

  Outcome o;
  const bool hidden_refused = std::holds_alternative<NotEvaluable>(hidden);
  const bool oracle_finite = std::holds_alternative<double>(oracle) && std::isfinite(std::get<double>(oracle));
  o.check("distance_hidden", hidden_refused, "distance to hidden truth",
          hidden_refused ? "NotEvaluable" : format_double(std::get<double>(hidden)));
  o.check("distance_oracle", oracle_finite, "distance with oracle truth",
          oracle_finite ? format_double(std::get<double>(oracle)) : "NotEvaluable");
  o.stat("llr_flat_vs_truth_per_step", llr_flat / static_cast<double>(outcomes.size()),
         "loglik(flat 0.5) - loglik(truth), per step");
  o.stat("llr_swapped_vs_truth_per_step", llr_swapped / static_cast<double>(outcomes.size()),
         "loglik(swapped schedule) - loglik(truth), per step");
  o.extra["distance"] = {
      {"hidden", hidden_refused ? json{{"not_evaluable", std::get<NotEvaluable>(hidden).reason}} : json(nullptr)},
      {"oracle", oracle_finite ? json(std::get<double>(oracle)) : json(nullptr)}};
  o.performance_trace = performance_trace(records);
  return o;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(ExperimentKind k) noexcept {
  for (const auto& [kind, name] : kNames)
    if (kind == k) return name;
  return "?";
}

std::optional<ExperimentKind> experiment_from_string(std::string_view name) noexcept {
  for (const auto& [kind, n] : kNames)
    if (n == name) return kind;
  return std::nullopt;
}

std::string_view toy_corpus() { return kToyCorpus; }

ConfigError::ConfigError(std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  " + v.path + ": " + v.message;
        return msg;
      }()),
      violations_(std::move(violations)) {}

json default_config(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Thm3Calibration:
      return {{"horizon", 50000},
              {"oracle_horizon", 200000},
              {"process", {{"kind", "iid"}, {"alpha", 0.7}}},
              {"forecaster", {{"kind", "constant"}, {"alpha", 0.7}}},
              {"criterion", {{"target_alpha", 0.7}, {"tolerance", 0.0}, {"mode", "match_forecast"}}},
              {"verdict", verdict_defaults(0.01, 0.01)}};
    case ExperimentKind::Thm45BrokenClock:
      return {{"horizon", 100000},
              {"process", {{"kind", "broken_clock"}, {"pre", 0.5}, {"switch_step", 100}, {"post", 0.9}}},
              {"forecaster", {{"kind", "broken_clock_reader"}, {"alpha", 0.5}}},
              {"criterion", {{"target_alpha", 0.5}, {"tolerance", 0.0}, {"mode", "match_forecast"}}},
              {"verdict", verdict_defaults(0.01, 0.01)}};
    case ExperimentKind::Thm6Regime:
      return {{"horizon", 200000},
              {"process", {{"kind", "regime_switch"}, {"alpha", 0.2}, {"beta", 0.8}, {"schedule", "alternating"}}},
              {"forecaster", {{"kind", "empirical_frequency"}, {"prior", 0.5}}},
              {"criterion", {{"target_alpha", 0.2}, {"tolerance", 0.0}, {"mode", "oracle_mask"}}},
              {"verdict", verdict_defaults(0.01, 0.05)}};
    case ExperimentKind::Thm7Equivalence:
      return {{"equivalence", {{"grid_size", 101}, {"instances", 1000}}}};
    case ExperimentKind::Thm8Mle:
      return {{"mle",
               {{"samples", 5000},
                {"theta_true", {1.5, -0.7}},
                {"input_range", 2.0},
                {"step_size", 1.0},
                {"iterations", 1000},
                {"init_scale", 0.5},
                {"recovery_tolerance", 0.05},
                {"gradcheck_h", 1e-5},
                {"shapes", json::array({json::array(), json::array({4}), json::array({4, 3})})}}}};
    case ExperimentKind::Thm9Ngram:
      return {{"ngram", {{"corpus", nullptr}, {"n_max", 0}, {"samples", 100}}}};
    case ExperimentKind::Thm10Rstar:
      return {{"horizon", 20000},
              {"process", {{"kind", "regime_switch"}, {"alpha", 0.2}, {"beta", 0.8}, {"schedule", "alternating"}}},
              {"forecaster", {{"kind", "empirical_frequency"}, {"prior", 0.5}}},
              {"rstar", {{"distance", "squared_error"}}}};
  }
  return json::object();
}

json with_defaults(const json& user) {
  if (!user.is_object() || !user.contains("experiment") || !user["experiment"].is_string()) return user;
  const auto kind = experiment_from_string(user["experiment"].get<std::string>());
  if (!kind) return user;
  json merged = default_config(*kind);
  merged.merge_patch(user);
  return merged;
}

std::vector<Violation> validate(const json& config) {
  if (!config.is_object()) return {{"", "config must be a JSON object"}};
  Validator v(config);
  v.one_of("/schema", {kConfigSchema});
  const auto seed = v.require("/seed");
  if (seed && !is_count(*seed)) v.fail("/seed", "seed must be a non-negative 64-bit integer");
  if (const auto* out = v.field("/output_dir"); out && !out->is_string())
    v.fail("/output_dir", "expected a string");

  const auto name = v.one_of("/experiment", {"thm3_calibration", "thm4_5_broken_clock", "thm6_regime",
                                             "thm7_equivalence", "thm8_mle", "thm9_ngram", "thm10_rstar"});
  if (!name) return v.take();
  const auto kind = *experiment_from_string(*name);

  if (uses_process(kind)) {
    const auto horizon = v.unsigned_integer("/horizon", 1);
    validate_process(v, horizon);
    validate_forecaster(v);
  }
  if (kind == ExperimentKind::Thm3Calibration || kind == ExperimentKind::Thm45BrokenClock ||
      kind == ExperimentKind::Thm6Regime) {
    v.probability("/criterion/target_alpha");
    if (auto t = v.number("/criterion/tolerance"); t && !(*t >= 0.0)) v.fail("/criterion/tolerance", "must be >= 0");
    v.one_of("/criterion/mode", {"match_forecast", "match_forecast_and_truth", "oracle_mask"});
    validate_verdict(v);
    const auto horizon = config.value(json::json_pointer("/horizon"), json(0));
    const auto burn_in = config.value(json::json_pointer("/verdict/burn_in"), json(0));
    if (is_count(horizon) && is_count(burn_in) &&
        burn_in.get<std::uint64_t>() >= horizon.get<std::uint64_t>())
      v.fail("/verdict/burn_in", "burn_in must be < horizon");
  }
  switch (kind) {
    case ExperimentKind::Thm3Calibration:
      v.unsigned_integer("/oracle_horizon", 200);
      break;
    case ExperimentKind::Thm7Equivalence:
      v.unsigned_integer("/equivalence/grid_size", 2);
      v.unsigned_integer("/equivalence/instances");
      break;
    case ExperimentKind::Thm8Mle: {
      v.unsigned_integer("/mle/samples", 1);
      const auto* theta = v.require("/mle/theta_true");
      if (theta && (!theta->is_array() || theta->size() != 2 ||
                    !std::all_of(theta->begin(), theta->end(), [](const json& x) { return x.is_number(); })))
        v.fail("/mle/theta_true", "expected [slope, intercept]");
      v.positive("/mle/input_range");
      v.positive("/mle/step_size");
      v.unsigned_integer("/mle/iterations");
      if (auto s = v.number("/mle/init_scale"); s && !(*s >= 0.0)) v.fail("/mle/init_scale", "must be >= 0");
      v.positive("/mle/recovery_tolerance");
      v.positive("/mle/gradcheck_h");
      const auto* shapes = v.require("/mle/shapes");
      if (shapes) {
        bool ok = shapes->is_array();
        if (ok)
          for (const auto& s : *shapes)
            ok = ok && s.is_array() && s.size() <= 2 &&
                 std::all_of(s.begin(), s.end(), [](const json& w) { return is_count(w) && w.get<std::uint64_t>() > 0; });
        if (!ok) v.fail("/mle/shapes", "expected a list of hidden-width lists with at most two positive entries");
      }
      break;
    }
    case ExperimentKind::Thm9Ngram: {
      const auto* corpus = v.require("/ngram/corpus");
      if (corpus && !corpus->is_null() && !corpus->is_string())
        v.fail("/ngram/corpus", "expected a file path or null for the bundled corpus");
      v.unsigned_integer("/ngram/n_max");
      v.unsigned_integer("/ngram/samples");
      break;
    }
    case ExperimentKind::Thm10Rstar:
      v.one_of("/rstar/distance", {"squared_error", "kullback_leibler"});
      break;
    default:
      break;
  }
  return v.take();
}

ExperimentConfig parse_config(const json& user) {
  const json merged = with_defaults(user);
  auto violations = validate(merged);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  ExperimentConfig cfg{*experiment_from_string(merged.at("experiment").get<std::string>()),
                       merged.at("seed").get<std::uint64_t>(),
                       merged.value("output_dir", std::string("veritas-out/") + merged.at("experiment").get<std::string>()),
                       merged};
  return cfg;
}

RunReport run(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  Output out(config.output_dir);

  Outcome outcome;
  switch (config.experiment) {
    case ExperimentKind::Thm3Calibration: outcome = run_thm3(config, out); break;
    case ExperimentKind::Thm45BrokenClock: outcome = run_thm45(config, out); break;
    case ExperimentKind::Thm6Regime: outcome = run_thm6(config, out); break;
    case ExperimentKind::Thm7Equivalence: outcome = run_thm7(config, out); break;
    case ExperimentKind::Thm8Mle: outcome = run_thm8(config, out); break;
    case ExperimentKind::Thm9Ngram: outcome = run_thm9(config, out); break;
    case ExperimentKind::Thm10Rstar: outcome = run_thm10(config, out); break;
  }

  RunReport result;
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.files = out.files();
  result.summary = std::move(outcome.summary);

  json report{{"schema", kReportSchema},
              {"experiment", to_string(config.experiment)},
              {"seed", config.seed},
              {"config", config.params},
              {"verdicts", outcome.verdicts},
              {"statistics", outcome.statistics},
              {"performance_trace", outcome.performance_trace},
              {"files", result.files},
              {"wall_time_seconds", result.wall_time_seconds}};
  for (auto& [k, v] : outcome.extra.items()) report[k] = v;
  result.report = report;
  out.file("report.json", [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  return result;
}

// ---------------------------------------------------------------------------

GainFunction EquivalenceInstance::gain() const {
  const auto c = coefficients;
  return [c](double x, double w) { return c[0] * x * w + c[1] * x * x + c[2] * w + c[3] * std::sin(c[4] * x * w); };
}

EquivalenceInstance random_equivalence_instance(RngState state) {
  Rng rng(state);
  const std::size_t n = 2 + rng.below(29);
  std::vector<double> support(n), mu(n), nu(n);
  // Grid inside [-2, 2] keeps gains O(10), so float rounding stays near 1e-15.
  const double origin = 2.0 * rng.uniform() - 2.0;
  const double spacing = (0.01 + rng.uniform()) * 2.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    support[i] = origin + spacing * static_cast<double>(i);
    mu[i] = rng.uniform() < 0.15 ? 0.0 : rng.uniform();
    nu[i] = (mu[i] == 0.0 || rng.uniform() < 0.15) ? 0.0 : rng.uniform();
  }
  if (std::all_of(nu.begin(), nu.end(), [](double m) { return m == 0.0; })) {
    mu[0] = std::max(mu[0], 0.5);
    nu[0] = 1.0;
  }
  std::vector<double> coefficients(5);
  for (double& c : coefficients) c = 4.0 * rng.uniform() - 2.0;
  std::vector<double> feasible;
  for (double x : support)
    if (rng.uniform() < 0.5) feasible.push_back(x);
  if (feasible.empty()) feasible.push_back(support[rng.below(n)]);
  return {std::move(coefficients), DiscreteMeasure(support, mu), DiscreteMeasure(support, nu), std::move(feasible)};
}

}  // namespace veritas
