// veritas: run experiments, query n-gram probabilities, and evaluate
// epistemic formulas on Kripke models.
//
// Exit codes: 0 success, 2 validation failure, 3 runtime error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "veritas/error.hpp"
#include "veritas/experiment.hpp"
#include "veritas/formula.hpp"
#include "veritas/kripke.hpp"
#include "veritas/ngram.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

bool use_color() { return std::getenv("VERITAS_NO_COLOR") == nullptr; }

std::string paint(const std::string& text, const std::string& status) {
  if (!use_color() || status.empty()) return text;
  const char* code = status == "pass" ? "\033[32m" : "\033[31m";
  return code + text + "\033[0m";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<std::string> out) {
  nlohmann::json user;
  try {
    user = nlohmann::json::parse(read_file(config_path));
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "config: " << e.what() << '\n';
    return kExitValidation;
  }
  if (seed && user.is_object()) user["seed"] = *seed;
  if (out && user.is_object()) user["output_dir"] = *out;

  veritas::ExperimentConfig cfg;
  try {
    cfg = veritas::parse_config(user);
  } catch (const veritas::ConfigError& e) {
    for (const auto& v : e.violations()) std::cerr << "config" << v.path << ": " << v.message << '\n';
    return kExitValidation;
  }

  const auto report = veritas::run(cfg);
  std::cout << veritas::to_string(cfg.experiment) << "  seed=" << cfg.seed << "  out=" << cfg.output_dir.string()
            << '\n';
  std::cout << std::string(60, '-') << '\n';
  for (const auto& line : report.summary) {
    std::string label = line.label;
    label.resize(std::max<std::size_t>(label.size() + 2, 52), ' ');
    std::cout << "  " << label << paint(line.value, line.status) << '\n';
  }
  std::cout << std::string(60, '-') << '\n';
  std::cout << "files:";
  for (const auto& f : report.files) std::cout << ' ' << f;
  std::cout << "\nwall time: " << report.wall_time_seconds << " s\n";
  return 0;
}

int cmd_ngram(const std::string& corpus_path, const std::string& sentence, std::size_t n) {
  const auto [corpus, table] = veritas::ingest(read_file(corpus_path), {'\n', n});
  const auto tokens = veritas::tokenize(sentence);
  const auto report = veritas::direct_observation_check(table, corpus, tokens);
  const auto& p = report.chain_value;
  std::cout << "P(" << veritas::join_tokens(tokens) << ") = " << numerator(p) << '/' << denominator(p) << " = "
            << veritas::to_double(p) << '\n';
  std::cout << "C(S)/C(w_0) = " << numerator(report.brute_force_value) << '/'
            << denominator(report.brute_force_value) << (report.equal ? "  (equal)" : "  (MISMATCH)") << '\n';
  return report.equal ? 0 : kExitRuntime;
}

int cmd_logic(const std::string& model_path, const std::string& point, const std::string& formula_text) {
  const auto model = veritas::logic::KripkeModel::from_json(nlohmann::json::parse(read_file(model_path)));
  const auto formula = veritas::logic::parse(formula_text);
  const bool value = veritas::logic::evaluate(model, point, formula);
  std::cout << veritas::logic::to_string(formula) << " at " << point << ": "
            << paint(value ? "true" : "false", value ? "pass" : "fail") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"veritas: deterministic experiments on learning true probabilities"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out, "override the output directory");

  std::string corpus_path, sentence;
  std::size_t n = 3;
  auto* ngram = app.add_subcommand("ngram", "exact sentence probability from a corpus");
  ngram->add_option("--corpus", corpus_path, "UTF-8 corpus, one sentence per line")->required();
  ngram->add_option("--sentence", sentence, "whitespace-separated tokens")->required();
  ngram->add_option("--n", n, "maximum n-gram order")->check(CLI::PositiveNumber);

  std::string model_path, point, formula;
  auto* logic = app.add_subcommand("logic", "evaluate an epistemic formula at a point");
  logic->add_option("--model", model_path, "Kripke model (JSON)")->required();
  logic->add_option("--point", point, "point label")->required();
  logic->add_option("--formula", formula, "formula, e.g. \"K{1} p -> p\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return cmd_run(config_path, seed, out);
    if (*ngram) return cmd_ngram(corpus_path, sentence, n);
    if (*logic) return cmd_logic(model_path, point, formula);
  } catch (const veritas::SyntaxError& e) {
    std::cerr << "formula: " << e.what() << '\n';
    return kExitValidation;
  } catch (const veritas::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
