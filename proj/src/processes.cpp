#include "veritas/processes.hpp"

#include <ostream>

#include "veritas/csv.hpp"
#include "veritas/detail/overloaded.hpp"
#include "veritas/error.hpp"

namespace veritas {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

using detail::overloaded;

struct Assignment {
  double truth;
  Regime regime;
};

Assignment assign(const ProcessKind& kind, std::uint64_t t) {
  return std::visit(
      overloaded{
          [](const IidProcess& p) { return Assignment{p.alpha, Regime::Iid}; },
          [t](const RegimeSwitchProcess& p) {
            return t % 2 == 0 ? Assignment{p.alpha, Regime::Alpha}
                              : Assignment{p.beta, Regime::Beta};
          },
          [t](const BrokenClockProcess& p) {
            return t < p.switch_step ? Assignment{p.pre, Regime::Pre}
                                     : Assignment{p.post, Regime::Post};
          },
      },
      kind);
}

}  // namespace

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Iid: return "iid";
    case Regime::Alpha: return "alpha";
    case Regime::Beta: return "beta";
    case Regime::Pre: return "pre";
    case Regime::Post: return "post";
  }
  return "?";
}

void validate(const ProcessSpec& spec) {
  if (spec.horizon < 1) throw DomainError("process horizon must be >= 1");
  std::visit(overloaded{
                 [](const IidProcess& p) {
                   if (!is_probability(p.alpha)) throw DomainError("iid.alpha out of [0,1]");
                 },
                 [](const RegimeSwitchProcess& p) {
                   if (!is_probability(p.alpha) || !is_probability(p.beta))
                     throw DomainError("regime_switch alpha/beta out of [0,1]");
                 },
                 [&](const BrokenClockProcess& p) {
                   if (!is_probability(p.pre) || !is_probability(p.post))
                     throw DomainError("broken_clock pre/post out of [0,1]");
                   if (p.switch_step >= spec.horizon)
                     throw DomainError("broken_clock switch step must be < horizon");
                 },
             },
             spec.kind);
}

double truth_at(const ProcessSpec& spec, std::uint64_t t) {
  if (t >= spec.horizon) throw DomainError("truth_at: step beyond horizon");
  return assign(spec.kind, t).truth;
}

Regime regime_at(const ProcessSpec& spec, std::uint64_t t) {
  if (t >= spec.horizon) throw DomainError("regime_at: step beyond horizon");
  return assign(spec.kind, t).regime;
}

Path simulate(const ProcessSpec& spec, RngState seed) {
  validate(spec);
  Rng rng(seed);
  Path path;
  path.reserve(spec.horizon);
  for (std::uint64_t t = 0; t < spec.horizon; ++t) {
    const auto a = assign(spec.kind, t);
    path.push_back(Step{t, a.truth, static_cast<std::uint8_t>(rng.bernoulli(a.truth)), a.regime});
  }
  return path;
}

std::vector<std::uint8_t> oracle_selection(const Path& path, double target) {
  if (path.empty()) throw DomainError("oracle_selection: empty path");
  std::vector<std::uint8_t> mask;
  mask.reserve(path.size());
  for (const auto& s : path) mask.push_back(s.truth == target ? 1 : 0);
  return mask;
}

std::vector<std::uint8_t> outcomes_of(const Path& path) {
  std::vector<std::uint8_t> out;
  out.reserve(path.size());
  for (const auto& s : path) out.push_back(s.outcome);
  return out;
}

void write_path_csv(std::ostream& os, const Path& path) {
  os << "t,truth,outcome,regime\n";
  for (const auto& s : path)
    os << s.t << ',' << format_double(s.truth) << ',' << int(s.outcome) << ',' << to_string(s.regime)
       << '\n';
}

}  // namespace veritas
