#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "veritas/rng.hpp"

namespace veritas {

// Which schedule branch produced a step.
enum class Regime : std::uint8_t { Iid, Alpha, Beta, Pre, Post };

std::string_view to_string(Regime r) noexcept;

struct Step {
  std::uint64_t t = 0;
  double truth = 0.0;  // P(A_{t+1} | history up to t)
  std::uint8_t outcome = 0;
  Regime regime = Regime::Iid;

  friend bool operator==(const Step&, const Step&) = default;
};

using Path = std::vector<Step>;

struct IidProcess {
  double alpha = 0.5;
};

enum class Schedule : std::uint8_t {
  // even t -> alpha, odd t -> beta
  Alternating,
};

struct RegimeSwitchProcess {
  double alpha = 0.2;
  double beta = 0.8;
  Schedule schedule = Schedule::Alternating;
};

// truth = pre for t < switch_step, post afterwards.
struct BrokenClockProcess {
  double pre = 0.5;
  std::uint64_t switch_step = 100;
  double post = 0.9;
};

using ProcessKind = std::variant<IidProcess, RegimeSwitchProcess, BrokenClockProcess>;

struct ProcessSpec {
  ProcessKind kind;
  std::uint64_t horizon = 1;
};

// Throws DomainError on probabilities outside [0,1], horizon 0, or a
// broken-clock switch step not strictly inside the horizon.
void validate(const ProcessSpec& spec);

// Throws DomainError when t >= horizon.
double truth_at(const ProcessSpec& spec, std::uint64_t t);
Regime regime_at(const ProcessSpec& spec, std::uint64_t t);

Path simulate(const ProcessSpec& spec, RngState seed);

// ORACLE: reads the hidden truths. mask[t] = 1 iff truth == target exactly.
std::vector<std::uint8_t> oracle_selection(const Path& path, double target);

std::vector<std::uint8_t> outcomes_of(const Path& path);

// CSV with header `t,truth,outcome,regime`.
void write_path_csv(std::ostream& os, const Path& path);

}  // namespace veritas
