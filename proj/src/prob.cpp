#include "veritas/prob.hpp"

#include <algorithm>

#include "veritas/error.hpp"

namespace veritas {

Population::Population(std::vector<std::uint8_t> indicators, std::string attribute_label)
    : indicators_(std::move(indicators)), label_(std::move(attribute_label)) {
  if (std::any_of(indicators_.begin(), indicators_.end(), [](std::uint8_t v) { return v > 1; }))
    throw DomainError("population indicators must be 0 or 1");
}

CountRatio empirical_counts(std::span<const std::uint8_t> indicators) {
  if (indicators.empty()) throw EmptyPopulation();
  CountRatio r;
  r.total = indicators.size();
  for (auto v : indicators) r.ones += v;
  return r;
}

CountRatio empirical_counts(const Population& pop) { return empirical_counts(pop.indicators()); }

double empirical_distribution(const Population& pop) { return empirical_counts(pop).value(); }

}  // namespace veritas
