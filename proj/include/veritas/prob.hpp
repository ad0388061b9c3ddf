#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace veritas {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Exact ones/total. Division happens only in value().
struct CountRatio {
  std::uint64_t ones = 0;
  std::uint64_t total = 0;

  double value() const { return static_cast<double>(ones) / static_cast<double>(total); }
  Rational exact() const { return Rational(ones, total); }
};

// Indicators 1_{A} of one attribute over a finite population of events.
class Population {
 public:
  Population() = default;
  // Throws DomainError if any element is not 0 or 1.
  explicit Population(std::vector<std::uint8_t> indicators, std::string attribute_label = {});

  std::span<const std::uint8_t> indicators() const noexcept { return indicators_; }
  const std::string& attribute_label() const noexcept { return label_; }
  std::size_t size() const noexcept { return indicators_.size(); }
  bool empty() const noexcept { return indicators_.empty(); }

 private:
  std::vector<std::uint8_t> indicators_;
  std::string label_;
};

// Throws EmptyPopulation.
CountRatio empirical_counts(std::span<const std::uint8_t> indicators);
CountRatio empirical_counts(const Population& pop);
double empirical_distribution(const Population& pop);

}  // namespace veritas
