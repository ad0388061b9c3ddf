#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace veritas {

// Argument outside the documented domain of an operation (probability not in
// [0,1], step index past the horizon, mismatched lengths, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class EmptyPopulation : public std::runtime_error {
 public:
  EmptyPopulation() : std::runtime_error("empirical distribution of an empty population") {}
};

class EmptyTestSet : public std::runtime_error {
 public:
  EmptyTestSet() : std::runtime_error("selection criterion selected no records (p_k is 0/0)") {}
};

class AbsoluteContinuityViolation : public std::runtime_error {
 public:
  explicit AbsoluteContinuityViolation(std::size_t index)
      : std::runtime_error("absolute continuity violated at support index " +
                           std::to_string(index)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class NonFiniteLikelihood : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCorpus : public std::runtime_error {
 public:
  EmptyCorpus() : std::runtime_error("corpus contains no tokens") {}
};

class EncodingError : public std::runtime_error {
 public:
  explicit EncodingError(std::size_t offset)
      : std::runtime_error("invalid UTF-8 at byte offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ZeroContext : public std::runtime_error {
 public:
  explicit ZeroContext(const std::string& context)
      : std::runtime_error("context has zero count: \"" + context + "\"") {}
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownAgent : public std::runtime_error {
 public:
  explicit UnknownAgent(const std::string& agent)
      : std::runtime_error("unknown agent '" + agent + "'") {}
};

class UnknownPoint : public std::runtime_error {
 public:
  explicit UnknownPoint(const std::string& point)
      : std::runtime_error("unknown point '" + point + "'") {}
};

}  // namespace veritas
