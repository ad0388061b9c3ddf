#include "veritas/formula.hpp"

#include <algorithm>
#include <cctype>

#include "veritas/error.hpp"

namespace veritas::logic {

Formula Formula::atom(std::string name) { return {Kind::Atom, std::move(name), {}}; }
Formula Formula::negation(Formula f) { return {Kind::Not, {}, {std::move(f)}}; }
Formula Formula::conjunction(Formula a, Formula b) { return {Kind::And, {}, {std::move(a), std::move(b)}}; }
Formula Formula::disjunction(Formula a, Formula b) { return {Kind::Or, {}, {std::move(a), std::move(b)}}; }
Formula Formula::implication(Formula a, Formula b) {
  return {Kind::Implies, {}, {std::move(a), std::move(b)}};
}
Formula Formula::knows(std::string agent, Formula f) { return {Kind::Knows, std::move(agent), {std::move(f)}}; }

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& op : operands) d = std::max(d, op.depth());
  return operands.empty() ? 0 : d + 1;
}

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = implies();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  Formula implies() {
    Formula lhs = disjunction();
    if (accept("->")) return Formula::implication(std::move(lhs), implies());
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (accept("|")) lhs = Formula::disjunction(std::move(lhs), conjunction());
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (accept("&")) lhs = Formula::conjunction(std::move(lhs), unary());
    return lhs;
  }

  Formula unary() {
    skip_space();
    if (accept("!")) return Formula::negation(unary());
    if (at_knows()) {
      pos_ += 2;  // "K{"
      skip_space();
      const std::size_t start = pos_;
      std::string agent = word();
      if (agent.empty()) throw SyntaxError("expected agent name", start);
      if (!accept("}")) throw SyntaxError("expected '}'", pos_);
      return Formula::knows(std::move(agent), unary());
    }
    if (accept("(")) {
      Formula inner = implies();
      if (!accept(")")) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    const std::size_t start = pos_;
    if (start < text_.size() && std::isdigit(static_cast<unsigned char>(text_[start])))
      throw SyntaxError("atom must not start with a digit", start);
    std::string name = word();
    if (name.empty()) {
      if (start == text_.size()) throw SyntaxError("unexpected end of input", start);
      throw SyntaxError("unexpected '" + std::string(1, text_[start]) + "'", start);
    }
    return Formula::atom(std::move(name));
  }

  bool at_knows() {
    skip_space();
    return text_.substr(pos_, 2) == "K{";
  }

  std::string word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength; larger binds tighter.
int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

std::string wrap_if(bool cond, std::string s) { return cond ? "(" + s + ")" : s; }

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom: return f.name;
    case K::Not: return "!" + wrap_if(precedence(f.operands[0].kind) < 4, to_string(f.operands[0]));
    case K::Knows:
      return "K{" + f.name + "} " + wrap_if(precedence(f.operands[0].kind) < 4, to_string(f.operands[0]));
    case K::And:
    case K::Or: {
      const char* op = f.kind == K::And ? " & " : " | ";
      const int p = precedence(f.kind);
      // left-associative: a right operand of equal precedence needs parentheses
      return wrap_if(precedence(f.operands[0].kind) < p, to_string(f.operands[0])) + op +
             wrap_if(precedence(f.operands[1].kind) <= p, to_string(f.operands[1]));
    }
    case K::Implies:
      return wrap_if(precedence(f.operands[0].kind) <= 1, to_string(f.operands[0])) + " -> " +
             wrap_if(precedence(f.operands[1].kind) < 1, to_string(f.operands[1]));
  }
  return {};
}

}  // namespace veritas::logic
