#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace veritas::logic {

// Grammar, loosest binding first:
//
//   implies := or ( "->" implies )?          right-associative
//   or      := and ( "|" and )*              left-associative
//   and     := unary ( "&" unary )*          left-associative
//   unary   := "!" unary | "K{" agent "}" unary | atom | "(" implies ")"
//
// atom and agent are [A-Za-z0-9_]+ (atoms must not start with a digit);
// "K" immediately followed by "{" is the knowledge operator.
struct Formula {
  enum class Kind { Atom, Not, And, Or, Implies, Knows };

  Kind kind = Kind::Atom;
  std::string name;  // atom name, or agent for Knows
  std::vector<Formula> operands;

  static Formula atom(std::string name);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula knows(std::string agent, Formula f);

  std::size_t depth() const;

  friend bool operator==(const Formula&, const Formula&) = default;
};

// Throws SyntaxError carrying the byte offset of the problem.
Formula parse(std::string_view text);

// Prints with the minimal parentheses that parse back to the same tree.
std::string to_string(const Formula& f);

}  // namespace veritas::logic
