#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "generators.hpp"
#include "veritas/error.hpp"

using namespace veritas;
using namespace veritas::logic;

namespace {

KripkeModel two_points() {
  KripkeModel::Definition def;
  def.points = {"a", "b"};
  def.valuation["a"] = {"p"};
  def.relations["1"] = {{"a", "a"}, {"b", "b"}, {"a", "b"}, {"b", "a"}};
  def.relations["2"] = {{"a", "a"}, {"b", "b"}};
  return KripkeModel{def};
}

}  // namespace

TEST_CASE("parse examples") {
  CHECK(parse("K{1} p") == Formula::knows("1", Formula::atom("p")));
  CHECK(parse("!K{1} !p") == Formula::negation(Formula::knows("1", Formula::negation(Formula::atom("p")))));
  CHECK(parse("p & q -> K{2} p") ==
        Formula::implication(Formula::conjunction(Formula::atom("p"), Formula::atom("q")),
                             Formula::knows("2", Formula::atom("p"))));
  CHECK(parse("p -> q -> r") ==
        Formula::implication(Formula::atom("p"), Formula::implication(Formula::atom("q"), Formula::atom("r"))));
  CHECK(parse("p | q | r") ==
        Formula::disjunction(Formula::disjunction(Formula::atom("p"), Formula::atom("q")), Formula::atom("r")));
  CHECK(parse("p | q & r") ==
        Formula::disjunction(Formula::atom("p"), Formula::conjunction(Formula::atom("q"), Formula::atom("r"))));
  CHECK(parse("K{1} p & q") ==
        Formula::conjunction(Formula::knows("1", Formula::atom("p")), Formula::atom("q")));
  CHECK(parse("(p)") == Formula::atom("p"));
  CHECK(parse("Know") == Formula::atom("Know"));
  CHECK(parse("K{alice} x_1").name == "alice");
  CHECK(parse("K{1} K{2} p").depth() == 2);
  CHECK(parse("p").depth() == 0);
}

TEST_CASE("syntax errors carry positions") {
  const std::vector<std::pair<std::string, std::size_t>> cases{
      {"", 0}, {"p &", 3}, {"(p", 2}, {"p q", 2}, {"K{} p", 2}, {"K{1 p", 4}, {"1p", 0}, {"p - q", 2}, {"p @", 2},
  };
  for (const auto& [text, pos] : cases) {
    CAPTURE(text);
    try {
      parse(text);
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == pos);
    }
  }
}

TEST_CASE("evaluate examples") {
  KripkeModel::Definition single;
  single.points = {"w"};
  single.valuation["w"] = {"p"};
  single.relations["1"] = {{"w", "w"}};
  const KripkeModel one(single);
  CHECK(evaluate(one, "w", parse("K{1} p")));

  const auto m = two_points();
  CHECK(!evaluate(m, "a", parse("K{1} p")));
  CHECK(!evaluate(m, "b", parse("K{1} p")));
  CHECK(evaluate(m, "a", parse("K{2} p")));
  CHECK(evaluate(m, "a", parse("K{2} p & !K{1} p")));
  CHECK(evaluate(m, "b", parse("K{1} (p | !p)")));
  CHECK(evaluate(m, "a", parse("!p -> q")));

  KripkeModel::Definition empty;
  empty.points = {"w"};
  empty.relations["1"] = {};
  empty.s5 = false;
  CHECK(evaluate(KripkeModel(empty), "w", parse("K{1} q")));

  CHECK_THROWS_AS(evaluate(m, "a", parse("K{3} p")), UnknownAgent);
  CHECK_THROWS_AS(evaluate(m, "zz", parse("p")), UnknownPoint);
  // The agent check does not depend on which branch evaluation would reach.
  CHECK_THROWS_AS(evaluate(m, "a", parse("p | K{3} p")), UnknownAgent);
}

TEST_CASE("model construction checks") {
  KripkeModel::Definition def;
  def.points = {"a", "b"};
  def.relations["1"] = {{"a", "a"}, {"b", "b"}, {"a", "b"}};
  CHECK_THROWS_AS(KripkeModel{def}, DomainError);  // not symmetric
  def.relations["1"] = {{"a", "b"}, {"b", "a"}};
  CHECK_THROWS_AS(KripkeModel{def}, DomainError);  // not reflexive
  def.s5 = false;
  CHECK_NOTHROW(KripkeModel{def});
  def.relations["1"] = {{"a", "c"}};
  CHECK_THROWS_AS(KripkeModel{def}, DomainError);
  def.points = {"a", "a"};
  def.relations.clear();
  CHECK_THROWS_AS(KripkeModel{def}, DomainError);

  KripkeModel::Definition tri;
  tri.points = {"a", "b", "c"};
  tri.relations["1"] = {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}};
  CHECK_THROWS_AS(KripkeModel{tri}, DomainError);  // not transitive
}

TEST_CASE("from_json") {
  const auto j = nlohmann::json::parse(R"({"points": ["x", "y"], "atoms": {"x": ["p"]},
      "relations": {"1": [["x","x"],["y","y"],["x","y"],["y","x"]]}, "s5": true})");
  const auto m = KripkeModel::from_json(j);
  CHECK(m.size() == 2);
  CHECK(m.agents() == std::vector<AgentId>{"1"});
  CHECK(m.holds_atom(m.index_of("x"), "p"));
  CHECK(!m.holds_atom(m.index_of("y"), "p"));
  CHECK_THROWS(KripkeModel::from_json(nlohmann::json::parse(R"({"atoms": {}})")));
}

TEST_CASE("property: factivity and positive introspection on S5 models") {
  Rng rng = Rng::from_seed(123);
  for (int i = 0; i < 1000; ++i) {
    const auto m = gen::random_s5_model(rng);
    const auto f = gen::random_formula(rng, 4);
    for (const auto& agent : gen::kAgents) {
      const auto kf = Formula::knows(agent, f);
      const auto kkf = Formula::knows(agent, kf);
      for (std::size_t w = 0; w < m.size(); ++w) {
        CHECK(evaluate(m, w, Formula::implication(kf, f)));
        CHECK(evaluate(m, w, Formula::implication(kf, kkf)));
      }
    }
  }
}

TEST_CASE("property: duality on 1000 random models") {
  Rng rng = Rng::from_seed(321);
  for (int i = 0; i < 1000; ++i) {
    const auto m = i % 2 == 0 ? gen::random_s5_model(rng) : gen::random_model(rng);
    const auto f = gen::random_formula(rng, 4);
    for (const auto& p : m.points()) CHECK(duality_check(m, p, f));
  }
}

TEST_CASE("property: printing then parsing returns the same tree") {
  Rng rng = Rng::from_seed(99);
  for (int i = 0; i < 1000; ++i) {
    const auto f = gen::random_formula(rng, 5);
    const auto text = to_string(f);
    CAPTURE(text);
    CHECK(parse(text) == f);
  }
}
