#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "veritas/formula.hpp"

namespace veritas::logic {

using PointId = std::string;
using AgentId = std::string;

// Finite Kripke model: labelled points (run/time pairs flattened to labels),
// a valuation of atoms per point, and one accessibility relation per agent.
class KripkeModel {
 public:
  struct Definition {
    std::vector<PointId> points;
    std::map<PointId, std::set<std::string>> valuation;  // atoms true at each point
    std::map<AgentId, std::vector<std::pair<PointId, PointId>>> relations;
    // Require every relation to be an equivalence relation.
    bool s5 = true;
  };

  // Throws DomainError for duplicate points, references to undeclared points,
  // or (with s5) a relation that is not reflexive, symmetric and transitive.
  explicit KripkeModel(Definition def);

  // JSON: {"points": [...], "atoms": {"p": ["atom", ...]},
  //        "relations": {"agent": [["p", "q"], ...]}, "s5": true}
  static KripkeModel from_json(const nlohmann::json& j);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<PointId>& points() const noexcept { return points_; }
  std::vector<AgentId> agents() const;
  bool s5() const noexcept { return s5_; }

  // Throws UnknownPoint / UnknownAgent.
  std::size_t index_of(const PointId& p) const;
  const std::vector<std::size_t>& accessible(const AgentId& agent, std::size_t from) const;
  bool holds_atom(std::size_t point, const std::string& atom) const;

 private:
  std::vector<PointId> points_;
  std::map<PointId, std::size_t> index_;
  std::vector<std::set<std::string>> valuation_;
  std::map<AgentId, std::vector<std::vector<std::size_t>>> successors_;
  bool s5_;
};

// Recursive satisfaction; K{i} f holds iff f holds at every i-accessible point.
// Throws UnknownPoint / UnknownAgent.
bool evaluate(const KripkeModel& model, const PointId& point, const Formula& f);
bool evaluate(const KripkeModel& model, std::size_t point, const Formula& f);

// For every agent i of the model: !K{i} !f holds at point iff some
// i-accessible point satisfies f. A false result indicates an evaluator bug.
bool duality_check(const KripkeModel& model, const PointId& point, const Formula& f);

}  // namespace veritas::logic
