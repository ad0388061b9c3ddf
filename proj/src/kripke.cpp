#include "veritas/kripke.hpp"

#include <algorithm>

#include "veritas/error.hpp"

namespace veritas::logic {

KripkeModel::KripkeModel(Definition def) : points_(std::move(def.points)), s5_(def.s5) {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (!index_.emplace(points_[i], i).second) throw DomainError("duplicate point '" + points_[i] + "'");

  auto lookup = [&](const PointId& p) {
    const auto it = index_.find(p);
    if (it == index_.end()) throw DomainError("undeclared point '" + p + "'");
    return it->second;
  };

  valuation_.resize(points_.size());
  for (auto& [p, atoms] : def.valuation) valuation_[lookup(p)] = std::move(atoms);

  const std::size_t n = points_.size();
  for (const auto& [agent, pairs] : def.relations) {
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : pairs) rel[lookup(a)][lookup(b)] = true;

    if (s5_) {
      for (std::size_t a = 0; a < n; ++a) {
        if (!rel[a][a]) throw DomainError("agent " + agent + ": relation not reflexive at " + points_[a]);
        for (std::size_t b = 0; b < n; ++b) {
          if (rel[a][b] && !rel[b][a]) throw DomainError("agent " + agent + ": relation not symmetric");
          for (std::size_t c = 0; c < n; ++c)
            if (rel[a][b] && rel[b][c] && !rel[a][c])
              throw DomainError("agent " + agent + ": relation not transitive");
        }
      }
    }

    auto& succ = successors_[agent];
    succ.resize(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (rel[a][b]) succ[a].push_back(b);
  }
}

KripkeModel KripkeModel::from_json(const nlohmann::json& j) {
  Definition def;
  def.points = j.at("points").get<std::vector<PointId>>();
  if (j.contains("atoms"))
    for (const auto& [p, atoms] : j.at("atoms").items())
      def.valuation[p] = atoms.get<std::set<std::string>>();
  if (j.contains("relations"))
    for (const auto& [agent, pairs] : j.at("relations").items())
      for (const auto& pair : pairs) {
        if (!pair.is_array() || pair.size() != 2)
          throw DomainError("relation entries must be [from, to] pairs");
        def.relations[agent].emplace_back(pair[0].get<PointId>(), pair[1].get<PointId>());
      }
  def.s5 = j.value("s5", true);
  return KripkeModel(std::move(def));
}

std::vector<AgentId> KripkeModel::agents() const {
  std::vector<AgentId> out;
  for (const auto& [a, _] : successors_) out.push_back(a);
  return out;
}

std::size_t KripkeModel::index_of(const PointId& p) const {
  const auto it = index_.find(p);
  if (it == index_.end()) throw UnknownPoint(p);
  return it->second;
}

const std::vector<std::size_t>& KripkeModel::accessible(const AgentId& agent, std::size_t from) const {
  const auto it = successors_.find(agent);
  if (it == successors_.end()) throw UnknownAgent(agent);
  if (from >= points_.size()) throw UnknownPoint("#" + std::to_string(from));
  return it->second[from];
}

bool KripkeModel::holds_atom(std::size_t point, const std::string& atom) const {
  return valuation_.at(point).count(atom) > 0;
}

namespace {

void require_agents(const KripkeModel& model, const Formula& f) {
  if (f.kind == Formula::Kind::Knows) (void)model.accessible(f.name, 0);
  for (const auto& op : f.operands) require_agents(model, op);
}

bool satisfies(const KripkeModel& model, std::size_t point, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom: return model.holds_atom(point, f.name);
    case K::Not: return !satisfies(model, point, f.operands[0]);
    case K::And: return satisfies(model, point, f.operands[0]) && satisfies(model, point, f.operands[1]);
    case K::Or: return satisfies(model, point, f.operands[0]) || satisfies(model, point, f.operands[1]);
    case K::Implies:
      return !satisfies(model, point, f.operands[0]) || satisfies(model, point, f.operands[1]);
    case K::Knows: {
      const auto& succ = model.accessible(f.name, point);
      return std::all_of(succ.begin(), succ.end(),
                         [&](std::size_t q) { return satisfies(model, q, f.operands[0]); });
    }
  }
  return false;
}

}  // namespace

bool evaluate(const KripkeModel& model, std::size_t point, const Formula& f) {
  if (point >= model.size()) throw UnknownPoint("#" + std::to_string(point));
  require_agents(model, f);
  return satisfies(model, point, f);
}

bool evaluate(const KripkeModel& model, const PointId& point, const Formula& f) {
  return evaluate(model, model.index_of(point), f);
}

bool duality_check(const KripkeModel& model, const PointId& point, const Formula& f) {
  const std::size_t at = model.index_of(point);
  for (const auto& agent : model.agents()) {
    const bool possible = evaluate(model, at, Formula::negation(Formula::knows(agent, Formula::negation(f))));
    const auto& succ = model.accessible(agent, at);
    const bool witness =
        std::any_of(succ.begin(), succ.end(), [&](std::size_t q) { return evaluate(model, q, f); });
    if (possible != witness) return false;
  }
  return true;
}

}  // namespace veritas::logic
