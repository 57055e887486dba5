#pragma once

// Kripke models with per-agent, per-state depths.
//
// A model stores each agent's relation either as a partition (equivalence
// mode) or as explicit successor sets (reflexive mode, used by ADPAL).
// Reflexive loops are implicit in both. Models are immutable after
// construction; every update builds a new one.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dbel/formula.hpp"

namespace dbel {

using StateIndex = std::size_t;
inline constexpr StateIndex no_state = static_cast<StateIndex>(-1);

enum class RelationMode { equivalence, reflexive };

inline std::string_view to_string(RelationMode m) {
  return m == RelationMode::equivalence ? "equivalence" : "reflexive";
}

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Model {
 public:
  /// Equivalence-mode model. class_labels[a][s] is any label; states with the
  /// same label are a-equivalent.
  static Model equivalence(std::vector<std::string> states, std::vector<std::vector<std::string>> valuation,
                           const std::vector<std::vector<std::size_t>>& class_labels,
                           std::vector<std::vector<Depth>> depth) {
    Model m(std::move(states), std::move(valuation), std::move(depth), class_labels.size());
    m.mode_ = RelationMode::equivalence;
    for (const auto& labels : class_labels) {
      if (labels.size() != m.num_states()) throw ModelError("class label count differs from state count");
      // Renumber as a restricted growth string so equal partitions compare equal.
      std::unordered_map<std::size_t, std::size_t> renumber;
      std::vector<std::size_t> cls(labels.size());
      std::vector<std::vector<StateIndex>> members;
      for (StateIndex s = 0; s < labels.size(); ++s) {
        auto [it, fresh] = renumber.emplace(labels[s], members.size());
        if (fresh) members.emplace_back();
        cls[s] = it->second;
        members[it->second].push_back(s);
      }
      m.class_of_.push_back(std::move(cls));
      m.classes_.push_back(std::move(members));
    }
    return m;
  }

  /// Reflexive-mode model from explicit successor lists; self loops are dropped.
  static Model reflexive(std::vector<std::string> states, std::vector<std::vector<std::string>> valuation,
                         std::vector<std::vector<std::vector<StateIndex>>> successors,
                         std::vector<std::vector<Depth>> depth) {
    Model m(std::move(states), std::move(valuation), std::move(depth), successors.size());
    m.mode_ = RelationMode::reflexive;
    for (auto& per_agent : successors) {
      if (per_agent.size() != m.num_states()) throw ModelError("successor list count differs from state count");
      for (StateIndex s = 0; s < per_agent.size(); ++s) {
        auto& succ = per_agent[s];
        for (StateIndex t : succ)
          if (t >= m.num_states()) throw ModelError("successor index out of range");
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        succ.erase(std::remove(succ.begin(), succ.end(), s), succ.end());
      }
    }
    m.succ_ = std::move(successors);
    return m;
  }

  std::size_t num_states() const { return names_.size(); }
  std::size_t num_agents() const { return num_agents_; }
  RelationMode mode() const { return mode_; }

  const std::string& state_name(StateIndex s) const { return names_.at(s); }
  const std::vector<std::string>& state_names() const { return names_; }

  std::optional<StateIndex> find_state(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  StateIndex state_index(std::string_view name) const {
    auto s = find_state(name);
    if (!s) throw ModelError("unknown state '" + std::string(name) + "'");
    return *s;
  }

  /// Sorted atom names true at s (the reserved top atom is never stored).
  const std::vector<std::string>& atoms_at(StateIndex s) const { return val_.at(s); }

  bool holds_atom(StateIndex s, std::string_view name) const {
    if (name == top_atom) return true;
    const auto& v = val_[s];
    return std::binary_search(v.begin(), v.end(), name, std::less<>{});
  }

  Depth depth(AgentId a, StateIndex s) const { return depth_[a][s]; }
  const std::vector<std::vector<Depth>>& depths() const { return depth_; }

  /// Class id of s for agent a (equivalence mode only).
  std::size_t class_of(AgentId a, StateIndex s) const { return class_of_.at(a)[s]; }
  /// Members of each class of agent a, in state order (equivalence mode only).
  const std::vector<std::vector<StateIndex>>& classes(AgentId a) const { return classes_.at(a); }

  /// Explicit successors of s for agent a, excluding s itself (reflexive mode only).
  const std::vector<StateIndex>& successors(AgentId a, StateIndex s) const { return succ_.at(a)[s]; }

  bool related(AgentId a, StateIndex s, StateIndex t) const {
    if (s == t) return true;
    if (mode_ == RelationMode::equivalence) return class_of_[a][s] == class_of_[a][t];
    const auto& v = succ_[a][s];
    return std::binary_search(v.begin(), v.end(), t);
  }

  /// States t with s ~a t, including s, in increasing order.
  std::vector<StateIndex> neighbours(AgentId a, StateIndex s) const {
    if (mode_ == RelationMode::equivalence) return classes_[a][class_of_[a][s]];
    std::vector<StateIndex> out = succ_[a][s];
    out.insert(std::lower_bound(out.begin(), out.end(), s), s);
    return out;
  }

  /// The same relation as explicit successor sets.
  Model as_reflexive() const {
    if (mode_ == RelationMode::reflexive) return *this;
    std::vector<std::vector<std::vector<StateIndex>>> succ(num_agents_);
    for (AgentId a = 0; a < num_agents_; ++a) {
      succ[a].resize(num_states());
      for (StateIndex s = 0; s < num_states(); ++s) succ[a][s] = classes_[a][class_of_[a][s]];
    }
    return reflexive(names_, val_, std::move(succ), depth_);
  }

  /// Sub-model on the states with keep[s]; relations and depths restricted.
  /// image[s] receives the new index of s or no_state.
  Model restrict_to(const std::vector<bool>& keep, std::vector<StateIndex>* image = nullptr) const {
    std::vector<StateIndex> map(num_states(), no_state);
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> val;
    for (StateIndex s = 0; s < num_states(); ++s) {
      if (!keep.at(s)) continue;
      map[s] = names.size();
      names.push_back(names_[s]);
      val.push_back(val_[s]);
    }
    std::vector<std::vector<Depth>> depth(num_agents_);
    for (AgentId a = 0; a < num_agents_; ++a)
      for (StateIndex s = 0; s < num_states(); ++s)
        if (keep[s]) depth[a].push_back(depth_[a][s]);
    if (image) *image = map;
    if (mode_ == RelationMode::equivalence) {
      std::vector<std::vector<std::size_t>> labels(num_agents_);
      for (AgentId a = 0; a < num_agents_; ++a)
        for (StateIndex s = 0; s < num_states(); ++s)
          if (keep[s]) labels[a].push_back(class_of_[a][s]);
      return equivalence(std::move(names), std::move(val), labels, std::move(depth));
    }
    std::vector<std::vector<std::vector<StateIndex>>> succ(num_agents_);
    for (AgentId a = 0; a < num_agents_; ++a) {
      succ[a].resize(names.size());
      for (StateIndex s = 0; s < num_states(); ++s) {
        if (!keep[s]) continue;
        for (StateIndex t : succ_[a][s])
          if (keep[t]) succ[a][map[s]].push_back(map[t]);
      }
    }
    return reflexive(std::move(names), std::move(val), std::move(succ), std::move(depth));
  }

  friend bool operator==(const Model& x, const Model& y) {
    return x.mode_ == y.mode_ && x.num_agents_ == y.num_agents_ && x.names_ == y.names_ && x.val_ == y.val_ &&
           x.depth_ == y.depth_ && x.class_of_ == y.class_of_ && x.succ_ == y.succ_;
  }

 private:
  Model(std::vector<std::string> states, std::vector<std::vector<std::string>> valuation,
        std::vector<std::vector<Depth>> depth, std::size_t agents)
      : num_agents_(agents), names_(std::move(states)), val_(std::move(valuation)), depth_(std::move(depth)) {
    if (val_.size() != names_.size()) throw ModelError("valuation count differs from state count");
    if (depth_.size() != num_agents_) throw ModelError("depth table must have one row per agent");
    for (const auto& row : depth_)
      if (row.size() != names_.size()) throw ModelError("depth row length differs from state count");
    for (StateIndex s = 0; s < names_.size(); ++s) {
      if (!index_.emplace(names_[s], s).second) throw ModelError("duplicate state name '" + names_[s] + "'");
      auto& v = val_[s];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      if (std::binary_search(v.begin(), v.end(), std::string(top_atom)))
        throw ModelError("'true' is reserved and cannot be assigned in a valuation");
    }
  }

  RelationMode mode_ = RelationMode::equivalence;
  std::size_t num_agents_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateIndex> index_;
  std::vector<std::vector<std::string>> val_;
  std::vector<std::vector<Depth>> depth_;
  std::vector<std::vector<std::size_t>> class_of_;                  // equivalence mode
  std::vector<std::vector<std::vector<StateIndex>>> classes_;       // equivalence mode
  std::vector<std::vector<std::vector<StateIndex>>> succ_;          // reflexive mode
};

/// A model together with a designated state.
struct PointedModel {
  Model model;
  StateIndex state = 0;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  bool ok = true;
  std::string property;  // "symmetry" or "transitivity"
  AgentId agent = 0;
  StateIndex from = no_state;
  StateIndex to = no_state;
  StateIndex via = no_state;  // middle state of a transitivity witness

  explicit operator bool() const { return ok; }
};

/// Checks the closure properties `mode` demands of every relation and
/// reports the first violation with a witness pair.
inline ValidationReport validate(const Model& m, RelationMode mode) {
  ValidationReport r;
  // Partitions are equivalences, and reflexivity is implicit everywhere.
  if (mode == RelationMode::reflexive || m.mode() == RelationMode::equivalence) return r;
  for (AgentId a = 0; a < m.num_agents(); ++a) {
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      for (StateIndex t : m.successors(a, s)) {
        if (!m.related(a, t, s)) return {false, "symmetry", a, s, t, no_state};
      }
    }
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      for (StateIndex t : m.successors(a, s)) {
        for (StateIndex u : m.successors(a, t)) {
          if (!m.related(a, s, u)) return {false, "transitivity", a, s, u, t};
        }
      }
    }
  }
  return r;
}

inline std::string describe(const ValidationReport& r, const Model& m) {
  if (r.ok) return "ok";
  std::string out = r.property + " violated for agent " + std::to_string(r.agent) + ": (" +
                    m.state_name(r.from) + ", " + m.state_name(r.to) + ")";
  if (r.via != no_state) out += " via " + m.state_name(r.via);
  return out;
}

/// Each agent's depth is constant along its own relation.
inline bool is_unambiguous(const Model& m) {
  for (AgentId a = 0; a < m.num_agents(); ++a) {
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      for (StateIndex t : m.neighbours(a, s))
        if (m.depth(a, s) != m.depth(a, t)) return false;
    }
  }
  return true;
}

/// The a-class of s (equivalence mode) or the states reachable from s (reflexive mode).
inline std::vector<StateIndex> connected_component(const Model& m, StateIndex s, AgentId a) {
  if (s >= m.num_states()) throw ModelError("unknown state index " + std::to_string(s));
  if (a >= m.num_agents()) throw ModelError("unknown agent " + std::to_string(a));
  if (m.mode() == RelationMode::equivalence) return m.neighbours(a, s);
  std::vector<bool> seen(m.num_states(), false);
  std::queue<StateIndex> todo;
  todo.push(s);
  seen[s] = true;
  while (!todo.empty()) {
    StateIndex cur = todo.front();
    todo.pop();
    for (StateIndex t : m.successors(a, cur)) {
      if (!seen[t]) {
        seen[t] = true;
        todo.push(t);
      }
    }
  }
  std::vector<StateIndex> out;
  for (StateIndex t = 0; t < m.num_states(); ++t)
    if (seen[t]) out.push_back(t);
  return out;
}

/// ||M||: states plus relation pairs, reflexive pairs included, so a class
/// of k states contributes k*k pairs.
inline std::size_t norm(const Model& m) {
  std::size_t n = m.num_states();
  for (AgentId a = 0; a < m.num_agents(); ++a) {
    if (m.mode() == RelationMode::equivalence) {
      for (const auto& cls : m.classes(a)) n += cls.size() * cls.size();
    } else {
      for (StateIndex s = 0; s < m.num_states(); ++s) n += m.successors(a, s).size() + 1;
    }
  }
  return n;
}

inline bool has_negative_depth(const Model& m) {
  for (const auto& row : m.depths())
    for (Depth d : row)
      if (d < 0) return true;
  return false;
}

}  // namespace dbel
