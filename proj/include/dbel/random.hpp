#pragma once

// Seeded generators for formulas and models.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"

namespace dbel {

struct RandomSpec {
  std::size_t max_formula_size = 12;
  std::size_t agents = 2;
  Depth max_depth = 3;
  std::size_t max_states = 4;
  std::size_t atoms = 2;
  std::uint64_t seed = 1;
  bool unambiguous = false;
};

/// Which node kinds a random formula may contain.
struct FormulaShape {
  bool know = true;
  bool know_inf = true;
  bool announce = true;
  bool depth_atoms = true;
  bool atoms = true;
  /// Restrict modal operators to this agent when set.
  std::optional<AgentId> only_agent;

  static FormulaShape hybrid() { return {true, false, false, true, true, std::nullopt}; }        // H
  static FormulaShape hybrid_inf() { return {true, true, false, true, true, std::nullopt}; }     // HInf
  static FormulaShape with_announcements() { return {true, false, true, true, true, std::nullopt}; }  // L
  static FormulaShape full() { return {}; }                                                     // LInf
  static FormulaShape single_agent(AgentId a) { return {true, false, true, false, true, a}; }   // La
  static FormulaShape propositional() { return {false, false, false, false, true, std::nullopt}; }
};

inline std::string atom_name(std::size_t i) {
  static const char* names[] = {"p", "q", "r", "s", "t", "u"};
  return i < 6 ? names[i] : "p" + std::to_string(i);
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : eng_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  std::mt19937_64& engine() { return eng_; }

  /// A formula with at most `size` nodes (before desugaring of derived forms).
  Formula formula(const RandomSpec& spec, std::size_t size, const FormulaShape& shape = {}) {
    if (size <= 1) return leaf(spec, shape);
    // 40% connective, 25% modal, 20% atom, 15% depth atom
    int roll = static_cast<int>(uniform(0, 99));
    if (roll < 40) {
      if (size == 2 || coin(1.0 / 3)) return neg(formula(spec, size - 1, shape));
      auto [l, r] = split(size - 1);
      return conj(formula(spec, l, shape), formula(spec, r, shape));
    }
    if (roll < 65) {
      std::vector<int> ops;
      if (shape.know) ops.push_back(0);
      if (shape.know_inf) ops.push_back(1);
      if (shape.announce && size >= 3) ops.push_back(2);
      if (ops.empty()) return neg(formula(spec, size - 1, shape));
      int op = ops[index(ops.size())];
      if (op == 2) {
        auto [l, r] = split(size - 1);
        return announce(formula(spec, l, shape), formula(spec, r, shape));
      }
      AgentId a = agent(spec, shape);
      Formula body = formula(spec, size - 1, shape);
      return op == 0 ? know(a, body) : know_inf(a, body);
    }
    return leaf(spec, shape, roll >= 85);
  }

  Formula formula(const RandomSpec& spec, const FormulaShape& shape = {}) {
    return formula(spec, static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(spec.max_formula_size))), shape);
  }

  /// Equivalence-mode model with 1..max_states states.
  Model model(const RandomSpec& spec, std::size_t states = 0) {
    std::size_t n = states ? states : static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(spec.max_states)));
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> val(n);
    for (std::size_t s = 0; s < n; ++s) {
      names.push_back("s" + std::to_string(s));
      for (std::size_t p = 0; p < spec.atoms; ++p)
        if (coin()) val[s].push_back(atom_name(p));
    }
    std::vector<std::vector<std::size_t>> labels(spec.agents, std::vector<std::size_t>(n));
    std::vector<std::vector<Depth>> depth(spec.agents, std::vector<Depth>(n));
    for (std::size_t a = 0; a < spec.agents; ++a) {
      for (std::size_t s = 0; s < n; ++s) labels[a][s] = index(n);
      std::vector<Depth> per_label(n);
      for (Depth& d : per_label) d = uniform(0, spec.max_depth);
      for (std::size_t s = 0; s < n; ++s)
        depth[a][s] = spec.unambiguous ? per_label[labels[a][s]] : uniform(0, spec.max_depth);
    }
    return Model::equivalence(std::move(names), std::move(val), labels, std::move(depth));
  }

  /// Reflexive-mode model with arbitrary (not necessarily symmetric) pairs.
  Model reflexive_model(const RandomSpec& spec, double edge_probability = 0.4) {
    std::size_t n = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(spec.max_states)));
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> val(n);
    for (std::size_t s = 0; s < n; ++s) {
      names.push_back("s" + std::to_string(s));
      for (std::size_t p = 0; p < spec.atoms; ++p)
        if (coin()) val[s].push_back(atom_name(p));
    }
    std::vector<std::vector<std::vector<StateIndex>>> succ(spec.agents, std::vector<std::vector<StateIndex>>(n));
    std::vector<std::vector<Depth>> depth(spec.agents, std::vector<Depth>(n));
    for (std::size_t a = 0; a < spec.agents; ++a)
      for (std::size_t s = 0; s < n; ++s) {
        depth[a][s] = uniform(0, spec.max_depth);
        for (std::size_t t = 0; t < n; ++t)
          if (t != s && coin(edge_probability)) succ[a][s].push_back(t);
      }
    return Model::reflexive(std::move(names), std::move(val), std::move(succ), std::move(depth));
  }

  PointedModel pointed(const RandomSpec& spec) {
    Model m = model(spec);
    StateIndex s = index(m.num_states());
    return {std::move(m), s};
  }

 private:
  std::mt19937_64 eng_;

  std::pair<std::size_t, std::size_t> split(std::size_t total) {
    std::size_t l = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(total) - 1));
    return {l, total - l};
  }

  AgentId agent(const RandomSpec& spec, const FormulaShape& shape) {
    if (shape.only_agent) return *shape.only_agent;
    return static_cast<AgentId>(index(spec.agents));
  }

  Formula leaf(const RandomSpec& spec, const FormulaShape& shape, bool prefer_depth = false) {
    bool depth_atom = shape.depth_atoms && (prefer_depth || !shape.atoms || coin(15.0 / 35));
    if (!depth_atom) {
      if (!shape.atoms || spec.atoms == 0 || coin(0.1)) return top();
      return atom(atom_name(index(spec.atoms)));
    }
    AgentId a = static_cast<AgentId>(index(spec.agents));
    Depth d = uniform(0, spec.max_depth);
    return coin() ? exact(a, d) : at_least(a, d);
  }
};

}  // namespace dbel
