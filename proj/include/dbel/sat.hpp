#pragma once

// Depth-aware types over the closure of a formula set, the depth
// assignment that witnesses a type, and a bounded brute-force search for
// satisfying pointed models.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/parallel.hpp"
#include "dbel/print.hpp"
#include "dbel/semantics.hpp"

namespace dbel {

class SatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// cl(Gamma): subformulas, each non-negation also present negated.
/// Members are ordered by their printed form.
class Closure {
 public:
  const std::vector<Formula>& members() const { return items_; }
  std::size_t size() const { return items_.size(); }
  const Formula& operator[](std::size_t i) const { return items_[i]; }

  std::optional<std::size_t> find(const Formula& f) const {
    auto it = index_.find(to_string(f));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index_of(const Formula& f) const {
    auto i = find(f);
    if (!i) throw SatError("formula not in closure: " + to_string(f));
    return *i;
  }

  /// Number of distinct subformulas of Gamma.
  std::size_t subformula_count() const { return subformulas_; }

 private:
  friend Closure closure(const std::vector<Formula>& gamma);
  std::vector<Formula> items_;
  std::map<std::string, std::size_t> index_;
  std::size_t subformulas_ = 0;
};

inline Closure closure(const std::vector<Formula>& gamma) {
  std::map<std::string, Formula> sub;
  for (const Formula& g : gamma) {
    for_each_node(g, [&](const Formula& f) {
      if (f.op() == Op::know || f.op() == Op::announce)
        throw SatError("closure needs formulas without K or announcements: " + to_string(g));
      if ((f.op() == Op::exact || f.op() == Op::at_least) && f.depth_constant() < 0)
        throw SatError("closure needs non-negative depth constants: " + to_string(g));
      sub.emplace(to_string(f), f);
    });
  }
  std::map<std::string, Formula> all = sub;
  for (const auto& [key, f] : sub)
    if (f.op() != Op::neg) all.emplace(to_string(neg(f)), neg(f));
  Closure cl;
  cl.subformulas_ = sub.size();
  for (const auto& [key, f] : all) {
    cl.index_.emplace(key, cl.items_.size());
    cl.items_.push_back(f);
  }
  return cl;
}

/// A candidate type: membership flags over the closure.
using TypeSet = std::vector<bool>;

struct TypeVerdict {
  bool ok = true;
  int rule = 0;  // lowest violated rule, 1..7
  std::vector<Formula> witnesses;
  explicit operator bool() const { return ok; }
};

namespace detail {

// Depth literals of one agent inside a type.
struct AgentLiterals {
  std::set<Depth> p, not_p, e, not_e;
};

inline std::map<AgentId, AgentLiterals> depth_literals(const TypeSet& g, const Closure& cl) {
  std::map<AgentId, AgentLiterals> out;
  for (std::size_t i = 0; i < cl.size(); ++i) {
    if (!g[i]) continue;
    const Formula& f = cl[i];
    bool negated = f.op() == Op::neg;
    const Formula& core = negated ? f.child() : f;
    if (core.op() == Op::at_least) (negated ? out[core.agent()].not_p : out[core.agent()].p).insert(core.depth_constant());
    if (core.op() == Op::exact) (negated ? out[core.agent()].not_e : out[core.agent()].e).insert(core.depth_constant());
  }
  return out;
}

}  // namespace detail

/// Rules 1-7 over a subset of cl. Rule 5 forbids !P[a,d'] for d' <= d (an
/// exact depth d already gives P[a,d]); rule 6 asks for a free depth between
/// the largest P bound and d; rule 6 is not applied at d = 0, which rule 7
/// covers.
inline TypeVerdict is_type(const TypeSet& g, const Closure& cl) {
  if (g.size() != cl.size()) throw SatError("type size differs from closure size");
  auto in = [&](const Formula& f) {
    auto i = cl.find(f);
    return i && g[*i];
  };
  auto fail = [](int rule, std::vector<Formula> w) { return TypeVerdict{false, rule, std::move(w)}; };
  for (std::size_t i = 0; i < cl.size(); ++i) {
    const Formula& f = cl[i];
    if (f.op() != Op::neg && g[i] == in(neg(f))) return fail(1, {f, neg(f)});
  }
  for (std::size_t i = 0; i < cl.size(); ++i) {
    const Formula& f = cl[i];
    if (f.op() == Op::conj && g[i] != (in(f.lhs()) && in(f.rhs()))) return fail(2, {f});
  }
  for (std::size_t i = 0; i < cl.size(); ++i) {
    const Formula& f = cl[i];
    if (g[i] && f.op() == Op::know_inf && !in(f.child())) return fail(3, {f, f.child()});
  }
  auto lits = detail::depth_literals(g, cl);
  for (const auto& [a, l] : lits) {
    for (Depth d : l.p) {
      for (Depth x : l.not_p)
        if (x < d) return fail(4, {at_least(a, d), neg(at_least(a, x))});
      for (Depth x : l.e)
        if (x < d) return fail(4, {at_least(a, d), exact(a, x)});
    }
  }
  for (const auto& [a, l] : lits) {
    for (Depth d : l.e) {
      for (Depth x : l.e)
        if (x != d) return fail(5, {exact(a, d), exact(a, x)});
      for (Depth x : l.not_p)
        if (x <= d) return fail(5, {exact(a, d), neg(at_least(a, x))});
    }
  }
  for (const auto& [a, l] : lits) {
    Depth floor = l.p.empty() ? 0 : *l.p.rbegin();
    for (Depth d : l.not_p) {
      if (d == 0) continue;
      bool free = false;
      for (Depth x = floor; x < d && !free; ++x) free = !l.not_e.count(x);
      if (!free) return fail(6, {neg(at_least(a, d))});
    }
  }
  for (const auto& [a, l] : lits)
    if (l.not_p.count(0)) return fail(7, {neg(at_least(a, 0))});
  return {};
}

/// Depth for every agent with a depth literal in the type (agents without
/// literals are unconstrained and omitted).
inline std::map<AgentId, Depth> assign_depths(const TypeSet& g, const Closure& cl) {
  std::map<AgentId, Depth> out;
  for (const auto& [a, l] : detail::depth_literals(g, cl)) {
    auto free = [&](Depth x) { return !l.not_e.count(x); };
    if (!l.e.empty()) {
      out[a] = *l.e.begin();
    } else if (!l.p.empty()) {
      Depth d = *l.p.rbegin();
      while (!free(d)) ++d;
      out[a] = d;
    } else if (!l.not_p.empty()) {
      // Largest free depth strictly below the smallest upper bound.
      Depth d = *l.not_p.begin() - 1;
      while (d > 0 && !free(d)) --d;
      out[a] = d;
    } else {
      Depth d = 0;
      while (!free(d)) ++d;
      out[a] = d;
    }
  }
  return out;
}

/// Whether depth d for agent a satisfies every depth literal of a in the type.
inline bool satisfies_depth_literals(const TypeSet& g, const Closure& cl, AgentId a, Depth d) {
  for (std::size_t i = 0; i < cl.size(); ++i) {
    if (!g[i]) continue;
    const Formula& f = cl[i];
    bool negated = f.op() == Op::neg;
    const Formula& core = negated ? f.child() : f;
    if ((core.op() != Op::at_least && core.op() != Op::exact) || core.agent() != a) continue;
    bool holds = core.op() == Op::at_least ? d >= core.depth_constant() : d == core.depth_constant();
    if (holds == negated) return false;
  }
  return true;
}

/// The set of closure members true at a point.
inline TypeSet type_at(const Closure& cl, const Model& m, StateIndex s, Semantics kind = Semantics::dbel) {
  TypeSet g(cl.size());
  for (std::size_t i = 0; i < cl.size(); ++i) g[i] = check(m, s, cl[i], kind);
  return g;
}

// ---------------------------------------------------------------------------
// Bounded brute force

struct SatBounds {
  std::size_t max_states = 3;
  Depth max_depth = 2;
  /// Upper limit on candidate models; larger searches fail with SatError.
  std::uint64_t budget = 20'000'000;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> restricted_growth_strings(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t max_label) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t l = 0; l <= max_label + 1; ++l) {
      cur[i] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return {{}};
  cur[0] = 0;
  rec(1, 0);
  return out;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

}  // namespace detail

/// Smallest-first search for a pointed model (point = state 0) satisfying f.
/// Partitions are restricted growth strings, valuations range over the atoms
/// of f, depths over 0..max_depth. An empty result is not a proof of
/// unsatisfiability.
inline std::optional<PointedModel> sat_bruteforce(const Formula& f, Semantics kind, const SatBounds& b = {}) {
  if (kind == Semantics::dbel && contains_op(f, Op::announce))
    throw SemanticsError("DBEL formulas cannot contain announcements");
  const auto atom_set = atoms_of(f);
  const std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  const std::size_t agents = agent_bound(f);
  const std::uint64_t depth_choices = static_cast<std::uint64_t>(b.max_depth + 1);
  std::uint64_t spent = 0;
  for (std::size_t n = 1; n <= b.max_states; ++n) {
    auto parts = detail::restricted_growth_strings(n);
    std::uint64_t level = detail::saturating_pow(parts.size(), agents);
    level = detail::saturating_mul(level, detail::saturating_pow(2, n * atoms.size()));
    level = detail::saturating_mul(level, detail::saturating_pow(depth_choices, n * agents));
    if (level > b.budget - std::min(b.budget, spent))
      throw SatError("bounds exceeded: " + std::to_string(n) + " states would need more than " +
                     std::to_string(b.budget) + " candidate models");
    spent += level;

    std::vector<std::string> names;
    for (std::size_t s = 0; s < n; ++s) names.push_back("s" + std::to_string(s));
    const std::uint64_t valuations = detail::saturating_pow(2, n * atoms.size());
    const std::uint64_t depth_maps = detail::saturating_pow(depth_choices, n * agents);
    const std::size_t first_count = agents == 0 ? 1 : parts.size();
    const std::uint64_t rest_parts = agents == 0 ? 1 : detail::saturating_pow(parts.size(), agents - 1);

    std::atomic<std::size_t> best{first_count};
    std::vector<std::optional<PointedModel>> found(first_count);
    parallel_for(first_count, [&](std::size_t first) {
      for (std::uint64_t rp = 0; rp < rest_parts; ++rp) {
        if (best.load() < first) return;
        std::vector<std::vector<std::size_t>> labels;
        if (agents > 0) labels.push_back(parts[first]);
        for (std::uint64_t x = rp, a = 1; a < agents; ++a, x /= parts.size()) labels.push_back(parts[x % parts.size()]);
        for (std::uint64_t v = 0; v < valuations; ++v) {
          std::vector<std::vector<std::string>> val(n);
          for (std::size_t s = 0; s < n; ++s)
            for (std::size_t p = 0; p < atoms.size(); ++p)
              if ((v >> (s * atoms.size() + p)) & 1) val[s].push_back(atoms[p]);
          for (std::uint64_t dm = 0; dm < depth_maps; ++dm) {
            std::vector<std::vector<Depth>> depth(agents, std::vector<Depth>(n));
            std::uint64_t x = dm;
            for (std::size_t a = 0; a < agents; ++a)
              for (std::size_t s = 0; s < n; ++s, x /= depth_choices) depth[a][s] = static_cast<Depth>(x % depth_choices);
            Model m = Model::equivalence(names, val, labels, depth);
            if (check(m, 0, f, kind)) {
              found[first] = PointedModel{std::move(m), 0};
              std::size_t cur = best.load();
              while (first < cur && !best.compare_exchange_weak(cur, first)) {
              }
              return;
            }
          }
        }
      }
    });
    for (auto& r : found)
      if (r) return r;
  }
  return std::nullopt;
}

}  // namespace dbel
