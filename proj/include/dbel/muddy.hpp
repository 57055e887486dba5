#pragma once

// Muddy children models and formulas, plus the 3-SAT family used for the
// model-checking lower bound.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/parallel.hpp"
#include "dbel/semantics.hpp"

namespace dbel {

class MuddyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// depth(agent, coordinates); coordinates[i] is 1 iff child i is muddy.
using MuddyDepthFn = std::function<Depth(AgentId, const std::vector<int>&)>;

inline MuddyDepthFn constant_depths(std::vector<Depth> per_agent) {
  return [per_agent = std::move(per_agent)](AgentId a, const std::vector<int>&) { return per_agent.at(a); };
}

/// d(i, .) = k - 1 - i.
inline std::vector<Depth> canonical_depths(std::size_t k) {
  std::vector<Depth> d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = static_cast<Depth>(k - 1 - i);
  return d;
}

inline Formula muddy_atom(std::size_t i) { return atom("m" + std::to_string(i)); }

struct MuddyInstance {
  std::size_t n = 0;
  std::size_t k = 0;
  Model model;
  StateIndex initial = 0;  // first k children muddy

  PointedModel pointed() const { return {model, initial}; }
};

/// States are {0,1}^n minus 0^n in increasing binary order (child i is bit i);
/// names spell the coordinates left to right, so "110" has children 0 and 1 muddy.
inline MuddyInstance build_muddy(std::size_t n, std::size_t k, const MuddyDepthFn& depth_fn) {
  if (n < 1 || n > 16) throw MuddyError("n must be between 1 and 16");
  if (k < 1 || k > n) throw MuddyError("k must satisfy 1 <= k <= n");
  const std::size_t count = (std::size_t{1} << n) - 1;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> val;
  std::vector<std::vector<std::size_t>> labels(n, std::vector<std::size_t>(count));
  std::vector<std::vector<Depth>> depth(n, std::vector<Depth>(count));
  for (std::size_t x = 1; x <= count; ++x) {
    const StateIndex s = x - 1;
    std::vector<int> coords(n);
    std::string name;
    std::vector<std::string> atoms;
    for (std::size_t i = 0; i < n; ++i) {
      coords[i] = (x >> i) & 1;
      name.push_back(coords[i] ? '1' : '0');
      if (coords[i]) atoms.push_back("m" + std::to_string(i));
    }
    names.push_back(name);
    val.push_back(atoms);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i][s] = x & ~(std::size_t{1} << i);
      depth[i][s] = depth_fn(static_cast<AgentId>(i), coords);
    }
  }
  MuddyInstance inst{n, k, Model::equivalence(std::move(names), std::move(val), labels, std::move(depth)), 0};
  inst.initial = ((std::size_t{1} << k) - 1) - 1;
  return inst;
}

inline MuddyInstance build_muddy(std::size_t n, std::size_t k, const std::vector<Depth>& per_agent) {
  if (per_agent.size() != n) throw MuddyError("need one depth per child");
  return build_muddy(n, k, constant_depths(per_agent));
}

/// <!K_{k-1} m_{k-1}> ... <!K_1 m_1> K_0 m_0
inline Formula phi_k(std::size_t k) {
  if (k < 1) throw MuddyError("phi_k needs k >= 1");
  Formula f = know(0, muddy_atom(0));
  for (std::size_t i = 1; i < k; ++i) f = dual_announce(neg(know(static_cast<AgentId>(i), muddy_atom(i))), f);
  return f;
}

/// K_0(P_0^{k-1} & K_1(P_1^{k-2} & ... K_{k-1} P_{k-1}^0))
inline Formula upper_bound_hypothesis(std::size_t k) {
  if (k < 2) throw MuddyError("upper bound hypothesis needs k >= 2");
  Formula f = know(static_cast<AgentId>(k - 1), at_least(static_cast<AgentId>(k - 1), 0));
  for (std::size_t i = k - 1; i-- > 0;)
    f = know(static_cast<AgentId>(i), conj(at_least(static_cast<AgentId>(i), static_cast<Depth>(k - 1 - i)), f));
  return f;
}

inline Formula upper_bound_formula(std::size_t k) { return implies(upper_bound_hypothesis(k), phi_k(k)); }

/// K_0(P_0^{k-1} & AND_{i=1}^{k-1} KInf_1 ... KInf_i(!(m_1 | ... | m_i) -> P_i^{k-2-i})).
/// A bound below zero is trivially met and becomes P_i^0.
inline Formula lower_bound_conclusion(std::size_t k) {
  if (k < 1) throw MuddyError("lower bound needs k >= 1");
  std::vector<Formula> parts{at_least(0, static_cast<Depth>(k) - 1)};
  for (std::size_t i = 1; i < k; ++i) {
    std::vector<Formula> muddy;
    for (std::size_t j = 1; j <= i; ++j) muddy.push_back(muddy_atom(j));
    Depth bound = std::max<Depth>(0, static_cast<Depth>(k) - 2 - static_cast<Depth>(i));
    Formula f = implies(neg(disj_all(muddy)), at_least(static_cast<AgentId>(i), bound));
    for (std::size_t j = i; j >= 1; --j) f = know_inf(static_cast<AgentId>(j), f);
    parts.push_back(f);
  }
  return know(0, conj_all(parts));
}

inline Formula lower_bound_formula(std::size_t k) { return implies(phi_k(k), lower_bound_conclusion(k)); }

/// <!K_2 m_2><!K_1 m_1>!K_2 T
inline Formula muddy_amnesia_formula() {
  return dual_announce(neg(know(2, muddy_atom(2))), dual_announce(neg(know(1, muddy_atom(1))), neg(know(2, top()))));
}

/// <K_1 !K_2 m_2>K_1 K_0 m_0
inline Formula muddy_leakage_formula() {
  return dual_announce(know(1, neg(know(2, muddy_atom(2)))), know(1, know(0, muddy_atom(0))));
}

/// <K_1 !K_2 m_2>K_0 m_0
inline Formula muddy_leakage_followup_formula() {
  return dual_announce(know(1, neg(know(2, muddy_atom(2)))), know(0, muddy_atom(0)));
}

// ---------------------------------------------------------------------------
// Experiments

struct UpperBoundResult {
  bool hypothesis = false;
  bool phi = false;
  bool implication = false;
};

inline UpperBoundResult upper_bound_check(std::size_t k, Semantics kind, const std::vector<Depth>& depths) {
  MuddyInstance inst = build_muddy(k, k, depths);
  UpperBoundResult r;
  r.hypothesis = check(inst.model, inst.initial, upper_bound_hypothesis(k), kind);
  r.phi = check(inst.model, inst.initial, phi_k(k), kind);
  r.implication = !r.hypothesis || r.phi;
  return r;
}

struct LowerBoundCase {
  std::vector<Depth> depths;
  bool phi = false;
  bool conclusion = false;
};

struct LowerBoundReport {
  std::size_t cases = 0;
  std::size_t phi_true = 0;
  std::vector<LowerBoundCase> violations;               // phi true, conclusion false
  std::vector<LowerBoundCase> contrapositive_failures;  // d(0) < k-1 yet phi true
  bool ok() const { return violations.empty() && contrapositive_failures.empty(); }
};

inline LowerBoundCase lower_bound_check(std::size_t k, const MuddyDepthFn& depth_fn) {
  MuddyInstance inst = build_muddy(k, k, depth_fn);
  LowerBoundCase c;
  c.phi = check(inst.model, inst.initial, phi_k(k), Semantics::dpal);
  c.conclusion = check(inst.model, inst.initial, lower_bound_conclusion(k), Semantics::dpal);
  return c;
}

/// Every constant-per-agent assignment in {0..max_depth}^k under DPAL.
inline LowerBoundReport lower_bound_sweep(std::size_t k, Depth max_depth) {
  std::size_t base = static_cast<std::size_t>(max_depth + 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= base;
  std::vector<LowerBoundCase> cases(total);
  parallel_for(total, [&](std::size_t idx) {
    std::vector<Depth> d(k);
    for (std::size_t i = 0, x = idx; i < k; ++i, x /= base) d[i] = static_cast<Depth>(x % base);
    cases[idx] = lower_bound_check(k, constant_depths(d));
    cases[idx].depths = d;
  });
  LowerBoundReport r;
  r.cases = total;
  for (const auto& c : cases) {
    if (c.phi) ++r.phi_true;
    if (c.phi && !c.conclusion) r.violations.push_back(c);
    if (c.phi && c.depths[0] < static_cast<Depth>(k) - 1) r.contrapositive_failures.push_back(c);
  }
  return r;
}

struct MatrixRow {
  std::string name;
  Semantics kind;
  bool expected;
  bool actual;
};

/// The amnesia/leakage truth matrix on M_3 with d(i, .) = 2 - i, initial state 111.
inline std::vector<MatrixRow> amnesia_leakage_matrix() {
  MuddyInstance inst = build_muddy(3, 3, std::vector<Depth>{2, 1, 0});
  MuddyInstance demoted = build_muddy(3, 3, std::vector<Depth>{1, 1, 0});
  std::vector<MatrixRow> rows;
  for (Semantics kind : all_announcement_semantics) {
    rows.push_back({"amnesia", kind, kind == Semantics::edpal,
                    check(inst.model, inst.initial, muddy_amnesia_formula(), kind)});
    rows.push_back({"leakage", kind, kind == Semantics::adpal,
                    check(inst.model, inst.initial, muddy_leakage_formula(), kind)});
  }
  rows.push_back({"leakage-demoted", Semantics::adpal, false,
                  check(demoted.model, demoted.initial, muddy_leakage_followup_formula(), Semantics::adpal)});
  return rows;
}

// ---------------------------------------------------------------------------
// 3-SAT

/// Literals are DIMACS style: +i is variable i, -i its negation (1-based).
struct ThreeSatInstance {
  std::size_t variables = 0;
  std::vector<std::array<int, 3>> clauses;
};

inline void validate(const ThreeSatInstance& inst) {
  for (const auto& c : inst.clauses)
    for (int lit : c)
      if (lit == 0 || static_cast<std::size_t>(lit < 0 ? -lit : lit) > inst.variables)
        throw MuddyError("literal out of range: " + std::to_string(lit));
}

inline bool truth_table_sat(const ThreeSatInstance& inst) {
  validate(inst);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << inst.variables); ++v) {
    bool all = true;
    for (const auto& c : inst.clauses) {
      bool any = false;
      for (int lit : c) {
        bool value = (v >> (std::abs(lit) - 1)) & 1;
        any = any || (lit > 0 ? value : !value);
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

struct Reduction {
  Model model;
  Formula formula;
  std::vector<Formula> announcements;  // in application order
  Formula body;                        // !K_0 !phi'
};

/// One state, agents 0..n+1 with depths 0, n+1, ..., 2n, 5n^2; the formula
/// announces K_{n+1}^j T for j = 2n down to n+1, then asks !K_0 !phi' where
/// literal i is replaced by P_i^1.
inline Reduction reduce_3sat(const ThreeSatInstance& inst) {
  validate(inst);
  const std::size_t n = inst.variables;
  const AgentId top_agent = static_cast<AgentId>(n + 1);
  std::vector<std::vector<Depth>> depth(n + 2, std::vector<Depth>(1));
  depth[0][0] = 0;
  for (std::size_t i = 1; i <= n; ++i) depth[i][0] = static_cast<Depth>(n + i);
  depth[n + 1][0] = static_cast<Depth>(5 * n * n);
  std::vector<std::vector<std::size_t>> labels(n + 2, std::vector<std::size_t>(1, 0));
  Model m = Model::equivalence({"s"}, {{}}, labels, std::move(depth));

  std::vector<Formula> clauses;
  for (const auto& c : inst.clauses) {
    std::vector<Formula> lits;
    for (int lit : c) {
      Formula p = at_least(static_cast<AgentId>(std::abs(lit)), 1);
      lits.push_back(lit > 0 ? p : neg(p));
    }
    clauses.push_back(disj_all(lits));
  }
  Formula body = neg(know(0, neg(conj_all(clauses))));
  std::vector<Formula> anns;
  for (std::size_t j = 2 * n; j >= n + 1 && j > 0; --j) anns.push_back(know_power(top_agent, j, top()));
  Formula f = body;
  for (std::size_t i = anns.size(); i-- > 0;) f = announce(anns[i], f);
  return {std::move(m), f, anns, body};
}

/// Every instance over `variables` variables with up to `max_clauses`
/// distinct clauses, clauses being multisets of three literals.
inline std::vector<ThreeSatInstance> enumerate_3sat(std::size_t variables, std::size_t max_clauses) {
  std::vector<int> lits;
  for (int v = 1; v <= static_cast<int>(variables); ++v) {
    lits.push_back(v);
    lits.push_back(-v);
  }
  std::vector<std::array<int, 3>> all;
  for (std::size_t a = 0; a < lits.size(); ++a)
    for (std::size_t b = a; b < lits.size(); ++b)
      for (std::size_t c = b; c < lits.size(); ++c) all.push_back({lits[a], lits[b], lits[c]});
  std::vector<ThreeSatInstance> out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    ThreeSatInstance inst{variables, {}};
    for (std::size_t i : pick) inst.clauses.push_back(all[i]);
    out.push_back(std::move(inst));
    if (pick.size() == max_clauses) return;
    for (std::size_t i = from; i < all.size(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

struct ReductionReport {
  std::size_t instances = 0;
  std::size_t satisfiable = 0;
  std::vector<ThreeSatInstance> mismatches;
};

inline ReductionReport reduction_sweep(std::size_t variables, std::size_t max_clauses) {
  auto instances = enumerate_3sat(variables, max_clauses);
  std::vector<char> sat(instances.size()), agree(instances.size());
  parallel_for(instances.size(), [&](std::size_t i) {
    Reduction r = reduce_3sat(instances[i]);
    sat[i] = truth_table_sat(instances[i]);
    agree[i] = check(r.model, 0, r.formula, Semantics::dpal) == static_cast<bool>(sat[i]);
  });
  ReductionReport rep;
  rep.instances = instances.size();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    rep.satisfiable += sat[i];
    if (!agree[i]) rep.mismatches.push_back(instances[i]);
  }
  return rep;
}

}  // namespace dbel
