#pragma once

// Axiom schemas and randomized validity suites.
//
// A schema is a builder over metavariables (subformulas, one agent, depth
// constants). Suites draw instances, evaluate them on a fixed pool of
// random models and collect the points where an instance fails. Every
// failure is re-checked with the naive oracle before it is reported, then
// shrunk by dropping states and replacing metavariables with smaller
// formulas while the failure persists.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/model_io.hpp"
#include "dbel/oracle.hpp"
#include "dbel/parallel.hpp"
#include "dbel/parser.hpp"
#include "dbel/print.hpp"
#include "dbel/random.hpp"
#include "dbel/semantics.hpp"
#include "dbel/transform.hpp"

namespace dbel {

enum class AxiomTable {
  T1,          // DBEL over the announcement-free fragment
  T3,          // EDPAL over L
  DPAL_SOUND,  // sound DPAL replacement set
};

inline std::string_view to_string(AxiomTable t) {
  switch (t) {
    case AxiomTable::T1:
      return "T1";
    case AxiomTable::T3:
      return "T3";
    case AxiomTable::DPAL_SOUND:
      return "DPAL_SOUND";
  }
  return "?";
}

inline std::optional<AxiomTable> parse_table(std::string_view s) {
  if (s == "T1") return AxiomTable::T1;
  if (s == "T3" || s == "T2" || s == "EDPAL_PA") return AxiomTable::T3;
  if (s == "DPAL_SOUND") return AxiomTable::DPAL_SOUND;
  return std::nullopt;
}

/// The semantics a table is claimed sound for.
inline Semantics home_semantics(AxiomTable t) {
  switch (t) {
    case AxiomTable::T1:
      return Semantics::dbel;
    case AxiomTable::T3:
      return Semantics::edpal;
    case AxiomTable::DPAL_SOUND:
      return Semantics::dpal;
  }
  return Semantics::dpal;
}

struct SchemaInstance {
  std::vector<Formula> sub;
  AgentId agent = 0;
  std::vector<Depth> depth;
};

struct AxiomSchema {
  std::string name;
  std::size_t arity = 0;
  std::function<std::vector<Depth>(Random&, const RandomSpec&)> draw_depths;
  std::function<Formula(const SchemaInstance&)> build;
  /// Bit i set: metavariable i must not contain depth atoms.
  unsigned depth_atom_free = 0;
  /// The single metavariable is an instance of another schema (a theorem).
  bool necessitation = false;
};

namespace detail {

inline Formula tautology(std::size_t which, const Formula& a, const Formula& b, const Formula& c) {
  switch (which % 8) {
    case 0:
      return implies(a, a);
    case 1:
      return disj(a, neg(a));
    case 2:
      return implies(conj(a, b), a);
    case 3:
      return implies(a, implies(b, a));
    case 4:
      return implies(implies(a, implies(b, c)), implies(implies(a, b), implies(a, c)));
    case 5:
      return implies(implies(neg(a), neg(b)), implies(b, a));
    case 6:
      return implies(neg(neg(a)), a);
    default:
      return implies(conj(a, implies(a, b)), b);
  }
}

inline std::function<std::vector<Depth>(Random&, const RandomSpec&)> depths_in(std::size_t count, Depth lo_offset,
                                                                                Depth hi_offset) {
  return [=](Random& r, const RandomSpec& spec) {
    std::vector<Depth> d;
    for (std::size_t i = 0; i < count; ++i) d.push_back(r.uniform(lo_offset, spec.max_depth + hi_offset));
    return d;
  };
}

}  // namespace detail

/// Schemas shared by every table: the DBEL axioms plus necessitation.
inline std::vector<AxiomSchema> dbel_schemas() {
  std::vector<AxiomSchema> s;
  s.push_back({"tautology", 3, [](Random& r, const RandomSpec&) { return std::vector<Depth>{r.uniform(0, 7)}; },
               [](const SchemaInstance& i) {
                 return detail::tautology(static_cast<std::size_t>(i.depth[0]), i.sub[0], i.sub[1], i.sub[2]);
               }});
  s.push_back({"deduction", 2, nullptr, [](const SchemaInstance& i) {
                 AgentId a = i.agent;
                 return implies(conj(know(a, i.sub[0]), know(a, implies(i.sub[0], i.sub[1]))), know(a, i.sub[1]));
               }});
  s.push_back({"truth", 1, nullptr, [](const SchemaInstance& i) { return implies(know(i.agent, i.sub[0]), i.sub[0]); }});
  s.push_back({"positive introspection", 1, nullptr, [](const SchemaInstance& i) {
                 AgentId a = i.agent;
                 const Formula& f = i.sub[0];
                 Depth d = f.modal_depth();
                 return implies(conj(know(a, f), at_least(a, d + 1)), know(a, implies(at_least(a, d), know(a, f))));
               }});
  s.push_back({"negative introspection", 1, nullptr, [](const SchemaInstance& i) {
                 AgentId a = i.agent;
                 const Formula& f = i.sub[0];
                 return implies(conj(neg(know(a, f)), at_least(a, f.modal_depth() + 1)), know(a, neg(know(a, f))));
               }});
  s.push_back({"depth monotonicity", 0, detail::depths_in(1, 1, 1), [](const SchemaInstance& i) {
                 return implies(at_least(i.agent, i.depth[0]), at_least(i.agent, i.depth[0] - 1));
               }});
  s.push_back({"exact depths", 0, detail::depths_in(1, 0, 1), [](const SchemaInstance& i) {
                 std::vector<Formula> below;
                 for (Depth d = 0; d < i.depth[0]; ++d) below.push_back(exact(i.agent, d));
                 return iff(at_least(i.agent, i.depth[0]), neg(disj_all(below)));
               }});
  s.push_back({"unique depth", 0, detail::depths_in(2, 0, 1), [](const SchemaInstance& i) {
                 Depth d1 = i.depth[0];
                 Depth d2 = i.depth[1] == d1 ? d1 + 1 : i.depth[1];
                 return neg(conj(exact(i.agent, d1), exact(i.agent, d2)));
               }});
  s.push_back({"depth deduction", 1, nullptr, [](const SchemaInstance& i) {
                 return implies(know(i.agent, i.sub[0]), at_least(i.agent, i.sub[0].modal_depth()));
               }});
  AxiomSchema nec;
  nec.name = "necessitation";
  nec.arity = 1;
  nec.necessitation = true;
  nec.build = [](const SchemaInstance& i) {
    return implies(at_least(i.agent, i.sub[0].modal_depth()), know(i.agent, i.sub[0]));
  };
  s.push_back(nec);
  return s;
}

inline AxiomSchema atomic_permanence_schema() {
  return {"atomic permanence", 1,
          [](Random& r, const RandomSpec& spec) { return std::vector<Depth>{r.uniform(0, std::max<Depth>(0, static_cast<Depth>(spec.atoms) - 1))}; },
          [](const SchemaInstance& i) {
            Formula p = atom(atom_name(static_cast<std::size_t>(i.depth[0])));
            return iff(announce(i.sub[0], p), implies(i.sub[0], p));
          }};
}

inline AxiomSchema negation_announcement_schema() {
  return {"negation announcement", 2, nullptr, [](const SchemaInstance& i) {
            return iff(announce(i.sub[0], neg(i.sub[1])), implies(i.sub[0], neg(announce(i.sub[0], i.sub[1]))));
          }};
}

inline AxiomSchema conjunction_announcement_schema() {
  return {"conjunction announcement", 3, nullptr, [](const SchemaInstance& i) {
            return iff(announce(i.sub[0], conj(i.sub[1], i.sub[2])),
                       conj(announce(i.sub[0], i.sub[1]), announce(i.sub[0], i.sub[2])));
          }};
}

inline AxiomSchema composition_schema() {
  return {"announcement composition", 3, nullptr, [](const SchemaInstance& i) {
            return iff(announce(i.sub[0], announce(i.sub[1], i.sub[2])),
                       announce(conj(i.sub[0], announce(i.sub[0], i.sub[1])), i.sub[2]));
          }};
}

/// [phi]E[a,d] <-> (phi -> E[a,d(phi)+d]) for integer d, including negative d.
inline AxiomSchema integer_depth_adjustment_schema() {
  return {"depth adjustment", 1, detail::depths_in(1, -4, 0), [](const SchemaInstance& i) {
            const Formula& phi = i.sub[0];
            return iff(announce(phi, exact(i.agent, i.depth[0])),
                       implies(phi, exact(i.agent, phi.modal_depth() + i.depth[0])));
          }};
}

inline AxiomSchema knowledge_announcement_schema() {
  return {"knowledge announcement", 2, nullptr, [](const SchemaInstance& i) {
            AgentId a = i.agent;
            const Formula& phi = i.sub[0];
            const Formula& psi = i.sub[1];
            Formula lhs = announce(phi, implies(at_least(a, psi.modal_depth()), know(a, psi)));
            Formula rhs = implies(phi, implies(at_least(a, phi.modal_depth() + psi.modal_depth()), know(a, announce(phi, psi))));
            return iff(lhs, rhs);
          }};
}

/// DPAL depth adjustment: only agents deep enough lose d(phi).
inline AxiomSchema dpal_depth_adjustment_schema() {
  return {"depth adjustment", 1, detail::depths_in(1, 0, 0), [](const SchemaInstance& i) {
            AgentId a = i.agent;
            const Formula& phi = i.sub[0];
            Depth dp = phi.modal_depth();
            Depth d = i.depth[0];
            Formula after = disj(conj(at_least(a, dp), exact(a, d + dp)), conj(neg(at_least(a, dp)), exact(a, d)));
            return iff(announce(phi, exact(a, d)), implies(phi, after));
          }};
}

inline Formula kp_prime_formula(AgentId a, const Formula& phi, const Formula& psi) {
  return implies(f_transform(phi, know(a, psi)), iff(announce(phi, know(a, psi)), implies(phi, know(a, psi))));
}

inline Formula ta_prime_formula(AgentId a, const Formula& phi, const Formula& psi) {
  return implies(know_inf(a, implies(phi, at_least(a, phi.modal_depth()))),
                 iff(announce(phi, know(a, psi)), implies(phi, know(a, announce(phi, psi)))));
}

inline std::vector<AxiomSchema> schemas_for(AxiomTable t) {
  std::vector<AxiomSchema> s = dbel_schemas();
  if (t == AxiomTable::T1) return s;
  s.push_back(atomic_permanence_schema());
  if (t == AxiomTable::T3) {
    s.push_back(integer_depth_adjustment_schema());
    s.push_back(negation_announcement_schema());
    s.push_back(conjunction_announcement_schema());
    s.push_back(knowledge_announcement_schema());
    s.push_back(composition_schema());
    return s;
  }
  s.push_back(dpal_depth_adjustment_schema());
  s.push_back(negation_announcement_schema());
  s.push_back(conjunction_announcement_schema());
  AxiomSchema kp{"KP'", 2, nullptr,
                 [](const SchemaInstance& i) { return kp_prime_formula(i.agent, i.sub[0], i.sub[1]); }};
  kp.depth_atom_free = 0b10;  // fails for psi mentioning depth atoms
  s.push_back(kp);
  s.push_back({"TA'", 2, nullptr, [](const SchemaInstance& i) { return ta_prime_formula(i.agent, i.sub[0], i.sub[1]); }});
  return s;
}

/// Fragment metavariables are drawn from: no Kinf anywhere, and no
/// announcements for the DBEL table.
inline FormulaShape shape_for(AxiomTable t) {
  return t == AxiomTable::T1 ? FormulaShape::hybrid() : FormulaShape::with_announcements();
}

inline SchemaInstance draw_instance(const AxiomSchema& schema, const std::vector<AxiomSchema>& table, Random& r,
                                    const RandomSpec& spec, const FormulaShape& shape) {
  SchemaInstance inst;
  inst.agent = static_cast<AgentId>(r.index(spec.agents));
  if (schema.draw_depths) inst.depth = schema.draw_depths(r, spec);
  if (schema.necessitation) {
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < table.size(); ++k)
      if (!table[k].necessitation) others.push_back(k);
    const AxiomSchema& inner = table[others[r.index(others.size())]];
    inst.sub.push_back(inner.build(draw_instance(inner, table, r, spec, shape)));
    return inst;
  }
  for (std::size_t k = 0; k < schema.arity; ++k) {
    FormulaShape sh = shape;
    if (schema.depth_atom_free & (1u << k)) sh.depth_atoms = false;
    inst.sub.push_back(r.formula(spec, sh));
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Suites

struct SuiteOptions {
  std::size_t instantiations = 300;
  std::size_t models = 50;
  /// Model bounds and metavariable size.
  RandomSpec spec{5, 2, 3, 5, 2, 1, false};
  std::size_t max_reported = 20;
  bool minimize = true;
};

struct Violation {
  std::string schema;
  Formula instance = top();
  Model model;
  StateIndex state = 0;
};

struct SuiteReport {
  Semantics kind = Semantics::dpal;
  std::size_t instantiations = 0;
  std::size_t models = 0;
  std::size_t checks = 0;  // (instance, model, state) triples
  std::size_t violation_count = 0;
  /// Failures the oracle did not confirm; nonzero means a checker bug.
  std::size_t checker_disagreements = 0;
  std::vector<Violation> violations;
  std::map<std::string, std::size_t> instances_by_schema;
  std::map<std::string, std::size_t> violations_by_schema;
};

inline oracle::Kind oracle_kind(Semantics k) {
  switch (k) {
    case Semantics::dbel:
      return oracle::Kind::dbel;
    case Semantics::dpal:
      return oracle::Kind::dpal;
    case Semantics::edpal:
      return oracle::Kind::edpal;
    case Semantics::adpal:
      return oracle::Kind::adpal;
  }
  return oracle::Kind::dpal;
}

namespace detail {

inline std::vector<Formula> shrink_candidates(const Formula& f) {
  std::vector<Formula> out;
  switch (f.op()) {
    case Op::neg:
    case Op::know:
    case Op::know_inf:
      out.push_back(f.child());
      break;
    case Op::conj:
    case Op::announce:
      out.push_back(f.lhs());
      out.push_back(f.rhs());
      break;
    default:
      break;
  }
  if (!f.is_top()) out.push_back(top());
  return out;
}

inline bool fails(const Model& m, StateIndex s, const Formula& f, Semantics kind) { return !check(m, s, f, kind); }

}  // namespace detail

/// Greedily shrinks a failing instance: drop states, then shrink metavariables.
inline Violation minimize(const AxiomSchema& schema, SchemaInstance inst, Model m, StateIndex s, Semantics kind) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateIndex t = 0; t < m.num_states() && !changed; ++t) {
      if (t == s) continue;
      std::vector<bool> keep(m.num_states(), true);
      keep[t] = false;
      std::vector<StateIndex> image;
      Model smaller = m.restrict_to(keep, &image);
      if (detail::fails(smaller, image[s], schema.build(inst), kind)) {
        m = std::move(smaller);
        s = image[s];
        changed = true;
      }
    }
    if (schema.necessitation) continue;
    for (std::size_t k = 0; k < inst.sub.size() && !changed; ++k) {
      for (const Formula& c : detail::shrink_candidates(inst.sub[k])) {
        SchemaInstance next = inst;
        next.sub[k] = c;
        if (detail::fails(m, s, schema.build(next), kind)) {
          inst = std::move(next);
          changed = true;
          break;
        }
      }
    }
  }
  return {schema.name, schema.build(inst), std::move(m), s};
}

/// Checks instances of the given schemas (round robin) on a shared model pool.
inline SuiteReport run_schemas(const std::vector<AxiomSchema>& schemas, const FormulaShape& shape, Semantics kind,
                               const SuiteOptions& opt) {
  SuiteReport rep;
  rep.kind = kind;
  rep.instantiations = opt.instantiations;
  rep.models = opt.models;
  std::vector<Model> pool;
  {
    Random r(derive_seed(opt.spec.seed, 0x6d6f64656c73ULL));
    for (std::size_t j = 0; j < opt.models; ++j) pool.push_back(r.model(opt.spec));
  }
  struct Hit {
    std::size_t model;
    StateIndex state;
    bool confirmed;
  };
  struct Slot {
    std::size_t schema = 0;
    SchemaInstance inst;
    std::size_t checks = 0;
    std::vector<Hit> hits;
  };
  std::vector<Slot> slots(opt.instantiations);
  parallel_for(opt.instantiations, [&](std::size_t i) {
    Slot& slot = slots[i];
    slot.schema = i % schemas.size();
    Random r(derive_seed(opt.spec.seed, i));
    slot.inst = draw_instance(schemas[slot.schema], schemas, r, opt.spec, shape);
    Formula f = schemas[slot.schema].build(slot.inst);
    for (std::size_t j = 0; j < pool.size(); ++j) {
      std::vector<bool> truth = evaluate(pool[j], f, kind);
      slot.checks += truth.size();
      for (StateIndex s = 0; s < truth.size(); ++s) {
        if (truth[s]) continue;
        bool confirmed = !oracle::check(pool[j], s, f, oracle_kind(kind));
        slot.hits.push_back({j, s, confirmed});
      }
    }
  });
  for (const Slot& slot : slots) {
    const AxiomSchema& schema = schemas[slot.schema];
    ++rep.instances_by_schema[schema.name];
    rep.checks += slot.checks;
    for (const Hit& h : slot.hits) {
      if (!h.confirmed) {
        ++rep.checker_disagreements;
        continue;
      }
      ++rep.violation_count;
      ++rep.violations_by_schema[schema.name];
      if (rep.violations.size() >= opt.max_reported) continue;
      if (opt.minimize)
        rep.violations.push_back(minimize(schema, slot.inst, pool[h.model], h.state, kind));
      else
        rep.violations.push_back({schema.name, schema.build(slot.inst), pool[h.model], h.state});
    }
  }
  return rep;
}

inline SuiteReport soundness_suite(AxiomTable table, Semantics kind, const SuiteOptions& opt = {}) {
  return run_schemas(schemas_for(table), shape_for(table), kind, opt);
}

// ---------------------------------------------------------------------------
// Knowledge preservation and traditional announcements

enum class KpVariant { KP, TA, KPp, TAp };

inline std::string_view to_string(KpVariant v) {
  switch (v) {
    case KpVariant::KP:
      return "KP";
    case KpVariant::TA:
      return "TA";
    case KpVariant::KPp:
      return "KPp";
    case KpVariant::TAp:
      return "TAp";
  }
  return "?";
}

inline std::optional<KpVariant> parse_kp_variant(std::string_view s) {
  if (s == "KP") return KpVariant::KP;
  if (s == "TA") return KpVariant::TA;
  if (s == "KPp" || s == "KP'") return KpVariant::KPp;
  if (s == "TAp" || s == "TA'") return KpVariant::TAp;
  return std::nullopt;
}

/// premise -> ([phi]K[a]psi <-> rhs), split into its two directions.
struct KpTaOutcome {
  bool premise = false;
  bool announced = false;  // phi holds at the point
  bool lhs = false;        // [phi]K[a]psi
  bool rhs = false;        // phi -> K[a]psi, or phi -> K[a][phi]psi for TA
  bool forward_ok() const { return !(premise && lhs && !rhs); }
  bool reverse_ok() const { return !(premise && rhs && !lhs); }
};

inline Formula kp_ta_premise(KpVariant v, AgentId a, const Formula& phi, const Formula& psi) {
  switch (v) {
    case KpVariant::KP:
      return neg(at_least(a, phi.modal_depth()));
    case KpVariant::TA:
      return at_least(a, phi.modal_depth());
    case KpVariant::KPp:
      return f_transform(phi, know(a, psi));
    case KpVariant::TAp:
      return know_inf(a, implies(phi, at_least(a, phi.modal_depth())));
  }
  return top();
}

inline Formula kp_ta_rhs(KpVariant v, AgentId a, const Formula& phi, const Formula& psi) {
  if (v == KpVariant::KP || v == KpVariant::KPp) return implies(phi, know(a, psi));
  return implies(phi, know(a, announce(phi, psi)));
}

/// Rejects inputs outside the property's hypotheses: KP and TA need
/// unambiguous depths, KP needs psi in the single-agent fragment, and KP'
/// is only claimed for psi without depth atoms.
inline void require_kp_ta_hypotheses(const Model& m, AgentId a, const Formula& psi, KpVariant v) {
  if ((v == KpVariant::KP || v == KpVariant::TA) && !is_unambiguous(m))
    throw SemanticsError(std::string(to_string(v)) + " needs a model with unambiguous depths");
  if (v == KpVariant::KP && !in_fragment(psi, Fragment::La, a))
    throw SemanticsError("KP needs psi without depth atoms or other agents' modalities");
  if (v == KpVariant::KPp && (contains_op(psi, Op::exact) || contains_op(psi, Op::at_least)))
    throw SemanticsError("KP' is checked for psi without depth atoms");
}

inline KpTaOutcome kp_ta_check(const Model& m, StateIndex s, AgentId a, const Formula& phi, const Formula& psi,
                               KpVariant v, Semantics kind) {
  require_kp_ta_hypotheses(m, a, psi, v);
  KpTaOutcome o;
  o.premise = check(m, s, kp_ta_premise(v, a, phi, psi), kind);
  o.announced = check(m, s, phi, kind);
  o.lhs = check(m, s, announce(phi, know(a, psi)), kind);
  o.rhs = check(m, s, kp_ta_rhs(v, a, phi, psi), kind);
  return o;
}

struct KpTaCase {
  Model model;
  StateIndex state = 0;
  AgentId agent = 0;
  Formula phi = top();
  Formula psi = top();
  KpTaOutcome outcome;
};

struct KpTaOptions {
  std::size_t cases = 200;
  RandomSpec spec{5, 2, 3, 4, 2, 1, false};
  /// Only count cases where the premise and the announcement hold.
  bool require_premise = true;
  std::size_t attempts_per_case = 400;
  std::size_t max_reported = 10;
};

struct KpTaReport {
  Semantics kind = Semantics::dpal;
  KpVariant variant = KpVariant::KP;
  std::size_t cases = 0;
  std::size_t premised = 0;
  std::size_t forward_violations = 0;
  std::size_t reverse_violations = 0;
  std::size_t skipped = 0;  // cases that never met the premise
  std::vector<KpTaCase> forward_examples;
  std::vector<KpTaCase> reverse_examples;
};

inline KpTaReport kp_ta_suite(Semantics kind, KpVariant v, const KpTaOptions& opt = {}) {
  KpTaReport rep;
  rep.kind = kind;
  rep.variant = v;
  rep.cases = opt.cases;
  RandomSpec spec = opt.spec;
  spec.unambiguous = spec.unambiguous || v == KpVariant::KP || v == KpVariant::TA;
  std::vector<std::optional<KpTaCase>> slots(opt.cases);
  parallel_for(opt.cases, [&](std::size_t i) {
    Random r(derive_seed(spec.seed, i));
    std::optional<KpTaCase> last;
    for (std::size_t attempt = 0; attempt < opt.attempts_per_case; ++attempt) {
      KpTaCase c{r.model(spec), 0, 0, top(), top(), {}};
      c.state = r.index(c.model.num_states());
      c.agent = static_cast<AgentId>(r.index(spec.agents));
      c.phi = r.formula(spec, FormulaShape::full());
      FormulaShape psi_shape = FormulaShape::full();
      if (v == KpVariant::KP) psi_shape = {true, true, true, false, true, c.agent};
      if (v == KpVariant::KPp) psi_shape.depth_atoms = false;
      c.psi = r.formula(spec, psi_shape);
      c.outcome = kp_ta_check(c.model, c.state, c.agent, c.phi, c.psi, v, kind);
      bool interesting = c.outcome.premise && c.outcome.announced;
      last = std::move(c);
      if (interesting || !opt.require_premise) break;
    }
    slots[i] = std::move(last);
  });
  for (auto& slot : slots) {
    if (!slot) continue;
    const KpTaOutcome& o = slot->outcome;
    if (o.premise && o.announced) ++rep.premised;
    else if (opt.require_premise) ++rep.skipped;
    if (!o.forward_ok()) {
      ++rep.forward_violations;
      if (rep.forward_examples.size() < opt.max_reported) rep.forward_examples.push_back(*slot);
    }
    if (!o.reverse_ok()) {
      ++rep.reverse_violations;
      if (rep.reverse_examples.size() < opt.max_reported) rep.reverse_examples.push_back(*slot);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Amnesia and announcement composition

/// !P[a,d(phi)] -> [phi]!K[a]psi
inline Formula amnesia_formula(AgentId a, const Formula& phi, const Formula& psi) {
  return implies(neg(at_least(a, phi.modal_depth())), announce(phi, neg(know(a, psi))));
}

struct PointedWitness {
  Model model;
  StateIndex state = 0;
  Formula formula = top();
};

struct AmnesiaReport {
  std::size_t cases = 0;
  std::size_t premised = 0;  // cases where !P[a,d(phi)] and phi held somewhere
  std::size_t violations = 0;
  std::optional<PointedWitness> witness;
};

/// Each case redraws (model, a, phi, psi) until some state has !P[a,d(phi)]
/// and phi; the formula is then checked at every state of that model.
inline AmnesiaReport amnesia_suite(Semantics kind, std::size_t cases, RandomSpec spec,
                                   std::size_t attempts_per_case = 200) {
  AmnesiaReport rep;
  rep.cases = cases;
  Random r(spec.seed);
  for (std::size_t i = 0; i < cases; ++i) {
    for (std::size_t attempt = 0; attempt < attempts_per_case; ++attempt) {
      Model m = r.model(spec);
      AgentId a = static_cast<AgentId>(r.index(spec.agents));
      Formula phi = r.formula(spec, FormulaShape::full());
      Formula psi = r.formula(spec, FormulaShape::full());
      std::vector<bool> pre = evaluate(m, conj(neg(at_least(a, phi.modal_depth())), phi), kind);
      if (std::find(pre.begin(), pre.end(), true) == pre.end()) continue;
      ++rep.premised;
      Formula f = amnesia_formula(a, phi, psi);
      std::vector<bool> truth = evaluate(m, f, kind);
      for (StateIndex s = 0; s < m.num_states(); ++s) {
        if (truth[s]) continue;
        ++rep.violations;
        if (!rep.witness) rep.witness = PointedWitness{m, s, f};
      }
      break;
    }
  }
  return rep;
}

/// phi = K[a]T announced where d(a) = 0 and psi = T: KP's premise and
/// right-hand side hold, [phi]K[a]T does not under EDPAL.
inline KpTaCase kp_reverse_top_case() {
  Model m = Model::equivalence({"s"}, {{}}, {{0}}, {{0}});
  KpTaCase c{m, 0, 0, know(0, top()), top(), {}};
  c.outcome = kp_ta_check(c.model, 0, 0, c.phi, c.psi, KpVariant::KP, Semantics::edpal);
  return c;
}

/// [phi][psi]chi <-> [phi & [phi]psi]chi
inline Formula composition_formula(const Formula& phi, const Formula& psi, const Formula& chi) {
  return composition_schema().build({{phi, psi, chi}, 0, {}});
}

struct CompositionWitness {
  Model model;
  StateIndex state = 0;
  Formula phi = top();
  Formula psi = top();
  Formula chi = top();
};

/// Random search for a point where announcement composition fails.
inline std::optional<CompositionWitness> find_composition_counterexample(Semantics kind, RandomSpec spec,
                                                                          std::size_t attempts) {
  Random r(spec.seed);
  for (std::size_t i = 0; i < attempts; ++i) {
    Model m = r.model(spec);
    Formula phi = r.formula(spec, FormulaShape::with_announcements());
    Formula psi = r.formula(spec, FormulaShape::with_announcements());
    Formula chi = r.formula(spec, FormulaShape::with_announcements());
    std::vector<bool> truth = evaluate(m, composition_formula(phi, psi, chi), kind);
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      if (truth[s]) continue;
      if (oracle::check(m, s, composition_formula(phi, psi, chi), oracle_kind(kind))) continue;
      return CompositionWitness{m, s, phi, psi, chi};
    }
  }
  return std::nullopt;
}

/// Random search for a point where the amnesia formula fails.
inline std::optional<PointedWitness> find_amnesia_counterexample(Semantics kind, RandomSpec spec, std::size_t attempts) {
  Random r(spec.seed);
  for (std::size_t i = 0; i < attempts; ++i) {
    Model m = r.model(spec);
    AgentId a = static_cast<AgentId>(r.index(spec.agents));
    Formula f = amnesia_formula(a, r.formula(spec, FormulaShape::full()), r.formula(spec, FormulaShape::full()));
    std::vector<bool> truth = evaluate(m, f, kind);
    for (StateIndex s = 0; s < m.num_states(); ++s)
      if (!truth[s]) return PointedWitness{m, s, f};
  }
  return std::nullopt;
}

/// {"model": ..., "state": name, "phi": ..., "psi": ..., "chi": ...}
inline nlohmann::json composition_witness_to_json(const CompositionWitness& w) {
  return {{"model", model_to_json(w.model)},
          {"state", w.model.state_name(w.state)},
          {"phi", to_string(w.phi)},
          {"psi", to_string(w.psi)},
          {"chi", to_string(w.chi)}};
}

inline CompositionWitness composition_witness_from_json(const nlohmann::json& j) {
  try {
    Model m = model_from_json(j.at("model")).model;
    StateIndex s = m.state_index(j.at("state").get<std::string>());
    return {m, s, parse(j.at("phi").get<std::string>()), parse(j.at("psi").get<std::string>()),
            parse(j.at("chi").get<std::string>())};
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("bad witness file: ") + e.what());
  }
}

}  // namespace dbel
