#pragma once

// Formula-to-formula rewrites: double-negation removal, the precondition
// transform F_phi guarding knowledge preservation, and the reduction of
// EDPAL formulas to the announcement-free, K-free, P-free fragment.

#include <map>
#include <unordered_map>
#include <utility>

#include "dbel/formula.hpp"

namespace dbel {

/// Removes every double negation. Depth and (classical) meaning are unchanged.
inline Formula simplify(const Formula& f) {
  switch (f.op()) {
    case Op::atom:
    case Op::exact:
    case Op::at_least:
      return f;
    case Op::neg:
      if (f.child().op() == Op::neg) return simplify(f.child().child());
      return neg(simplify(f.child()));
    case Op::conj:
      return conj(simplify(f.lhs()), simplify(f.rhs()));
    case Op::know:
      return know(f.agent(), simplify(f.child()));
    case Op::know_inf:
      return know_inf(f.agent(), simplify(f.child()));
    case Op::announce:
      return announce(simplify(f.lhs()), simplify(f.rhs()));
  }
  return f;
}

/// F_announced(f): the condition under which announcing `announced` leaves
/// an agent's knowledge of f untouched when the agent cannot perceive it.
inline Formula f_transform(const Formula& announced, const Formula& f) {
  const Depth d_ann = announced.modal_depth();
  auto unperceived_somewhere = [&](AgentId a) {
    return neg(know_inf(a, implies(announced, at_least(a, d_ann))));
  };
  switch (f.op()) {
    case Op::atom:
    case Op::exact:
    case Op::at_least:
      return top();
    case Op::neg:
      return f_transform(announced, f.child());
    case Op::conj:
    case Op::announce:
      return conj(f_transform(announced, f.lhs()), f_transform(announced, f.rhs()));
    case Op::know: {
      AgentId a = f.agent();
      Formula gate = know_inf(
          a, implies(announced, disj(neg(at_least(a, d_ann)), at_least(a, d_ann + f.child().modal_depth()))));
      return conj(conj(unperceived_somewhere(a), gate), know_inf(a, f_transform(announced, f.child())));
    }
    case Op::know_inf:
      return conj(unperceived_somewhere(f.agent()), know_inf(f.agent(), f_transform(announced, f.child())));
  }
  return top();
}

/// K[a] psi  ->  P[a,d(psi)] & Kinf[a] psi, applied everywhere. Announcements are kept.
inline Formula eliminate_knowledge(const Formula& f) {
  switch (f.op()) {
    case Op::atom:
    case Op::exact:
    case Op::at_least:
      return f;
    case Op::neg:
      return neg(eliminate_knowledge(f.child()));
    case Op::conj:
      return conj(eliminate_knowledge(f.lhs()), eliminate_knowledge(f.rhs()));
    case Op::know:
      return conj(at_least(f.agent(), f.child().modal_depth()), know_inf(f.agent(), eliminate_knowledge(f.child())));
    case Op::know_inf:
      return know_inf(f.agent(), eliminate_knowledge(f.child()));
    case Op::announce:
      return announce(eliminate_knowledge(f.lhs()), eliminate_knowledge(f.rhs()));
  }
  return f;
}

/// P[a,d] as !(E[a,0] | ... | E[a,d-1]); top for d <= 0. Valid on models
/// whose depths are natural numbers.
inline Formula expand_at_least(AgentId a, Depth d) {
  if (d <= 0) return top();
  std::vector<Formula> exacts;
  for (Depth i = 0; i < d; ++i) exacts.push_back(exact(a, i));
  return neg(disj_all(exacts));
}

namespace detail {

// Announcements are pushed inward before any P atom is expanded: the
// exact-depth expansion only holds where depths are non-negative, which is
// the evaluation model of the translated formula but not an EDPAL update.
class EdpalTranslator {
 public:
  Formula translate(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second.second;
    Formula out = translate_uncached(f);
    memo_.emplace(f.id(), std::make_pair(f, out));
    return out;
  }

 private:
  // Keys hold the source formula alongside the result so node ids stay valid.
  std::unordered_map<const void*, std::pair<Formula, Formula>> memo_;
  std::map<std::pair<const void*, const void*>, std::pair<std::pair<Formula, Formula>, Formula>> ann_memo_;
  std::map<std::pair<const void*, const void*>, Formula> composite_memo_;

  Formula translate_uncached(const Formula& f) {
    switch (f.op()) {
      case Op::atom:
      case Op::exact:
        return f;
      case Op::at_least:
        return expand_at_least(f.agent(), f.depth_constant());
      case Op::neg:
        return neg(translate(f.child()));
      case Op::conj:
        return conj(translate(f.lhs()), translate(f.rhs()));
      case Op::know:
        return conj(expand_at_least(f.agent(), f.child().modal_depth()), know_inf(f.agent(), translate(f.child())));
      case Op::know_inf:
        return know_inf(f.agent(), translate(f.child()));
      case Op::announce:
        return push(f.lhs(), f.rhs());
    }
    return f;
  }

  // Translation of [ann]body.
  Formula push(const Formula& ann, const Formula& body) {
    auto key = std::make_pair(ann.id(), body.id());
    if (auto it = ann_memo_.find(key); it != ann_memo_.end()) return it->second.second;
    Formula out = push_uncached(ann, body);
    ann_memo_.emplace(key, std::make_pair(std::make_pair(ann, body), out));
    return out;
  }

  Formula push_uncached(const Formula& ann, const Formula& body) {
    const Depth d_ann = ann.modal_depth();
    Formula guard = translate(ann);
    switch (body.op()) {
      case Op::atom:  // atomic permanence
        return implies(guard, body);
      case Op::exact:  // depth adjustment
        return implies(guard, exact(body.agent(), body.depth_constant() + d_ann));
      case Op::at_least:
        return implies(guard, expand_at_least(body.agent(), body.depth_constant() + d_ann));
      case Op::neg:
        return implies(guard, neg(push(ann, body.child())));
      case Op::conj:
        return conj(push(ann, body.lhs()), push(ann, body.rhs()));
      case Op::know:
        // [ann](P[a,d] & Kinf[a] psi) with the depth shifted by d(ann).
        return implies(guard, conj(expand_at_least(body.agent(), d_ann + body.child().modal_depth()),
                                   know_inf(body.agent(), push(ann, body.child()))));
      case Op::know_inf:
        return implies(guard, know_inf(body.agent(), push(ann, body.child())));
      case Op::announce:  // composition: [ann][b]c <-> [ann & [ann]b]c
        return push(composite(ann, body.lhs()), body.rhs());
    }
    return body;
  }

  Formula composite(const Formula& ann, const Formula& next) {
    auto key = std::make_pair(ann.id(), next.id());
    if (auto it = composite_memo_.find(key); it != composite_memo_.end()) return it->second;
    Formula c = conj(ann, announce(ann, next));
    composite_memo_.emplace(key, c);
    return c;
  }
};

}  // namespace detail

/// Equivalent EDPAL formula over atoms, E atoms, negation, conjunction and
/// Kinf only. The result shares subterms; dag_size() measures it.
inline Formula translate_edpal(const Formula& f) {
  detail::EdpalTranslator t;
  return t.translate(f);
}

}  // namespace dbel
