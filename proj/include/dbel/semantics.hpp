#pragma once

// Model checking for DBEL and the three announcement semantics.
//
// The checker labels whole models bottom-up: every subformula gets a truth
// vector over the states of the model it is evaluated in. An announcement
// [phi]psi labels phi in the current model, builds the updated model once,
// and labels psi there. Updated models are cached per announced formula
// node, so repeated occurrences of the same announcement share one update.

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/print.hpp"

namespace dbel {

enum class Semantics { dbel, dpal, edpal, adpal };

inline constexpr Semantics all_announcement_semantics[] = {Semantics::dpal, Semantics::edpal, Semantics::adpal};

inline std::string_view to_string(Semantics k) {
  switch (k) {
    case Semantics::dbel:
      return "DBEL";
    case Semantics::dpal:
      return "DPAL";
    case Semantics::edpal:
      return "EDPAL";
    case Semantics::adpal:
      return "ADPAL";
  }
  return "?";
}

inline std::optional<Semantics> parse_semantics(std::string_view s) {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "DBEL") return Semantics::dbel;
  if (up == "DPAL") return Semantics::dpal;
  if (up == "EDPAL") return Semantics::edpal;
  if (up == "ADPAL") return Semantics::adpal;
  return std::nullopt;
}

/// Raised when a formula or model is not admissible for a semantics.
class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Updated model plus, for each old state s, the state playing s's role
/// after the announcement (no_state if s was removed).
struct UpdateResult {
  Model model;
  std::vector<StateIndex> image;
};

// ---------------------------------------------------------------------------
// Updates from a precomputed truth vector of the announced formula

namespace detail {

inline void check_truth_size(const Model& m, const std::vector<bool>& truth) {
  if (truth.size() != m.num_states()) throw SemanticsError("truth vector size differs from state count");
}

// Union-find with path halving, roots are the smallest member.
struct Dsu {
  std::vector<std::size_t> p;
  explicit Dsu(std::size_t n) : p(n) {
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    p[b] = a;
  }
};

}  // namespace detail

/// DPAL: a negative copy "0.s" of every state and a positive copy "1.s" of
/// each state where the announcement holds. Agents too shallow to perceive
/// the announcement at s link (1,s) with (0,s); relations are then closed.
inline UpdateResult dpal_update(const Model& m, const std::vector<bool>& truth, Depth d_ann) {
  detail::check_truth_size(m, truth);
  if (m.mode() != RelationMode::equivalence) throw SemanticsError("DPAL update needs an equivalence-mode model");
  const std::size_t n = m.num_states();
  std::vector<StateIndex> pos(n, no_state);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> val;
  for (StateIndex s = 0; s < n; ++s) {
    names.push_back("0." + m.state_name(s));
    val.push_back(m.atoms_at(s));
  }
  for (StateIndex s = 0; s < n; ++s) {
    if (!truth[s]) continue;
    pos[s] = names.size();
    names.push_back("1." + m.state_name(s));
    val.push_back(m.atoms_at(s));
  }
  const std::size_t total = names.size();
  std::vector<std::vector<std::size_t>> labels(m.num_agents());
  std::vector<std::vector<Depth>> depth(m.num_agents());
  for (AgentId a = 0; a < m.num_agents(); ++a) {
    detail::Dsu dsu(total);
    for (const auto& cls : m.classes(a)) {
      StateIndex first_pos = no_state;
      for (StateIndex s : cls) {
        dsu.unite(cls.front(), s);
        if (pos[s] == no_state) continue;
        if (first_pos == no_state) first_pos = pos[s];
        dsu.unite(first_pos, pos[s]);
      }
    }
    for (StateIndex s = 0; s < n; ++s)
      if (pos[s] != no_state && m.depth(a, s) < d_ann) dsu.unite(s, pos[s]);
    labels[a].resize(total);
    for (std::size_t i = 0; i < total; ++i) labels[a][i] = dsu.find(i);
    depth[a].resize(total);
    for (StateIndex s = 0; s < n; ++s) {
      depth[a][s] = m.depth(a, s);
      if (pos[s] != no_state) {
        Depth d = m.depth(a, s);
        depth[a][pos[s]] = d >= d_ann ? d - d_ann : d;
      }
    }
  }
  return {Model::equivalence(std::move(names), std::move(val), labels, std::move(depth)), std::move(pos)};
}

/// EDPAL: keep the states where the announcement holds and lower every depth by d_ann.
inline UpdateResult edpal_update(const Model& m, const std::vector<bool>& truth, Depth d_ann) {
  detail::check_truth_size(m, truth);
  std::vector<StateIndex> image;
  Model r = m.restrict_to(truth, &image);
  if (d_ann == 0) return {std::move(r), std::move(image)};
  std::vector<std::vector<std::size_t>> labels(r.num_agents());
  std::vector<std::vector<Depth>> depth = r.depths();
  for (auto& row : depth)
    for (Depth& d : row) d -= d_ann;
  if (r.mode() == RelationMode::equivalence) {
    for (AgentId a = 0; a < r.num_agents(); ++a)
      for (StateIndex s = 0; s < r.num_states(); ++s) labels[a].push_back(r.class_of(a, s));
    std::vector<std::vector<std::string>> val;
    for (StateIndex s = 0; s < r.num_states(); ++s) val.push_back(r.atoms_at(s));
    return {Model::equivalence(r.state_names(), std::move(val), labels, std::move(depth)), std::move(image)};
  }
  std::vector<std::vector<std::vector<StateIndex>>> succ(r.num_agents());
  std::vector<std::vector<std::string>> val;
  for (StateIndex s = 0; s < r.num_states(); ++s) val.push_back(r.atoms_at(s));
  for (AgentId a = 0; a < r.num_agents(); ++a)
    for (StateIndex s = 0; s < r.num_states(); ++s) succ[a].push_back(r.successors(a, s));
  return {Model::reflexive(r.state_names(), std::move(val), std::move(succ), std::move(depth)), std::move(image)};
}

/// ADPAL: an agent deep enough at s stops considering states that disagree
/// with s on the announcement. Works on explicit pairs; the result is in
/// reflexive mode.
inline UpdateResult adpal_update(const Model& m, const std::vector<bool>& truth, Depth d_ann) {
  detail::check_truth_size(m, truth);
  Model r = m.as_reflexive();
  const std::size_t n = r.num_states();
  std::vector<std::vector<std::vector<StateIndex>>> succ(r.num_agents(), std::vector<std::vector<StateIndex>>(n));
  std::vector<std::vector<Depth>> depth = r.depths();
  for (AgentId a = 0; a < r.num_agents(); ++a) {
    for (StateIndex s = 0; s < n; ++s) {
      const bool perceives = r.depth(a, s) >= d_ann;
      for (StateIndex t : r.successors(a, s))
        if (!perceives || truth[s] == truth[t]) succ[a][s].push_back(t);
      if (perceives) depth[a][s] -= d_ann;
    }
  }
  std::vector<std::vector<std::string>> val;
  for (StateIndex s = 0; s < n; ++s) val.push_back(r.atoms_at(s));
  std::vector<StateIndex> image(n);
  for (StateIndex s = 0; s < n; ++s) image[s] = s;
  return {Model::reflexive(r.state_names(), std::move(val), std::move(succ), std::move(depth)), std::move(image)};
}

inline UpdateResult update(Semantics kind, const Model& m, const std::vector<bool>& truth, Depth d_ann) {
  switch (kind) {
    case Semantics::dpal:
      return dpal_update(m, truth, d_ann);
    case Semantics::edpal:
      return edpal_update(m, truth, d_ann);
    case Semantics::adpal:
      return adpal_update(m, truth, d_ann);
    case Semantics::dbel:
      break;
  }
  throw SemanticsError("DBEL has no announcement update");
}

// ---------------------------------------------------------------------------
// Admissibility

/// Throws SemanticsError unless f may be checked on m under kind.
inline void require_admissible(const Model& m, const Formula& f, Semantics kind) {
  if (kind == Semantics::dbel && contains_op(f, Op::announce))
    throw SemanticsError("DBEL formulas cannot contain announcements");
  if (kind != Semantics::adpal && m.mode() != RelationMode::equivalence)
    throw SemanticsError(std::string(to_string(kind)) + " needs an equivalence-mode model");
  if (kind != Semantics::edpal && has_negative_depth(m))
    throw SemanticsError("negative depths are only meaningful under EDPAL");
  std::size_t agents = agent_bound(f);
  if (agents > m.num_agents())
    throw SemanticsError("formula mentions agent " + std::to_string(agents - 1) + " but the model has " +
                         std::to_string(m.num_agents()) + " agent(s)");
}

// ---------------------------------------------------------------------------
// Labeling

/// One model visited while checking: the base model or the result of an
/// announcement applied in `parent`.
struct LabeledModel {
  Model model;
  std::size_t parent = static_cast<std::size_t>(-1);
  std::optional<Formula> announced;
  std::vector<StateIndex> image;  // parent state -> state here
  std::vector<std::pair<Formula, std::vector<bool>>> table;

  /// Truth vector of f if it was labeled in this model.
  const std::vector<bool>* find(const Formula& f) const {
    for (const auto& [g, v] : table)
      if (g.id() == f.id()) return &v;
    return nullptr;
  }
};

/// All labeled models; entry 0 is the input model.
struct Labeling {
  Semantics kind = Semantics::dpal;
  Formula formula = top();
  std::vector<LabeledModel> models;

  const std::vector<bool>& root_truth() const { return *models.front().find(formula); }
  bool holds(StateIndex s) const { return root_truth().at(s); }
};

namespace detail {

class Labeler {
 public:
  Labeler(Semantics kind, bool keep_tables) : kind_(kind), keep_tables_(keep_tables) {}

  std::size_t add_root(Model m) {
    frames_.push_back(std::make_unique<Frame>());
    frames_.back()->model = std::move(m);
    return 0;
  }

  const std::vector<bool>& label(std::size_t fi, const Formula& f) {
    {
      Frame& fr = *frames_[fi];
      if (auto it = fr.memo.find(f.id()); it != fr.memo.end()) return it->second.second;
    }
    std::vector<bool> v = compute(fi, f);
    Frame& fr = *frames_[fi];
    if (keep_tables_) fr.order.push_back(f);
    return fr.memo.emplace(f.id(), std::make_pair(f, std::move(v))).first->second.second;
  }

  std::vector<LabeledModel> export_models() {
    std::vector<LabeledModel> out;
    for (auto& fr : frames_) {
      LabeledModel lm{fr->model, fr->parent, fr->announced, fr->image, {}};
      for (const Formula& g : fr->order) lm.table.emplace_back(g, fr->memo.at(g.id()).second);
      out.push_back(std::move(lm));
    }
    return out;
  }

 private:
  struct Frame {
    Model model = Model::equivalence({}, {}, {}, {});
    std::size_t parent = static_cast<std::size_t>(-1);
    std::optional<Formula> announced;
    std::vector<StateIndex> image;
    std::unordered_map<const void*, std::pair<Formula, std::vector<bool>>> memo;
    std::unordered_map<const void*, std::size_t> children;  // announced node -> frame
    std::vector<Formula> order;
  };

  Semantics kind_;
  bool keep_tables_;
  std::vector<std::unique_ptr<Frame>> frames_;

  std::size_t child_frame(std::size_t fi, const Formula& announced, const std::vector<bool>& truth) {
    if (auto it = frames_[fi]->children.find(announced.id()); it != frames_[fi]->children.end()) return it->second;
    UpdateResult u = update(kind_, frames_[fi]->model, truth, announced.modal_depth());
    auto fr = std::make_unique<Frame>();
    fr->model = std::move(u.model);
    fr->parent = fi;
    fr->announced = announced;
    fr->image = std::move(u.image);
    frames_.push_back(std::move(fr));
    std::size_t ci = frames_.size() - 1;
    frames_[fi]->children.emplace(announced.id(), ci);
    return ci;
  }

  std::vector<bool> compute(std::size_t fi, const Formula& f) {
    const std::size_t n = frames_[fi]->model.num_states();
    std::vector<bool> out(n, false);
    switch (f.op()) {
      case Op::atom: {
        const Model& m = frames_[fi]->model;
        for (StateIndex s = 0; s < n; ++s) out[s] = m.holds_atom(s, f.atom_name());
        return out;
      }
      case Op::exact:
      case Op::at_least: {
        const Model& m = frames_[fi]->model;
        for (StateIndex s = 0; s < n; ++s) {
          Depth d = m.depth(f.agent(), s);
          out[s] = f.op() == Op::exact ? d == f.depth_constant() : d >= f.depth_constant();
        }
        return out;
      }
      case Op::neg: {
        const std::vector<bool>& c = label(fi, f.child());
        for (StateIndex s = 0; s < n; ++s) out[s] = !c[s];
        return out;
      }
      case Op::conj: {
        const std::vector<bool>& l = label(fi, f.lhs());
        bool any = false;
        for (StateIndex s = 0; s < n; ++s) any = any || l[s];
        if (!any) return out;
        const std::vector<bool>& r = label(fi, f.rhs());
        for (StateIndex s = 0; s < n; ++s) out[s] = l[s] && r[s];
        return out;
      }
      case Op::know:
      case Op::know_inf: {
        std::vector<bool> c = label(fi, f.child());
        const Model& m = frames_[fi]->model;
        const AgentId a = f.agent();
        const Depth need = f.op() == Op::know ? f.child().modal_depth() : 0;
        if (m.mode() == RelationMode::equivalence) {
          for (const auto& cls : m.classes(a)) {
            bool all = std::all_of(cls.begin(), cls.end(), [&](StateIndex t) { return c[t]; });
            for (StateIndex s : cls) out[s] = all && (f.op() == Op::know_inf || m.depth(a, s) >= need);
          }
        } else {
          for (StateIndex s = 0; s < n; ++s) {
            if (f.op() == Op::know && m.depth(a, s) < need) continue;
            const auto& succ = m.successors(a, s);
            out[s] = c[s] && std::all_of(succ.begin(), succ.end(), [&](StateIndex t) { return c[t]; });
          }
        }
        return out;
      }
      case Op::announce: {
        std::vector<bool> pre = label(fi, f.lhs());
        bool any = false;
        for (StateIndex s = 0; s < n; ++s) any = any || pre[s];
        if (!any) return std::vector<bool>(n, true);
        std::size_t ci = child_frame(fi, f.lhs(), pre);
        std::vector<bool> body = label(ci, f.rhs());
        const std::vector<StateIndex>& image = frames_[ci]->image;
        for (StateIndex s = 0; s < n; ++s) out[s] = !pre[s] || body.at(image[s]);
        return out;
      }
    }
    return out;
  }
};

}  // namespace detail

/// Truth of f at every state of m.
inline std::vector<bool> evaluate(const Model& m, const Formula& f, Semantics kind) {
  require_admissible(m, f, kind);
  detail::Labeler l(kind, false);
  l.add_root(kind == Semantics::adpal ? m.as_reflexive() : m);
  return l.label(0, f);
}

/// (m, s) |= f under kind.
inline bool check(const Model& m, StateIndex s, const Formula& f, Semantics kind) {
  if (s >= m.num_states()) throw ModelError("unknown state index " + std::to_string(s));
  return evaluate(m, f, kind)[s];
}

inline bool check(const PointedModel& pm, const Formula& f, Semantics kind) {
  return check(pm.model, pm.state, f, kind);
}

/// Full truth tables for every labeled subformula in every visited model.
inline Labeling check_labeling(const Model& m, const Formula& f, Semantics kind) {
  require_admissible(m, f, kind);
  detail::Labeler l(kind, true);
  l.add_root(kind == Semantics::adpal ? m.as_reflexive() : m);
  l.label(0, f);
  return {kind, f, l.export_models()};
}

/// Model update by a formula, evaluated in m first.
inline UpdateResult update(Semantics kind, const Model& m, const Formula& announced) {
  if (kind == Semantics::dbel) throw SemanticsError("DBEL has no announcement update");
  std::vector<bool> truth = evaluate(m, announced, kind);
  return update(kind, kind == Semantics::adpal ? m.as_reflexive() : m, truth, announced.modal_depth());
}

inline UpdateResult update_dpal(const Model& m, const Formula& f) { return update(Semantics::dpal, m, f); }
inline UpdateResult update_edpal(const Model& m, const Formula& f) { return update(Semantics::edpal, m, f); }
inline UpdateResult update_adpal(const Model& m, const Formula& f) { return update(Semantics::adpal, m, f); }

}  // namespace dbel
