#pragma once

// Graphviz export of a model and of the models produced by a chain of
// announcements. One cluster per step; DPAL links between the negative and
// positive copy are dashed.

#include <sstream>
#include <string>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"
#include "dbel/print.hpp"
#include "dbel/semantics.hpp"

namespace dbel {

inline const std::vector<std::string>& dot_palette() {
  static const std::vector<std::string> colors{"red", "black", "blue", "darkgreen", "orange", "purple", "brown", "gray40"};
  return colors;
}

struct DotStep {
  Model model;
  StateIndex designated = no_state;
  std::string label;
  bool dpal_step = false;  // model came out of a DPAL update
};

/// The leading announcements of f: [a][b]g and <a><b>g both give {a, b}.
inline std::vector<Formula> announcement_chain(const Formula& f) {
  std::vector<Formula> out;
  Formula cur = f;
  for (;;) {
    if (cur.op() == Op::announce) {
      out.push_back(cur.lhs());
      cur = cur.rhs();
    } else if (cur.op() == Op::neg && cur.child().op() == Op::announce && cur.child().rhs().op() == Op::neg) {
      out.push_back(cur.child().lhs());
      cur = cur.child().rhs().child();
    } else {
      return out;
    }
  }
}

/// Applies the announcement chain of f from (m, s). Stops early when the
/// designated state does not survive an announcement.
inline std::vector<DotStep> announcement_steps(const Model& m, StateIndex s, const Formula& f, Semantics kind) {
  std::vector<DotStep> steps;
  Model cur = kind == Semantics::adpal ? m.as_reflexive() : m;
  steps.push_back({cur, s, "initial", false});
  if (kind == Semantics::dbel) return steps;
  for (const Formula& ann : announcement_chain(f)) {
    UpdateResult r = update(kind, cur, ann);
    s = s == no_state ? no_state : r.image[s];
    steps.push_back({r.model, s, "[" + to_string(ann) + "]", kind == Semantics::dpal});
    cur = std::move(r.model);
    if (s == no_state) break;
  }
  return steps;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// "0.x" and "1.x" name the negative and positive copies of x.
inline bool cross_copy(const std::string& a, const std::string& b) {
  return a.size() > 1 && b.size() > 1 && a[1] == '.' && b[1] == '.' && a[0] != b[0];
}

inline std::string node_label(const Model& m, StateIndex s) {
  std::string label = dot_escape(m.state_name(s)) + "\\nd=(";
  for (AgentId a = 0; a < m.num_agents(); ++a) label += (a ? "," : "") + std::to_string(m.depth(a, s));
  return label + ")";
}

}  // namespace detail

inline std::string to_dot(const std::vector<DotStep>& steps) {
  std::ostringstream os;
  const auto& palette = dot_palette();
  os << "digraph dbel {\n  compound=true;\n  node [shape=ellipse, fontsize=10];\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const DotStep& st = steps[i];
    const Model& m = st.model;
    auto id = [&](StateIndex s) { return "\"" + std::to_string(i) + ":" + detail::dot_escape(m.state_name(s)) + "\""; };
    os << "  subgraph cluster_" << i << " {\n    label=\"" << detail::dot_escape(st.label) << "\";\n";
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      os << "    " << id(s) << " [label=\"" << detail::node_label(m, s) << "\"";
      if (s == st.designated) os << ", style=filled, fillcolor=green";
      os << "];\n";
    }
    for (AgentId a = 0; a < m.num_agents(); ++a) {
      const std::string& color = palette[a % palette.size()];
      for (StateIndex s = 0; s < m.num_states(); ++s)
        for (StateIndex t = 0; t < m.num_states(); ++t) {
          if (s == t || !m.related(a, s, t)) continue;
          bool both = m.related(a, t, s);
          if (both && t < s) continue;
          os << "    " << id(s) << " -> " << id(t) << " [color=" << color << ", label=\"" << a << "\"";
          if (both) os << ", dir=none";
          if (st.dpal_step && detail::cross_copy(m.state_name(s), m.state_name(t))) os << ", style=dashed";
          os << "];\n";
        }
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const Model& m, StateIndex designated = no_state) {
  return to_dot(std::vector<DotStep>{{m, designated, "model", false}});
}

}  // namespace dbel
