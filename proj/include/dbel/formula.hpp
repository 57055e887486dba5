#pragma once

// Formula AST for depth-bounded epistemic logic with public announcements.
//
// Formulas are immutable and share structure through reference-counted
// nodes, so copying a Formula is cheap and subtrees may be shared freely
// between threads. Derived connectives (or, implies, iff, top, bottom, dual
// announcement) are desugared by the builders below; the core node kinds are
// the only ones the checker ever sees.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace dbel {

using AgentId = std::uint32_t;
using Depth = std::int64_t;

enum class Op : std::uint8_t {
  atom,
  exact,     // E[a,d]: agent a has depth exactly d
  at_least,  // P[a,d]: agent a has depth at least d
  neg,
  conj,
  know,      // K[a]
  know_inf,  // Kinf[a]
  announce,  // [phi]psi
};

/// Reserved atom name standing for the constant true.
inline constexpr std::string_view top_atom = "true";

class Formula {
 public:
  struct Node;

  Op op() const;
  const std::string& atom_name() const;
  AgentId agent() const;
  /// Depth constant of an E/P atom.
  Depth depth_constant() const;

  /// Operand of neg/know/know_inf.
  const Formula& child() const;
  /// Left operand of conj, announced formula of announce.
  const Formula& lhs() const;
  /// Right operand of conj, body of announce.
  const Formula& rhs() const;

  /// Modal depth, computed once at construction.
  std::int64_t modal_depth() const;
  /// Number of nodes of the syntax tree (saturating).
  std::uint64_t size() const;

  bool is_top() const { return op() == Op::atom && atom_name() == top_atom; }
  bool is_negation() const { return op() == Op::neg; }

  /// Identity of the underlying node; stable for the lifetime of the formula.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

  // Raw constructors used by the builders.
  static Formula make_atom(std::string name);
  static Formula make_depth_atom(Op op, AgentId agent, Depth d);
  static Formula make_unary(Op op, AgentId agent, Formula operand);
  static Formula make_binary(Op op, Formula lhs, Formula rhs);

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  AgentId agent = 0;
  Depth value = 0;
  std::string name;
  Formula lhs{nullptr};
  Formula rhs{nullptr};
  std::int64_t modal_depth = 0;
  std::uint64_t size = 1;
};

inline Op Formula::op() const { return node_->op; }
inline const std::string& Formula::atom_name() const { return node_->name; }
inline AgentId Formula::agent() const { return node_->agent; }
inline Depth Formula::depth_constant() const { return node_->value; }
inline const Formula& Formula::child() const { return node_->lhs; }
inline const Formula& Formula::lhs() const { return node_->lhs; }
inline const Formula& Formula::rhs() const { return node_->rhs; }
inline std::int64_t Formula::modal_depth() const { return node_->modal_depth; }
inline std::uint64_t Formula::size() const { return node_->size; }

namespace detail {
inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                          : a + b;
}
}  // namespace detail

inline Formula Formula::make_atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::atom;
  n->name = std::move(name);
  return Formula(std::move(n));
}

inline Formula Formula::make_depth_atom(Op op, AgentId agent, Depth d) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->agent = agent;
  n->value = d;
  return Formula(std::move(n));
}

inline Formula Formula::make_unary(Op op, AgentId agent, Formula operand) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->agent = agent;
  n->modal_depth = operand.modal_depth() + (op == Op::neg ? 0 : 1);
  n->size = detail::saturating_add(operand.size(), 1);
  n->lhs = std::move(operand);
  return Formula(std::move(n));
}

inline Formula Formula::make_binary(Op op, Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->modal_depth = op == Op::conj ? std::max(lhs.modal_depth(), rhs.modal_depth())
                                  : lhs.modal_depth() + rhs.modal_depth();
  n->size = detail::saturating_add(detail::saturating_add(lhs.size(), rhs.size()), 1);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.size() != b.size()) return false;
  switch (a.op()) {
    case Op::atom:
      return a.atom_name() == b.atom_name();
    case Op::exact:
    case Op::at_least:
      return a.agent() == b.agent() && a.depth_constant() == b.depth_constant();
    case Op::neg:
      return a.child() == b.child();
    case Op::know:
    case Op::know_inf:
      return a.agent() == b.agent() && a.child() == b.child();
    case Op::conj:
    case Op::announce:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Builders

inline Formula atom(std::string name) { return Formula::make_atom(std::move(name)); }
inline Formula top() { return atom(std::string(top_atom)); }
inline Formula exact(AgentId a, Depth d) { return Formula::make_depth_atom(Op::exact, a, d); }
inline Formula at_least(AgentId a, Depth d) { return Formula::make_depth_atom(Op::at_least, a, d); }
inline Formula neg(Formula f) { return Formula::make_unary(Op::neg, 0, std::move(f)); }
inline Formula bottom() { return neg(top()); }
inline Formula conj(Formula a, Formula b) { return Formula::make_binary(Op::conj, std::move(a), std::move(b)); }
inline Formula know(AgentId a, Formula f) { return Formula::make_unary(Op::know, a, std::move(f)); }
inline Formula know_inf(AgentId a, Formula f) { return Formula::make_unary(Op::know_inf, a, std::move(f)); }
inline Formula announce(Formula announced, Formula body) {
  return Formula::make_binary(Op::announce, std::move(announced), std::move(body));
}

// Derived connectives, stored desugared.
inline Formula disj(Formula a, Formula b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }
inline Formula implies(Formula a, Formula b) { return neg(conj(std::move(a), neg(std::move(b)))); }
inline Formula iff(const Formula& a, const Formula& b) { return conj(implies(a, b), implies(b, a)); }
/// <phi>psi := ![phi]!psi
inline Formula dual_announce(Formula announced, Formula body) {
  return neg(announce(std::move(announced), neg(std::move(body))));
}

/// Left-nested conjunction; top() for an empty list.
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

/// Left-nested disjunction; bottom() for an empty list.
inline Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

/// K[a] applied `times` times to f.
inline Formula know_power(AgentId a, std::size_t times, Formula f) {
  for (std::size_t i = 0; i < times; ++i) f = know(a, std::move(f));
  return f;
}

inline std::int64_t modal_depth(const Formula& f) { return f.modal_depth(); }

// ---------------------------------------------------------------------------
// Traversal helpers

/// Calls fn on every node of the DAG exactly once (shared nodes visited once).
inline void for_each_node(const Formula& f, const std::function<void(const Formula&)>& fn) {
  std::unordered_set<const void*> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur.id()).second) continue;
    fn(cur);
    switch (cur.op()) {
      case Op::neg:
      case Op::know:
      case Op::know_inf:
        stack.push_back(cur.child());
        break;
      case Op::conj:
      case Op::announce:
        stack.push_back(cur.rhs());
        stack.push_back(cur.lhs());
        break;
      default:
        break;
    }
  }
}

/// Number of distinct nodes, i.e. the size of the formula as a shared DAG.
inline std::size_t dag_size(const Formula& f) {
  std::size_t n = 0;
  for_each_node(f, [&](const Formula&) { ++n; });
  return n;
}

inline bool contains_op(const Formula& f, Op op) {
  bool found = false;
  for_each_node(f, [&](const Formula& g) { found = found || g.op() == op; });
  return found;
}

/// Atom names occurring in f, excluding the reserved top atom.
inline std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  for_each_node(f, [&](const Formula& g) {
    if (g.op() == Op::atom && !g.is_top()) out.insert(g.atom_name());
  });
  return out;
}

/// One past the largest agent id mentioned, or 0.
inline std::size_t agent_bound(const Formula& f) {
  std::size_t n = 0;
  for_each_node(f, [&](const Formula& g) {
    switch (g.op()) {
      case Op::exact:
      case Op::at_least:
      case Op::know:
      case Op::know_inf:
        n = std::max<std::size_t>(n, g.agent() + 1);
        break;
      default:
        break;
    }
  });
  return n;
}

/// Largest depth constant of an E/P atom, or 0.
inline Depth max_depth_constant(const Formula& f) {
  Depth d = 0;
  for_each_node(f, [&](const Formula& g) {
    if (g.op() == Op::exact || g.op() == Op::at_least) d = std::max(d, g.depth_constant());
  });
  return d;
}

// ---------------------------------------------------------------------------
// Syntactic fragments

enum class Fragment {
  L,     // no Kinf
  LInf,  // everything
  H,     // no Kinf, no announcements
  HInf,  // no announcements
  La,    // no depth atoms, modal operators only for one agent
};

/// Membership test. `agent` is only consulted for Fragment::La; announced
/// formulas nested inside are held to the same single-agent restriction.
inline bool in_fragment(const Formula& f, Fragment frag, AgentId agent = 0) {
  bool ok = true;
  for_each_node(f, [&](const Formula& g) {
    switch (g.op()) {
      case Op::know_inf:
        if (frag == Fragment::L || frag == Fragment::H) ok = false;
        if (frag == Fragment::La && g.agent() != agent) ok = false;
        break;
      case Op::know:
        if (frag == Fragment::La && g.agent() != agent) ok = false;
        break;
      case Op::announce:
        if (frag == Fragment::H || frag == Fragment::HInf) ok = false;
        break;
      case Op::exact:
      case Op::at_least:
        if (frag == Fragment::La) ok = false;
        break;
      default:
        break;
    }
  });
  return ok;
}

}  // namespace dbel
