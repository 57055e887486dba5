#pragma once

#include <ostream>
#include <string>

#include "dbel/formula.hpp"

namespace dbel {

namespace detail {

// Precedence levels, loosest first: 0 iff, 1 implies, 2 or, 3 and, 4 unary, 5 atomic.
// Desugared or/implies/dual/bottom shapes are printed in their sugared form,
// which the parser maps back to the identical tree.
class Printer {
 public:
  std::string out;

  void print(const Formula& f, int min_level) {
    int level = level_of(f);
    if (level < min_level) out += '(';
    emit(f);
    if (level < min_level) out += ')';
  }

 private:
  static bool is_bottom(const Formula& f) { return f.op() == Op::neg && f.child().is_top(); }
  static bool is_or(const Formula& f) {
    return f.op() == Op::neg && f.child().op() == Op::conj && f.child().lhs().op() == Op::neg &&
           f.child().rhs().op() == Op::neg;
  }
  static bool is_implies(const Formula& f) {
    return f.op() == Op::neg && f.child().op() == Op::conj && f.child().rhs().op() == Op::neg;
  }
  static bool is_dual(const Formula& f) {
    return f.op() == Op::neg && f.child().op() == Op::announce && f.child().rhs().op() == Op::neg;
  }

  static int level_of(const Formula& f) {
    switch (f.op()) {
      case Op::atom:
      case Op::exact:
      case Op::at_least:
        return 5;
      case Op::neg:
        if (is_bottom(f)) return 5;
        if (is_or(f)) return 2;
        if (is_implies(f)) return 1;
        return 4;
      case Op::conj:
        return 3;
      default:
        return 4;
    }
  }

  void emit(const Formula& f) {
    switch (f.op()) {
      case Op::atom:
        out += f.atom_name();
        return;
      case Op::exact:
      case Op::at_least:
        out += f.op() == Op::exact ? "E[" : "P[";
        out += std::to_string(f.agent());
        out += ',';
        out += std::to_string(f.depth_constant());
        out += ']';
        return;
      case Op::neg:
        if (is_bottom(f)) {
          out += "false";
        } else if (is_or(f)) {
          print(f.child().lhs().child(), 2);
          out += " | ";
          print(f.child().rhs().child(), 3);
        } else if (is_implies(f)) {
          print(f.child().lhs(), 2);
          out += " -> ";
          print(f.child().rhs().child(), 1);
        } else if (is_dual(f)) {
          out += '<';
          print(f.child().lhs(), 0);
          out += '>';
          print(f.child().rhs().child(), 4);
        } else {
          out += '!';
          print(f.child(), 4);
        }
        return;
      case Op::conj:
        print(f.lhs(), 3);
        out += " & ";
        print(f.rhs(), 4);
        return;
      case Op::know:
      case Op::know_inf:
        out += f.op() == Op::know ? "K[" : "Kinf[";
        out += std::to_string(f.agent());
        out += "] ";
        print(f.child(), 4);
        return;
      case Op::announce:
        out += '[';
        print(f.lhs(), 0);
        out += ']';
        print(f.rhs(), 4);
        return;
    }
  }
};

}  // namespace detail

/// Renders f in the ASCII grammar accepted by parse().
inline std::string to_string(const Formula& f) {
  detail::Printer p;
  p.print(f, 0);
  return std::move(p.out);
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

}  // namespace dbel
