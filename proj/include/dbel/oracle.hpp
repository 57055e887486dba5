#pragma once

// Reference checker used to cross-examine the labeling engine.
//
// Deliberately naive: relations are dense boolean matrices, truth is
// computed per state by direct recursion, nothing is cached, and the DPAL
// closure is Warshall's algorithm rather than union-find. It shares no
// code with semantics.hpp beyond the formula and model types.

#include <string>
#include <vector>

#include "dbel/formula.hpp"
#include "dbel/model.hpp"

namespace dbel::oracle {

enum class Kind { dbel, dpal, edpal, adpal };

struct Explicit {
  std::size_t n = 0;
  std::size_t agents = 0;
  std::vector<std::vector<std::string>> val;
  std::vector<std::vector<std::vector<char>>> rel;  // rel[a][s][t]
  std::vector<std::vector<Depth>> depth;            // depth[a][s]
};

inline Explicit from_model(const Model& m) {
  Explicit e;
  e.n = m.num_states();
  e.agents = m.num_agents();
  for (StateIndex s = 0; s < e.n; ++s) e.val.push_back(m.atoms_at(s));
  e.rel.assign(e.agents, std::vector<std::vector<char>>(e.n, std::vector<char>(e.n, 0)));
  e.depth.assign(e.agents, std::vector<Depth>(e.n, 0));
  for (AgentId a = 0; a < e.agents; ++a)
    for (StateIndex s = 0; s < e.n; ++s) {
      e.depth[a][s] = m.depth(a, s);
      for (StateIndex t = 0; t < e.n; ++t) e.rel[a][s][t] = m.related(a, s, t) ? 1 : 0;
    }
  return e;
}

inline bool eval(const Explicit& m, std::size_t s, const Formula& f, Kind k);

inline Explicit announce(const Explicit& m, const Formula& phi, Kind k, std::vector<std::size_t>& point) {
  const Depth dphi = phi.modal_depth();
  std::vector<char> truth(m.n);
  for (std::size_t s = 0; s < m.n; ++s) truth[s] = eval(m, s, phi, k);
  Explicit r;
  r.agents = m.agents;
  point.assign(m.n, static_cast<std::size_t>(-1));
  if (k == Kind::edpal) {
    for (std::size_t s = 0; s < m.n; ++s)
      if (truth[s]) point[s] = r.n++;
    r.val.resize(r.n);
    r.rel.assign(m.agents, std::vector<std::vector<char>>(r.n, std::vector<char>(r.n, 0)));
    r.depth.assign(m.agents, std::vector<Depth>(r.n, 0));
    for (std::size_t s = 0; s < m.n; ++s) {
      if (!truth[s]) continue;
      r.val[point[s]] = m.val[s];
      for (std::size_t a = 0; a < m.agents; ++a) {
        r.depth[a][point[s]] = m.depth[a][s] - dphi;
        for (std::size_t t = 0; t < m.n; ++t)
          if (truth[t]) r.rel[a][point[s]][point[t]] = m.rel[a][s][t];
      }
    }
    return r;
  }
  if (k == Kind::adpal) {
    r = m;
    for (std::size_t s = 0; s < m.n; ++s) point[s] = s;
    for (std::size_t a = 0; a < m.agents; ++a)
      for (std::size_t s = 0; s < m.n; ++s) {
        if (m.depth[a][s] < dphi) continue;
        r.depth[a][s] -= dphi;
        for (std::size_t t = 0; t < m.n; ++t)
          if (truth[s] != truth[t]) r.rel[a][s][t] = 0;
      }
    return r;
  }
  // DPAL: states 0..n-1 are (0,s); (1,s) follow for true s.
  std::vector<std::size_t> base;  // new index -> old state
  for (std::size_t s = 0; s < m.n; ++s) base.push_back(s);
  for (std::size_t s = 0; s < m.n; ++s)
    if (truth[s]) {
      point[s] = base.size();
      base.push_back(s);
    }
  r.n = base.size();
  r.val.resize(r.n);
  r.rel.assign(m.agents, std::vector<std::vector<char>>(r.n, std::vector<char>(r.n, 0)));
  r.depth.assign(m.agents, std::vector<Depth>(r.n, 0));
  for (std::size_t i = 0; i < r.n; ++i) r.val[i] = m.val[base[i]];
  for (std::size_t a = 0; a < m.agents; ++a) {
    for (std::size_t i = 0; i < r.n; ++i) {
      const bool positive = i >= m.n;
      const Depth d = m.depth[a][base[i]];
      r.depth[a][i] = positive && d >= dphi ? d - dphi : d;
      for (std::size_t j = 0; j < r.n; ++j)
        if ((i >= m.n) == (j >= m.n)) r.rel[a][i][j] = m.rel[a][base[i]][base[j]];
    }
    for (std::size_t s = 0; s < m.n; ++s)
      if (truth[s] && m.depth[a][s] < dphi) {
        r.rel[a][point[s]][s] = 1;
        r.rel[a][s][point[s]] = 1;
      }
    auto& R = r.rel[a];
    for (std::size_t x = 0; x < r.n; ++x)
      for (std::size_t i = 0; i < r.n; ++i)
        if (R[i][x])
          for (std::size_t j = 0; j < r.n; ++j)
            if (R[x][j]) R[i][j] = 1;
  }
  return r;
}

inline bool eval(const Explicit& m, std::size_t s, const Formula& f, Kind k) {
  switch (f.op()) {
    case Op::atom: {
      if (f.is_top()) return true;
      for (const auto& p : m.val[s])
        if (p == f.atom_name()) return true;
      return false;
    }
    case Op::exact:
      return m.depth[f.agent()][s] == f.depth_constant();
    case Op::at_least:
      return m.depth[f.agent()][s] >= f.depth_constant();
    case Op::neg:
      return !eval(m, s, f.child(), k);
    case Op::conj:
      return eval(m, s, f.lhs(), k) && eval(m, s, f.rhs(), k);
    case Op::know:
      if (m.depth[f.agent()][s] < f.child().modal_depth()) return false;
      [[fallthrough]];
    case Op::know_inf:
      for (std::size_t t = 0; t < m.n; ++t)
        if (m.rel[f.agent()][s][t] && !eval(m, t, f.child(), k)) return false;
      return true;
    case Op::announce: {
      if (!eval(m, s, f.lhs(), k)) return true;
      std::vector<std::size_t> point;
      Explicit u = announce(m, f.lhs(), k, point);
      return eval(u, point[s], f.rhs(), k);
    }
  }
  return false;
}

/// (m, s) |= f by direct recursion.
inline bool check(const Model& m, StateIndex s, const Formula& f, Kind k) { return eval(from_model(m), s, f, k); }

}  // namespace dbel::oracle
