#pragma once

// JSON model files.
//
//   {
//     "agents": 2,
//     "depth":  [ {"s0": 1, "s1": 0}, {"s0": 2, "s1": 2} ],   // agent -> state -> int
//     "mode":   "equivalence",                                  // or "reflexive"
//     "rel":    [ [["s0", "s1"]], [] ],                         // agent -> state pairs
//     "states": ["s0", "s1"],
//     "val":    {"s0": ["p"], "s1": []}
//   }
//
// Reflexive pairs are implicit. In equivalence mode a pair relates its two
// states in both directions and the transitive closure is taken on load.
// save_model() output is canonical: sorted keys, states in declaration
// order, so load/save round-trips byte for byte.

#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbel/model.hpp"

namespace dbel {

inline constexpr Depth max_file_depth = INT32_MAX;
inline constexpr Depth min_file_depth = INT32_MIN;

struct LoadedModel {
  Model model;
  std::vector<std::string> warnings;
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace detail

inline LoadedModel model_from_json(const nlohmann::json& j) {
  using nlohmann::json;
  auto require = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw ModelError(std::string("model file is missing '") + key + "'");
    return j.at(key);
  };
  if (!j.is_object()) throw ModelError("model file must be a JSON object");
  std::vector<std::string> warnings;

  const json& jagents = require("agents");
  if (!jagents.is_number_integer() || jagents.get<std::int64_t>() < 0)
    throw ModelError("'agents' must be a non-negative integer");
  const auto agents = jagents.get<std::size_t>();

  std::vector<std::string> states;
  for (const auto& s : require("states")) {
    if (!s.is_string()) throw ModelError("state names must be strings");
    states.push_back(s.get<std::string>());
  }
  std::unordered_map<std::string, StateIndex> index;
  for (StateIndex i = 0; i < states.size(); ++i)
    if (!index.emplace(states[i], i).second) throw ModelError("duplicate state '" + states[i] + "'");
  auto lookup = [&](const json& name) {
    if (!name.is_string()) throw ModelError("state references must be strings");
    auto it = index.find(name.get<std::string>());
    if (it == index.end()) throw ModelError("unknown state '" + name.get<std::string>() + "'");
    return it->second;
  };

  RelationMode mode = RelationMode::equivalence;
  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "reflexive") mode = RelationMode::reflexive;
    else if (m != "equivalence") throw ModelError("unknown mode '" + m + "'");
  }

  std::vector<std::vector<std::string>> val(states.size());
  if (j.contains("val")) {
    for (const auto& [name, atoms] : j.at("val").items()) {
      StateIndex s = lookup(json(name));
      for (const auto& p : atoms) val[s].push_back(p.get<std::string>());
    }
  }

  std::vector<std::vector<Depth>> depth(agents, std::vector<Depth>(states.size(), 0));
  if (j.contains("depth")) {
    const json& jd = j.at("depth");
    if (!jd.is_array() || jd.size() != agents) throw ModelError("'depth' must list one object per agent");
    for (std::size_t a = 0; a < agents; ++a) {
      for (const auto& [name, d] : jd[a].items()) {
        if (!d.is_number_integer()) throw ModelError("depths must be integers");
        auto v = d.get<std::int64_t>();
        if (v > max_file_depth || v < min_file_depth) throw ModelError("depth out of range for '" + name + "'");
        depth[a][lookup(json(name))] = v;
      }
    }
  }

  std::vector<std::vector<std::pair<StateIndex, StateIndex>>> pairs(agents);
  if (j.contains("rel")) {
    const json& jr = j.at("rel");
    if (!jr.is_array() || jr.size() != agents) throw ModelError("'rel' must list one pair list per agent");
    for (std::size_t a = 0; a < agents; ++a) {
      for (const auto& p : jr[a]) {
        if (!p.is_array() || p.size() != 2) throw ModelError("relation entries must be [from, to] pairs");
        pairs[a].emplace_back(lookup(p[0]), lookup(p[1]));
      }
    }
  }

  if (mode == RelationMode::equivalence) {
    std::vector<std::vector<std::size_t>> labels(agents);
    for (std::size_t a = 0; a < agents; ++a) {
      detail::UnionFind uf(states.size());
      std::set<std::pair<StateIndex, StateIndex>> given;
      for (auto [s, t] : pairs[a]) {
        uf.unite(s, t);
        if (s != t) given.emplace(std::min(s, t), std::max(s, t));
      }
      std::vector<std::size_t> class_size(states.size(), 0);
      for (StateIndex s = 0; s < states.size(); ++s) ++class_size[uf.find(s)];
      std::size_t needed = 0;
      for (std::size_t k : class_size) needed += k * (k - (k > 0 ? 1 : 0)) / 2;
      if (needed != given.size())
        warnings.push_back("agent " + std::to_string(a) + ": transitive closure added " +
                           std::to_string(needed - given.size()) + " pair(s)");
      for (StateIndex s = 0; s < states.size(); ++s) labels[a].push_back(uf.find(s));
    }
    return {Model::equivalence(std::move(states), std::move(val), labels, std::move(depth)), std::move(warnings)};
  }
  std::vector<std::vector<std::vector<StateIndex>>> succ(agents, std::vector<std::vector<StateIndex>>(states.size()));
  for (std::size_t a = 0; a < agents; ++a)
    for (auto [s, t] : pairs[a]) succ[a][s].push_back(t);
  return {Model::reflexive(std::move(states), std::move(val), std::move(succ), std::move(depth)), std::move(warnings)};
}

inline nlohmann::json model_to_json(const Model& m) {
  using nlohmann::json;
  json j = json::object();
  j["agents"] = m.num_agents();
  j["mode"] = std::string(to_string(m.mode()));
  j["states"] = m.state_names();
  json val = json::object();
  for (StateIndex s = 0; s < m.num_states(); ++s) val[m.state_name(s)] = m.atoms_at(s);
  j["val"] = val;
  json depth = json::array();
  json rel = json::array();
  for (AgentId a = 0; a < m.num_agents(); ++a) {
    json d = json::object();
    for (StateIndex s = 0; s < m.num_states(); ++s) d[m.state_name(s)] = m.depth(a, s);
    depth.push_back(d);
    json pairs = json::array();
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      if (m.mode() == RelationMode::equivalence) {
        for (StateIndex t : m.neighbours(a, s))
          if (t > s) pairs.push_back({m.state_name(s), m.state_name(t)});
      } else {
        for (StateIndex t : m.successors(a, s)) pairs.push_back({m.state_name(s), m.state_name(t)});
      }
    }
    rel.push_back(pairs);
  }
  j["depth"] = depth;
  j["rel"] = rel;
  return j;
}

inline std::string save_model(const Model& m) { return model_to_json(m).dump(2) + "\n"; }

inline LoadedModel load_model_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("invalid model file: ") + e.what());
  }
}

inline LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model_string(ss.str());
}

}  // namespace dbel
