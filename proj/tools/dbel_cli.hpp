#pragma once

// Command-line front end. run() is kept separate from main() so the tests
// can drive it in-process.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbel/dbel.hpp"

namespace dbel::cli {

enum ExitCode : int { ok = 0, violations = 1, parse_error = 2, validation_error = 3 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot write " + path);
  f << text;
}

inline Formula formula_arg(const std::string& inline_text, const std::string& file) {
  if (!file.empty()) return parse(read_file(file));
  if (inline_text.empty()) throw ParseError("no formula given", 1, 1);
  return parse(inline_text);
}

inline Semantics semantics_arg(const std::string& s) {
  auto k = parse_semantics(s);
  if (!k) throw ParseError("unknown semantics '" + s + "' (expected DBEL, DPAL, EDPAL or ADPAL)", 1, 1);
  return *k;
}

inline StateIndex state_arg(const Model& m, const std::string& s) {
  if (auto i = m.find_state(s)) return *i;
  throw ModelError("unknown state '" + s + "'");
}

inline Model load(const std::string& path, std::ostream& err) {
  LoadedModel lm = load_model_file(path);
  for (const auto& w : lm.warnings) err << "warning: " << w << "\n";
  return std::move(lm.model);
}

// Depth list "2,1,0", "canonical", or an integer expression in i, n, k.
class DepthExpr {
 public:
  DepthExpr(std::string text, std::int64_t i, std::int64_t n, std::int64_t k) : t_(std::move(text)), i_(i), n_(n), k_(k) {}
  std::int64_t eval() {
    std::int64_t v = sum();
    skip();
    if (pos_ != t_.size()) bad();
    return v;
  }

 private:
  std::string t_;
  std::size_t pos_ = 0;
  std::int64_t i_, n_, k_;

  [[noreturn]] void bad() { throw ParseError("bad depth expression '" + t_ + "'", 1, pos_ + 1); }
  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  std::int64_t sum() {
    std::int64_t v = product();
    for (skip(); pos_ < t_.size() && (t_[pos_] == '+' || t_[pos_] == '-'); skip()) {
      char op = t_[pos_++];
      std::int64_t r = product();
      v = op == '+' ? v + r : v - r;
    }
    return v;
  }
  std::int64_t product() {
    std::int64_t v = unary();
    for (skip(); pos_ < t_.size() && t_[pos_] == '*'; skip()) {
      ++pos_;
      v *= unary();
    }
    return v;
  }
  std::int64_t unary() {
    skip();
    if (pos_ < t_.size() && t_[pos_] == '-') {
      ++pos_;
      return -unary();
    }
    if (pos_ < t_.size() && t_[pos_] == '(') {
      ++pos_;
      std::int64_t v = sum();
      skip();
      if (pos_ >= t_.size() || t_[pos_] != ')') bad();
      ++pos_;
      return v;
    }
    if (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) {
      std::int64_t v = 0;
      while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) v = v * 10 + (t_[pos_++] - '0');
      return v;
    }
    if (pos_ < t_.size()) {
      char c = t_[pos_++];
      if (c == 'i') return i_;
      if (c == 'n') return n_;
      if (c == 'k') return k_;
    }
    bad();
  }
};

inline std::vector<Depth> muddy_depths(const std::string& spec, std::size_t n, std::size_t k) {
  if (spec.empty() || spec == "canonical") {
    std::vector<Depth> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<Depth>(k) - 1 - static_cast<Depth>(i);
    return d;
  }
  if (spec.find(',') != std::string::npos) {
    std::vector<Depth> d;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) d.push_back(DepthExpr(item, 0, n, k).eval());
    if (d.size() != n) throw MuddyError("expected " + std::to_string(n) + " depths, got " + std::to_string(d.size()));
    return d;
  }
  std::vector<Depth> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = DepthExpr(spec, static_cast<std::int64_t>(i), n, k).eval();
  return d;
}

inline Formula muddy_formula(const std::string& name, std::size_t k) {
  if (name == "phi_k" || name == "phi") return phi_k(k);
  if (name == "upper") return upper_bound_formula(k);
  if (name == "lower") return lower_bound_formula(k);
  if (name == "amnesia") return muddy_amnesia_formula();
  if (name == "leakage") return muddy_leakage_formula();
  throw ParseError("unknown muddy formula '" + name + "' (phi_k, upper, lower, amnesia, leakage)", 1, 1);
}

// Whether a (table, semantics) run is one the theory says should be clean.
inline bool expected_sound(AxiomTable t, Semantics k) { return home_semantics(t) == k; }

// DPAL satisfies all four; EDPAL only TA (KP fails in reverse).
inline bool expected_sound(KpVariant v, Semantics k) {
  return k == Semantics::dpal || (k == Semantics::edpal && v == KpVariant::TA);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_check(const std::string& model_path, const std::string& state, const std::string& text,
                     const std::string& file, const std::string& sem, bool all, std::ostream& out, std::ostream& err) {
  Semantics kind = detail::semantics_arg(sem);
  Formula f = detail::formula_arg(text, file);
  Model m = detail::load(model_path, err);
  require_admissible(m, f, kind);
  std::vector<bool> truth = evaluate(m, f, kind);
  if (all) {
    for (StateIndex s = 0; s < m.num_states(); ++s) out << m.state_name(s) << " " << (truth[s] ? "true" : "false") << "\n";
    return ok;
  }
  StateIndex s = state.empty() ? 0 : detail::state_arg(m, state);
  out << (truth[s] ? "true" : "false") << "\n";
  return ok;
}

inline int cmd_update(const std::string& model_path, const std::string& text, const std::string& file,
                      const std::string& sem, const std::string& out_path, std::ostream& out, std::ostream& err) {
  Semantics kind = detail::semantics_arg(sem);
  Formula f = detail::formula_arg(text, file);
  Model m = detail::load(model_path, err);
  require_admissible(m, announce(f, top()), kind);
  UpdateResult r = update(kind, m, f);
  detail::write_output(out_path, save_model(r.model), out);
  return ok;
}

inline int cmd_sat(const std::string& text, const std::string& file, const std::string& sem, std::size_t max_states,
                   Depth max_depth, std::uint64_t budget, const std::string& out_path, std::ostream& out,
                   std::ostream& err) {
  Semantics kind = detail::semantics_arg(sem);
  Formula f = detail::formula_arg(text, file);
  auto r = sat_bruteforce(f, kind, {max_states, max_depth, budget});
  if (!r) {
    out << "none-within-bounds\n";
    return ok;
  }
  err << "satisfied at state " << r->model.state_name(r->state) << "\n";
  detail::write_output(out_path, save_model(r->model), out);
  return ok;
}

inline int cmd_muddy(std::size_t n, std::size_t k, const std::string& depths, const std::string& sem,
                     const std::string& which, const std::string& dot_path, std::ostream& out, std::ostream& err) {
  Semantics kind = detail::semantics_arg(sem);
  if (kind == Semantics::dbel) throw SemanticsError("muddy formulas contain announcements; pick DPAL, EDPAL or ADPAL");
  if (n == 0) n = k;
  MuddyInstance inst = build_muddy(n, k, detail::muddy_depths(depths, n, k));
  Formula f = detail::muddy_formula(which, k);
  if (!in_fragment(f, Fragment::L)) err << "note: formula uses KInf and lies outside the L fragment\n";
  bool v = check(inst.model, inst.initial, f, kind);
  out << (v ? "true" : "false") << "\n";
  if (!dot_path.empty()) {
    Formula chain = which == "upper" || which == "lower" ? phi_k(k) : f;
    detail::write_output(dot_path, to_dot(announcement_steps(inst.model, inst.initial, chain, kind)), out);
  }
  return ok;
}

inline void print_suite(const SuiteReport& rep, std::ostream& out) {
  out << "checks " << rep.checks << "\n";
  out << "violations " << rep.violation_count << "\n";
  out << "checker_disagreements " << rep.checker_disagreements << "\n";
  for (const auto& [name, n] : rep.instances_by_schema) {
    auto it = rep.violations_by_schema.find(name);
    out << "  " << name << ": " << n << " instances, " << (it == rep.violations_by_schema.end() ? 0 : it->second)
        << " violations\n";
  }
  for (const auto& v : rep.violations)
    out << "violation " << v.schema << " at " << v.model.state_name(v.state) << ": " << to_string(v.instance) << "\n";
}

inline int cmd_axioms(const std::string& table_name, const std::string& sem, const std::string& kp,
                      std::size_t instances, std::size_t models, std::uint64_t seed, std::size_t max_states,
                      Depth max_depth, bool unambiguous, std::ostream& out) {
  if (!kp.empty()) {
    auto v = parse_kp_variant(kp);
    if (!v) throw ParseError("unknown variant '" + kp + "' (KP, TA, KPp, TAp)", 1, 1);
    Semantics kind = detail::semantics_arg(sem.empty() ? "DPAL" : sem);
    KpTaOptions opt;
    opt.cases = instances;
    opt.spec.seed = seed;
    opt.spec.max_states = max_states;
    opt.spec.max_depth = max_depth;
    opt.spec.unambiguous = unambiguous;
    KpTaReport rep = kp_ta_suite(kind, *v, opt);
    out << to_string(*v) << " under " << to_string(kind) << "\n";
    out << "cases " << rep.cases << "\npremised " << rep.premised << "\nskipped " << rep.skipped << "\n";
    out << "forward_violations " << rep.forward_violations << "\nreverse_violations " << rep.reverse_violations << "\n";
    bool expected = detail::expected_sound(*v, kind);
    if (!expected) out << "exploratory run: violations are not an error\n";
    return expected && (rep.forward_violations || rep.reverse_violations) ? violations : ok;
  }
  auto table = parse_table(table_name);
  if (!table) throw ParseError("unknown table '" + table_name + "' (T1, T3, DPAL_SOUND)", 1, 1);
  Semantics kind = sem.empty() ? home_semantics(*table) : detail::semantics_arg(sem);
  SuiteOptions opt;
  opt.instantiations = instances;
  opt.models = models;
  opt.spec.seed = seed;
  opt.spec.max_states = max_states;
  opt.spec.max_depth = max_depth;
  opt.spec.unambiguous = unambiguous;
  SuiteReport rep = soundness_suite(*table, kind, opt);
  out << to_string(*table) << " under " << to_string(kind) << "\n";
  print_suite(rep, out);
  bool expected = detail::expected_sound(*table, kind);
  if (!expected) out << "exploratory run: violations are not an error\n";
  return expected && (rep.violation_count || rep.checker_disagreements) ? violations : ok;
}

struct BenchRow {
  std::string family;
  std::size_t instance = 0;
  std::string step;  // "update" or "check"
  std::uint64_t formula_size = 0;
  std::uint64_t model_norm = 0;
  std::int64_t wall_ns = 0;
  std::uint64_t result_norm = 0;
};

inline std::int64_t elapsed_ns(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
}

/// DPAL blowup on random models, then the 3-SAT family for n = 1..max_vars.
inline std::vector<BenchRow> bench_rows(const std::string& family, std::uint64_t seed, std::size_t cases,
                                        std::size_t max_vars) {
  std::vector<BenchRow> rows;
  if (family == "dpal" || family == "all") {
    RandomSpec spec{8, 2, 3, 5, 2, seed, false};
    Random r(seed);
    for (std::size_t i = 0; i < cases; ++i) {
      Model m = r.model(spec);
      Formula phi = r.formula(spec, FormulaShape::with_announcements());
      auto t0 = std::chrono::steady_clock::now();
      UpdateResult u = update_dpal(m, phi);
      rows.push_back({"dpal", i, "update", phi.size(), norm(m), elapsed_ns(t0), norm(u.model)});
    }
  }
  if (family == "3sat" || family == "all") {
    Random r(seed);
    for (std::size_t n = 1; n <= max_vars; ++n) {
      ThreeSatInstance inst{n, {}};
      for (std::size_t c = 0; c < n + 1; ++c) {
        std::array<int, 3> cl{};
        for (int& lit : cl) lit = static_cast<int>(r.index(n) + 1) * (r.coin() ? 1 : -1);
        inst.clauses.push_back(cl);
      }
      Reduction red = reduce_3sat(inst);
      Model cur = red.model;
      for (const Formula& ann : red.announcements) {
        auto t0 = std::chrono::steady_clock::now();
        UpdateResult u = update_dpal(cur, ann);
        rows.push_back({"3sat", n, "update", ann.size(), norm(cur), elapsed_ns(t0), norm(u.model)});
        cur = std::move(u.model);
      }
      auto t0 = std::chrono::steady_clock::now();
      bool v = check(red.model, 0, red.formula, Semantics::dpal);
      (void)v;
      rows.push_back({"3sat", n, "check", red.formula.size(), norm(red.model), elapsed_ns(t0), norm(cur)});
    }
  }
  return rows;
}

/// Largest t / (2^(2|phi|) * ||M||) over the check rows.
inline long double fit_exptime_constant(const std::vector<BenchRow>& rows) {
  long double c = 0;
  for (const auto& r : rows) {
    if (r.step != "check") continue;
    long double denom = std::pow(2.0L, 2.0L * static_cast<long double>(r.formula_size)) * static_cast<long double>(r.model_norm);
    c = std::max(c, static_cast<long double>(r.wall_ns) / denom);
  }
  return c;
}

inline int cmd_bench(const std::string& family, std::uint64_t seed, std::size_t cases, std::size_t max_vars,
                     const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (family != "dpal" && family != "3sat" && family != "all")
    throw ParseError("unknown bench family '" + family + "' (dpal, 3sat, all)", 1, 1);
  auto rows = bench_rows(family, seed, cases, max_vars);
  std::ostringstream csv;
  csv << "family,instance,step,formula_size,model_norm,wall_ns,result_norm\n";
  for (const auto& r : rows)
    csv << r.family << "," << r.instance << "," << r.step << "," << r.formula_size << "," << r.model_norm << ","
        << r.wall_ns << "," << r.result_norm << "\n";
  detail::write_output(out_path, csv.str(), out);
  if (family != "dpal") err << "fitted c = " << std::scientific << std::setprecision(3) << fit_exptime_constant(rows) << " ns\n";
  return ok;
}

inline int cmd_export_dot(const std::string& model_path, const std::string& state, const std::string& text,
                          const std::string& file, const std::string& sem, const std::string& out_path,
                          std::ostream& out, std::ostream& err) {
  Semantics kind = detail::semantics_arg(sem);
  Model m = detail::load(model_path, err);
  StateIndex s = state.empty() ? no_state : detail::state_arg(m, state);
  Formula f = text.empty() && file.empty() ? top() : detail::formula_arg(text, file);
  require_admissible(m, f, kind);
  detail::write_output(out_path, to_dot(announcement_steps(m, s, f, kind)), out);
  return ok;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Model checker for depth-bounded epistemic logic and its announcement extensions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dbel 0.1.0");

  std::string model, state, formula, formula_file, semantics = "DPAL", out_path;
  bool all = false;

  auto* check_cmd = app.add_subcommand("check", "Evaluate a formula at a state");
  check_cmd->add_option("--model", model, "Model file (JSON)")->required();
  check_cmd->add_option("--state", state, "State name (default: first state)");
  check_cmd->add_option("--formula", formula, "Formula text");
  check_cmd->add_option("--formula-file", formula_file, "File holding the formula");
  check_cmd->add_option("--semantics", semantics, "DBEL, DPAL, EDPAL or ADPAL")->capture_default_str();
  check_cmd->add_flag("--all", all, "Print the truth value at every state");

  auto* update_cmd = app.add_subcommand("update", "Apply a public announcement and write the new model");
  update_cmd->add_option("--model", model, "Model file (JSON)")->required();
  update_cmd->add_option("--formula", formula, "Announced formula");
  update_cmd->add_option("--formula-file", formula_file, "File holding the announced formula");
  update_cmd->add_option("--semantics", semantics, "DPAL, EDPAL or ADPAL")->capture_default_str();
  update_cmd->add_option("--out,-o", out_path, "Output file (default: stdout)");

  std::size_t max_states = 3;
  Depth max_depth = -1;
  std::uint64_t budget = SatBounds{}.budget;
  auto* sat_cmd = app.add_subcommand("sat", "Search small models for one satisfying a formula");
  sat_cmd->add_option("--formula", formula, "Formula text");
  sat_cmd->add_option("--formula-file", formula_file, "File holding the formula");
  sat_cmd->add_option("--semantics", semantics, "DBEL, DPAL, EDPAL or ADPAL")->capture_default_str();
  sat_cmd->add_option("--max-states", max_states, "Largest model size tried")->capture_default_str();
  sat_cmd->add_option("--max-depth", max_depth, "Largest depth tried (default: largest depth constant + modal depth + 1)");
  sat_cmd->add_option("--budget", budget, "Largest number of candidate models")->capture_default_str();
  sat_cmd->add_option("--out,-o", out_path, "Output file (default: stdout)");

  std::size_t n = 0, k = 2;
  std::string depths, which = "phi_k", dot_path;
  auto* muddy_cmd = app.add_subcommand("muddy", "Muddy children experiments");
  muddy_cmd->add_option("--n", n, "Number of children (default: k)");
  muddy_cmd->add_option("--k", k, "Number of muddy children")->capture_default_str();
  muddy_cmd->add_option("--depths", depths, "Comma list, 'canonical', or an expression in i, n, k");
  muddy_cmd->add_option("--semantics", semantics, "DPAL, EDPAL or ADPAL")->capture_default_str();
  muddy_cmd->add_option("--formula", which, "phi_k, upper, lower, amnesia or leakage")->capture_default_str();
  muddy_cmd->add_option("--dot", dot_path, "Write the announcement steps as DOT");

  std::string table = "T1", kp;
  std::size_t instances = 300, models = 50;
  std::uint64_t seed = 1;
  std::size_t suite_states = 5;
  Depth suite_depth = 3;
  std::string suite_semantics;
  bool unambiguous = false;
  auto* axioms_cmd = app.add_subcommand("axioms", "Run an axiom soundness suite or a KP/TA suite");
  axioms_cmd->add_option("--table", table, "T1, T3 or DPAL_SOUND")->capture_default_str();
  axioms_cmd->add_option("--semantics", suite_semantics, "Semantics (default: the table's own)");
  axioms_cmd->add_option("--kp", kp, "Run the KP, TA, KPp or TAp suite instead");
  axioms_cmd->add_option("--instances,--cases", instances, "Instantiations (or KP/TA cases)")->capture_default_str();
  axioms_cmd->add_option("--models", models, "Random models per run")->capture_default_str();
  axioms_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  axioms_cmd->add_option("--max-states", suite_states, "Largest random model")->capture_default_str();
  axioms_cmd->add_option("--max-depth", suite_depth, "Largest random depth")->capture_default_str();
  axioms_cmd->add_flag("--unambiguous", unambiguous, "Draw models with unambiguous depths");

  std::string family = "all";
  std::size_t cases = 100, max_vars = 4;
  auto* bench_cmd = app.add_subcommand("bench", "CSV timings for the DPAL blowup and the 3-SAT family");
  bench_cmd->add_option("--family", family, "dpal, 3sat or all")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--cases", cases, "Random models in the dpal family")->capture_default_str();
  bench_cmd->add_option("--max-vars", max_vars, "Largest 3-SAT variable count")->capture_default_str();
  bench_cmd->add_option("--out,-o", out_path, "Output file (default: stdout)");

  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering of a model and its announcement steps");
  dot_cmd->add_option("--model", model, "Model file (JSON)")->required();
  dot_cmd->add_option("--state", state, "Designated state");
  dot_cmd->add_option("--formula", formula, "Formula whose leading announcements are applied");
  dot_cmd->add_option("--formula-file", formula_file, "File holding the formula");
  dot_cmd->add_option("--semantics", semantics, "DBEL, DPAL, EDPAL or ADPAL")->capture_default_str();
  dot_cmd->add_option("--out,-o", out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : parse_error;
  }

  try {
    if (*check_cmd) return cmd_check(model, state, formula, formula_file, semantics, all, out, err);
    if (*update_cmd) return cmd_update(model, formula, formula_file, semantics, out_path, out, err);
    if (*sat_cmd) {
      Formula f = detail::formula_arg(formula, formula_file);
      Depth d = max_depth >= 0 ? max_depth : std::max<Depth>(max_depth_constant(f), 0) + f.modal_depth() + 1;
      return cmd_sat(formula, formula_file, semantics, max_states, d, budget, out_path, out, err);
    }
    if (*muddy_cmd) return cmd_muddy(n, k, depths, semantics, which, dot_path, out, err);
    if (*axioms_cmd)
      return cmd_axioms(table, suite_semantics, kp, instances, models, seed, suite_states, suite_depth, unambiguous, out);
    if (*bench_cmd) return cmd_bench(family, seed, cases, max_vars, out_path, out, err);
    if (*dot_cmd) return cmd_export_dot(model, state, formula, formula_file, semantics, out_path, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return parse_error;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return validation_error;
  } catch (const SemanticsError& e) {
    err << "error: " << e.what() << "\n";
    return validation_error;
  } catch (const SatError& e) {
    err << "error: " << e.what() << "\n";
    return validation_error;
  } catch (const MuddyError& e) {
    err << "error: " << e.what() << "\n";
    return validation_error;
  }
  return ok;
}

}  // namespace dbel::cli
