#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dbel_cli.hpp"
#include "test_util.hpp"

using namespace dbel;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dbel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("dbel_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string three_worlds = testutil::fixture("three_worlds.json");

}  // namespace

TEST(CliCheck, LeakageFixture) {
  Result r = run_cli({"check", "--model", three_worlds, "--state", "1", "--formula", "[K[2] K[2] p0]K[0] K[1] p0",
                      "--semantics", "ADPAL"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "true\n");
  r = run_cli({"check", "--model", three_worlds, "--state", "1", "--formula", "K[0] K[1] p0", "--semantics", "adpal"});
  EXPECT_EQ(r.out, "false\n");
}

TEST(CliCheck, AllStates) {
  Result r = run_cli({"check", "--model", three_worlds, "--formula", "K[2] K[2] p0", "--semantics", "ADPAL", "--all"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0 true\n1 true\n2 false\n");
}

TEST(CliCheck, FormulaFromFile) {
  TempDir dir;
  std::ofstream(dir.file("f.txt")) << "K[2] K[2] p0\n";
  Result r = run_cli({"check", "--model", three_worlds, "--state", "2", "--formula-file", dir.file("f.txt"),
                      "--semantics", "ADPAL"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "false\n");
}

TEST(CliCheck, DefaultSemanticsIsDpal) {
  TempDir dir;
  MuddyInstance inst = build_muddy(3, 3, canonical_depths(3));
  std::ofstream(dir.file("m.json")) << save_model(inst.model);
  Result r = run_cli({"check", "--model", dir.file("m.json"), "--state", "111", "--formula",
                      "<!K[2] m2><!K[1] m1>!K[2] true"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "false\n");
  r = run_cli({"check", "--model", dir.file("m.json"), "--state", "111", "--formula", "<!K[2] m2><!K[1] m1>!K[2] true",
               "--semantics", "EDPAL"});
  EXPECT_EQ(r.out, "true\n");
}

TEST(CliUpdate, TopUnderEdpalIsByteIdentical) {
  TempDir dir;
  MuddyInstance inst = build_muddy(3, 2, canonical_depths(3));
  const std::string text = save_model(inst.model);
  std::ofstream(dir.file("m.json")) << text;
  Result r = run_cli({"update", "--model", dir.file("m.json"), "--formula", "true", "--semantics", "EDPAL", "-o",
                      dir.file("out.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir.file("out.json")), text);
  r = run_cli({"update", "--model", dir.file("m.json"), "--formula", "true", "--semantics", "EDPAL"});
  EXPECT_EQ(r.out, text);
}

TEST(CliUpdate, DpalWritesBothCopies) {
  TempDir dir;
  MuddyInstance inst = build_muddy(2, 2, std::vector<Depth>{1, 0});
  std::ofstream(dir.file("m.json")) << save_model(inst.model);
  Result r = run_cli({"update", "--model", dir.file("m.json"), "--formula", "!K[1] m1"});
  ASSERT_EQ(r.code, 0) << r.err;
  LoadedModel back = load_model_string(r.out);
  EXPECT_EQ(save_model(back.model), save_model(update_dpal(inst.model, parse("!K[1] m1")).model));
  EXPECT_TRUE(back.model.find_state("1.11").has_value());
}

TEST(CliSat, FindsAndPrintsAModel) {
  Result r = run_cli({"sat", "--formula", "E[0,2] & K[0] K[0] p", "--semantics", "DBEL"});
  ASSERT_EQ(r.code, 0) << r.err;
  LoadedModel m = load_model_string(r.out);
  EXPECT_EQ(m.model.depth(0, 0), 2);
  EXPECT_NE(r.err.find("satisfied at state s0"), std::string::npos);
}

TEST(CliSat, DefaultDepthCoversDepthConstants) {
  Result r = run_cli({"sat", "--formula", "E[0,5]", "--semantics", "DBEL"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_model_string(r.out).model.depth(0, 0), 5);
  // Under DPAL the announcement shifts the required depth by its own depth.
  r = run_cli({"sat", "--formula", "<K[0] p>E[0,2]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_model_string(r.out).model.depth(0, 0), 3);
}

TEST(CliSat, NoneWithinBounds) {
  Result r = run_cli({"sat", "--formula", "p & !p", "--semantics", "DBEL"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "none-within-bounds\n");
}

TEST(CliSat, BoundsExceeded) {
  Result r = run_cli({"sat", "--formula", "p & !p & K[2] q", "--semantics", "DBEL", "--max-states", "5", "--budget",
                      "1000"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("bounds exceeded"), std::string::npos);
}

TEST(CliMuddy, Formulas) {
  EXPECT_EQ(run_cli({"muddy", "--k", "3", "--formula", "phi_k"}).out, "true\n");
  EXPECT_EQ(run_cli({"muddy", "--k", "3", "--formula", "upper", "--semantics", "ADPAL"}).out, "true\n");
  EXPECT_EQ(run_cli({"muddy", "--k", "3", "--formula", "amnesia", "--semantics", "EDPAL"}).out, "true\n");
  EXPECT_EQ(run_cli({"muddy", "--k", "3", "--formula", "amnesia", "--semantics", "DPAL"}).out, "false\n");
  EXPECT_EQ(run_cli({"muddy", "--k", "3", "--formula", "leakage", "--semantics", "ADPAL"}).out, "true\n");
  Result lower = run_cli({"muddy", "--k", "3", "--formula", "lower", "--depths", "2,2,2"});
  EXPECT_EQ(lower.out, "true\n");
  EXPECT_NE(lower.err.find("outside the L fragment"), std::string::npos);
}

TEST(CliMuddy, DepthExpressions) {
  // k - 1 - i is the canonical assignment.
  EXPECT_EQ(run_cli({"muddy", "--k", "3", "--depths", "k-1-i", "--formula", "upper"}).out, "true\n");
  // Child 0 at depth 0 never learns anything.
  EXPECT_EQ(run_cli({"muddy", "--k", "2", "--depths", "i*3", "--formula", "phi_k"}).out, "false\n");
  EXPECT_EQ(run_cli({"muddy", "--k", "2", "--depths", "(n+1)*2-i", "--formula", "phi_k"}).out, "true\n");
  EXPECT_EQ(run_cli({"muddy", "--k", "2", "--depths", "1,2,3"}).code, 3);
  EXPECT_EQ(run_cli({"muddy", "--k", "2", "--depths", "i+"}).code, 2);
}

TEST(CliMuddy, NLargerThanK) {
  EXPECT_EQ(run_cli({"muddy", "--n", "4", "--k", "2", "--depths", "1", "--formula", "phi_k"}).out, "true\n");
  EXPECT_EQ(run_cli({"muddy", "--n", "2", "--k", "3"}).code, 3);
}

TEST(CliMuddy, DotOutput) {
  TempDir dir;
  Result r = run_cli({"muddy", "--k", "3", "--formula", "amnesia", "--semantics", "DPAL", "--dot", dir.file("m.dot")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string dot = slurp(dir.file("m.dot"));
  EXPECT_EQ(dot.rfind("digraph dbel {", 0), 0u);
  EXPECT_NE(dot.find("subgraph cluster_0"), std::string::npos);
  EXPECT_NE(dot.find("subgraph cluster_2"), std::string::npos);
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
  EXPECT_NE(dot.find("fillcolor=green"), std::string::npos);
  // Line break inside a label, not an escaped backslash.
  EXPECT_NE(dot.find("\"111\\nd=(2,1,0)\""), std::string::npos);
  EXPECT_EQ(dot.find("\\\\n"), std::string::npos);
}

TEST(CliAxioms, CleanRunExitsZero) {
  Result r = run_cli({"axioms", "--table", "T1", "--instances", "40", "--models", "10", "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("T1 under DBEL"), std::string::npos);
  EXPECT_NE(r.out.find("violations 0"), std::string::npos);
}

TEST(CliAxioms, ExploratoryRunsExitZero) {
  Result r = run_cli({"axioms", "--table", "T3", "--semantics", "DPAL", "--cases", "200", "--models", "30"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("exploratory run"), std::string::npos);
  EXPECT_EQ(r.out.find("violations 0\n"), std::string::npos);
}

TEST(CliAxioms, WhichRunsMustBeClean) {
  // Exit 1 is reserved for violations in these runs.
  EXPECT_TRUE(cli::detail::expected_sound(AxiomTable::DPAL_SOUND, Semantics::dpal));
  EXPECT_FALSE(cli::detail::expected_sound(AxiomTable::T3, Semantics::dpal));
  EXPECT_TRUE(cli::detail::expected_sound(KpVariant::TA, Semantics::edpal));
  EXPECT_FALSE(cli::detail::expected_sound(KpVariant::KP, Semantics::edpal));
  Result r = run_cli({"axioms", "--kp", "KPp", "--semantics", "DPAL", "--cases", "40"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("forward_violations 0"), std::string::npos);
}

TEST(CliBench, ThreeSatGrowthPerAnnouncement) {
  Result r = run_cli({"bench", "--family", "3sat", "--max-vars", "3", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"family", "instance", "step", "formula_size", "model_norm", "wall_ns",
                                               "result_norm"}));
  std::size_t updates = 0, checks = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 7u);
    EXPECT_EQ(rows[i][0], "3sat");
    if (rows[i][2] == "update") {
      ++updates;
      EXPECT_LE(std::stoull(rows[i][6]), 4 * std::stoull(rows[i][4]));
    } else {
      ++checks;
    }
  }
  EXPECT_EQ(updates, 1u + 2u + 3u);
  EXPECT_EQ(checks, 3u);
  EXPECT_NE(r.err.find("fitted c = "), std::string::npos);
}

TEST(CliBench, DpalFamily) {
  Result r = run_cli({"bench", "--family", "dpal", "--cases", "25", "--seed", "2"});
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 26u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::stoull(rows[i][6]), 4 * std::stoull(rows[i][4]));
  EXPECT_EQ(run_cli({"bench", "--family", "nope"}).code, 2);
}

TEST(CliExportDot, ModelAndSteps) {
  Result r = run_cli({"export-dot", "--model", three_worlds, "--state", "1", "--formula", "[K[2] K[2] p0]K[0] K[1] p0",
                      "--semantics", "ADPAL"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("subgraph cluster_1"), std::string::npos);
  EXPECT_NE(r.out.find("label=\"[K[2] K[2] p0]\""), std::string::npos);
  EXPECT_EQ(r.out.find("subgraph cluster_2"), std::string::npos);
  Result plain = run_cli({"export-dot", "--model", three_worlds, "--semantics", "ADPAL"});
  EXPECT_EQ(plain.code, 0);
  EXPECT_EQ(plain.out.find("fillcolor"), std::string::npos);
}

TEST(CliExit, ParseErrors) {
  EXPECT_EQ(run_cli({"check", "--model", three_worlds, "--formula", "K[0] &", "--semantics", "ADPAL"}).code, 2);
  EXPECT_EQ(run_cli({"check", "--model", three_worlds, "--formula", "p0", "--semantics", "XPAL"}).code, 2);
  EXPECT_EQ(run_cli({"check", "--formula", "p0"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"axioms", "--table", "T9"}).code, 2);
  Result r = run_cli({"check", "--model", three_worlds, "--formula", "p0 &\n (", "--semantics", "ADPAL"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
}

TEST(CliExit, ValidationErrors) {
  TempDir dir;
  std::ofstream(dir.file("bad.json")) << R"({"agents":1,"states":["a","a"]})";
  EXPECT_EQ(run_cli({"check", "--model", dir.file("bad.json"), "--formula", "p"}).code, 3);
  EXPECT_EQ(run_cli({"check", "--model", dir.file("missing.json"), "--formula", "p"}).code, 3);
  // Reflexive-mode fixture under DPAL.
  EXPECT_EQ(run_cli({"check", "--model", three_worlds, "--formula", "p0"}).code, 3);
  EXPECT_EQ(run_cli({"check", "--model", three_worlds, "--state", "9", "--formula", "p0", "--semantics", "ADPAL"}).code,
            3);
  EXPECT_EQ(run_cli({"check", "--model", three_worlds, "--formula", "[p0]p0", "--semantics", "DBEL"}).code, 3);
}

TEST(CliExit, HelpAndVersion) {
  Result help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("check"), std::string::npos);
  Result version = run_cli({"--version"});
  EXPECT_EQ(version.code, 0);
  EXPECT_NE(version.out.find("dbel"), std::string::npos);
}

TEST(CliWarnings, ClosureWarningGoesToStderr) {
  TempDir dir;
  std::ofstream(dir.file("m.json")) << R"({"agents":1,"states":["a","b","c"],"rel":[[["a","b"],["b","c"]]],)"
                                    << R"("val":{"c":["p"]},"depth":[{"a":1,"b":1,"c":1}]})";
  Result r = run_cli({"check", "--model", dir.file("m.json"), "--state", "a", "--formula", "K[0] p"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "false\n");
  EXPECT_NE(r.err.find("transitive closure added 1 pair"), std::string::npos);
}
