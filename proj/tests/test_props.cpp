#include <gtest/gtest.h>

#include <fstream>

#include "test_util.hpp"

using namespace dbel;

namespace {

AxiomSchema schema_named(AxiomTable t, const std::string& name) {
  for (const auto& s : schemas_for(t))
    if (s.name == name) return s;
  throw std::runtime_error("no schema " + name);
}

// One-agent models over atom p with up to two states and depths 0..2.
std::vector<Model> tiny_models() {
  std::vector<Model> out;
  for (std::size_t n = 1; n <= 2; ++n)
    for (const auto& part : detail::restricted_growth_strings(n))
      for (std::size_t v = 0; v < (std::size_t{1} << n); ++v)
        for (std::size_t dm = 0; dm < (n == 1 ? 3u : 9u); ++dm) {
          std::vector<std::string> names;
          std::vector<std::vector<std::string>> val(n);
          std::vector<std::vector<Depth>> depth(1, std::vector<Depth>(n));
          for (std::size_t s = 0, x = dm; s < n; ++s, x /= 3) {
            names.push_back("s" + std::to_string(s));
            if ((v >> s) & 1) val[s].push_back("p");
            depth[0][s] = static_cast<Depth>(x % 3);
          }
          out.push_back(Model::equivalence(names, val, {part}, depth));
        }
  return out;
}

bool valid_on(const std::vector<Model>& models, const Formula& f, Semantics k) {
  for (const Model& m : models)
    for (bool v : evaluate(m, f, k))
      if (!v) return false;
  return true;
}

}  // namespace

TEST(Instantiate, Truth) {
  SchemaInstance i{{atom("p")}, 0, {}};
  EXPECT_EQ(schema_named(AxiomTable::T1, "truth").build(i), implies(know(0, atom("p")), atom("p")));
}

TEST(Instantiate, UniqueDepth) {
  SchemaInstance i{{}, 0, {1, 2}};
  EXPECT_EQ(schema_named(AxiomTable::T1, "unique depth").build(i), neg(conj(exact(0, 1), exact(0, 2))));
}

TEST(Instantiate, IntegerDepthAdjustment) {
  SchemaInstance i{{parse("K[0] p")}, 0, {-1}};
  Formula f = schema_named(AxiomTable::T3, "depth adjustment").build(i);
  EXPECT_EQ(f, iff(announce(parse("K[0] p"), exact(0, -1)), implies(parse("K[0] p"), exact(0, 0))));
}

TEST(Instantiate, PositiveIntrospection) {
  SchemaInstance i{{atom("p")}, 1, {}};
  Formula f = schema_named(AxiomTable::T1, "positive introspection").build(i);
  EXPECT_EQ(f, parse("K[1] p & P[1,1] -> K[1] (P[1,0] -> K[1] p)"));
}

TEST(Instantiate, TableOneStaysAnnouncementAndKinfFree) {
  auto table = schemas_for(AxiomTable::T1);
  RandomSpec spec{6, 2, 3, 5, 2, 3, false};
  for (std::size_t i = 0; i < 600; ++i) {
    Random r(i);
    const AxiomSchema& s = table[i % table.size()];
    Formula f = s.build(draw_instance(s, table, r, spec, shape_for(AxiomTable::T1)));
    ASSERT_FALSE(contains_op(f, Op::announce)) << to_string(f);
    ASSERT_FALSE(contains_op(f, Op::know_inf)) << to_string(f);
  }
}

TEST(Instantiate, KpPrimeMetavariableHasNoDepthAtoms) {
  auto table = schemas_for(AxiomTable::DPAL_SOUND);
  AxiomSchema kp = schema_named(AxiomTable::DPAL_SOUND, "KP'");
  RandomSpec spec{8, 2, 3, 5, 2, 3, false};
  for (std::size_t i = 0; i < 300; ++i) {
    Random r(i);
    SchemaInstance inst = draw_instance(kp, table, r, spec, shape_for(AxiomTable::DPAL_SOUND));
    ASSERT_FALSE(contains_op(inst.sub[1], Op::exact));
    ASSERT_FALSE(contains_op(inst.sub[1], Op::at_least));
  }
}

TEST(RandomModel, SingleState) {
  Random r(1);
  Model m = r.model({5, 2, 3, 1, 2, 1, false});
  EXPECT_EQ(m.num_states(), 1u);
  EXPECT_TRUE(m.related(0, 0, 0));
}

TEST(RandomModel, DeterministicPerSeed) {
  RandomSpec spec{8, 3, 3, 5, 2, 99, false};
  Random a(99), b(99);
  for (int i = 0; i < 20; ++i) {
    ASSERT_EQ(save_model(a.model(spec)), save_model(b.model(spec)));
    ASSERT_EQ(a.formula(spec, FormulaShape::full()), b.formula(spec, FormulaShape::full()));
  }
}

TEST(RandomModel, DrawsAreValid) {
  Random r(5);
  RandomSpec spec{8, 3, 3, 5, 2, 5, false};
  for (int i = 0; i < 500; ++i) {
    Model m = r.model(spec);
    ASSERT_EQ(m.mode(), RelationMode::equivalence);
    ASSERT_TRUE(validate(m.as_reflexive(), RelationMode::equivalence));
    ASSERT_LE(m.num_states(), spec.max_states);
  }
}

TEST(RandomModel, UnambiguousFlag) {
  Random r(6);
  RandomSpec spec{8, 3, 3, 5, 2, 6, true};
  for (int i = 0; i < 200; ++i) ASSERT_TRUE(is_unambiguous(r.model(spec)));
}

TEST(Suite, TableOneUnderDbel) {
  SuiteOptions opt;
  opt.instantiations = 120;
  opt.models = 20;
  SuiteReport rep = soundness_suite(AxiomTable::T1, Semantics::dbel, opt);
  EXPECT_EQ(rep.violation_count, 0u);
  EXPECT_EQ(rep.checker_disagreements, 0u);
  EXPECT_GT(rep.checks, 0u);
}

TEST(Suite, EdpalTableUnderEdpal) {
  SuiteOptions opt;
  opt.instantiations = 120;
  opt.models = 20;
  SuiteReport rep = soundness_suite(AxiomTable::T3, Semantics::edpal, opt);
  EXPECT_EQ(rep.violation_count, 0u);
  EXPECT_EQ(rep.checker_disagreements, 0u);
  EXPECT_GT(rep.instances_by_schema["announcement composition"], 0u);
}

TEST(Suite, DpalReplacementSetUnderDpal) {
  SuiteOptions opt;
  opt.instantiations = 120;
  opt.models = 20;
  SuiteReport rep = soundness_suite(AxiomTable::DPAL_SOUND, Semantics::dpal, opt);
  EXPECT_EQ(rep.violation_count, 0u);
  EXPECT_EQ(rep.checker_disagreements, 0u);
}

TEST(Suite, CompositionFailsUnderDpal) {
  SuiteOptions opt;
  opt.instantiations = 300;
  opt.models = 30;
  opt.spec = {6, 2, 3, 3, 2, 2, false};
  SuiteReport rep = run_schemas({composition_schema()}, FormulaShape::with_announcements(), Semantics::dpal, opt);
  EXPECT_GE(rep.violation_count, 1u);
  EXPECT_EQ(rep.checker_disagreements, 0u);
  ASSERT_FALSE(rep.violations.empty());
  const Violation& v = rep.violations.front();
  EXPECT_FALSE(check(v.model, v.state, v.instance, Semantics::dpal));
}

TEST(Suite, EdpalTableIsNotSoundForDpal) {
  SuiteOptions opt;
  opt.instantiations = 200;
  opt.models = 30;
  SuiteReport rep = soundness_suite(AxiomTable::T3, Semantics::dpal, opt);
  EXPECT_GT(rep.violation_count, 0u);
}

TEST(Suite, ReportsAreDeterministic) {
  SuiteOptions opt;
  opt.instantiations = 60;
  opt.models = 10;
  SuiteReport a = soundness_suite(AxiomTable::T3, Semantics::dpal, opt);
  SuiteReport b = soundness_suite(AxiomTable::T3, Semantics::dpal, opt);
  EXPECT_EQ(a.violation_count, b.violation_count);
  EXPECT_EQ(a.checks, b.checks);
  EXPECT_EQ(a.violations_by_schema, b.violations_by_schema);
  ASSERT_EQ(a.violations.size(), b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) EXPECT_EQ(a.violations[i].instance, b.violations[i].instance);
}

TEST(Suite, MinimizedViolationsStillFail) {
  SuiteOptions opt;
  opt.instantiations = 200;
  opt.models = 30;
  SuiteReport rep = soundness_suite(AxiomTable::T3, Semantics::adpal, opt);
  for (const Violation& v : rep.violations) {
    EXPECT_FALSE(check(v.model, v.state, v.instance, Semantics::adpal)) << v.schema;
    EXPECT_LE(v.model.num_states(), opt.spec.max_states);
  }
}

TEST(Necessitation, ValiditiesStayValidUnderKnowledge) {
  // Candidates: schema instances plus raw random formulas; whatever is valid
  // on every tiny model must remain valid behind P[0,d] -> K[0].
  const auto models = tiny_models();
  auto table = schemas_for(AxiomTable::T1);
  RandomSpec spec{5, 1, 2, 2, 1, 8, false};
  std::size_t valid = 0;
  for (std::size_t i = 0; i < 400; ++i) {
    Random r(derive_seed(8, i));
    Formula phi = i % 2 ? r.formula(spec, FormulaShape::hybrid())
                        : table[i % table.size()].build(draw_instance(table[i % table.size()], table, r, spec,
                                                                      FormulaShape::hybrid()));
    if (!valid_on(models, phi, Semantics::dbel)) continue;
    ++valid;
    Formula nec = implies(at_least(0, phi.modal_depth()), know(0, phi));
    ASSERT_TRUE(valid_on(models, nec, Semantics::dbel)) << to_string(phi);
  }
  EXPECT_GT(valid, 100u);
}

TEST(KpTa, DpalAllVariantsClean) {
  for (KpVariant v : {KpVariant::KP, KpVariant::TA, KpVariant::KPp, KpVariant::TAp}) {
    KpTaOptions opt;
    opt.cases = 120;
    KpTaReport rep = kp_ta_suite(Semantics::dpal, v, opt);
    EXPECT_EQ(rep.forward_violations, 0u) << to_string(v);
    EXPECT_EQ(rep.reverse_violations, 0u) << to_string(v);
    EXPECT_GT(rep.premised, opt.cases / 2) << to_string(v);
  }
}

TEST(KpTa, EdpalTraditionalAnnouncementsAndKpForward) {
  KpTaOptions opt;
  opt.cases = 120;
  KpTaReport ta = kp_ta_suite(Semantics::edpal, KpVariant::TA, opt);
  EXPECT_EQ(ta.forward_violations + ta.reverse_violations, 0u);
  KpTaReport kp = kp_ta_suite(Semantics::edpal, KpVariant::KP, opt);
  EXPECT_EQ(kp.forward_violations, 0u);
}

TEST(KpTa, EdpalKpReverseTopCounterexample) {
  KpTaCase c = kp_reverse_top_case();
  EXPECT_TRUE(c.outcome.premise);
  EXPECT_TRUE(c.outcome.announced);
  EXPECT_FALSE(c.outcome.lhs);
  EXPECT_TRUE(c.outcome.rhs);
  EXPECT_FALSE(c.outcome.reverse_ok());
  EXPECT_TRUE(c.outcome.forward_ok());
  // DPAL keeps the negative copy's depth, so the same case is fine there.
  KpTaOutcome d = kp_ta_check(c.model, 0, 0, c.phi, c.psi, KpVariant::KP, Semantics::dpal);
  EXPECT_TRUE(d.reverse_ok());
}

TEST(KpTa, AdpalKpPrimeForwardFailsOnThreeWorlds) {
  Model m = load_model_file(testutil::fixture("three_worlds.json")).model;
  KpTaOutcome o = kp_ta_check(m, 1, 0, parse("K[2] K[2] p0"), parse("K[1] p0"), KpVariant::KPp, Semantics::adpal);
  EXPECT_TRUE(o.premise);
  EXPECT_TRUE(o.lhs);
  EXPECT_FALSE(o.rhs);
  EXPECT_FALSE(o.forward_ok());
}

TEST(KpTa, KpPrimeNeedsDepthAtomFreePsi) {
  // Agent 0 knows E[1,1]; announcing K[1]true uses up agent 1's depth, so
  // the right-hand side still sees the old depth and the left does not.
  Model m = Model::equivalence({"s"}, {{}}, {{0}, {0}}, {{0}, {1}});
  Formula phi = know(1, top());
  Formula psi = exact(1, 1);
  EXPECT_THROW(kp_ta_check(m, 0, 0, phi, psi, KpVariant::KPp, Semantics::dpal), SemanticsError);
  EXPECT_TRUE(check(m, 0, f_transform(phi, know(0, psi)), Semantics::dpal));
  EXPECT_FALSE(check(m, 0, kp_prime_formula(0, phi, psi), Semantics::dpal));
}

TEST(KpTa, HypothesesAreEnforced) {
  Model amb = Model::equivalence({"a", "b"}, {{}, {}}, {{0, 0}}, {{0, 1}});
  EXPECT_THROW(kp_ta_check(amb, 0, 0, top(), top(), KpVariant::KP, Semantics::dpal), SemanticsError);
  EXPECT_THROW(kp_ta_check(amb, 0, 0, top(), top(), KpVariant::TA, Semantics::dpal), SemanticsError);
  Model m = Model::equivalence({"a"}, {{}}, {{0}, {0}}, {{1}, {1}});
  EXPECT_THROW(kp_ta_check(m, 0, 0, top(), parse("K[1] p"), KpVariant::KP, Semantics::dpal), SemanticsError);
  EXPECT_NO_THROW(kp_ta_check(m, 0, 0, top(), parse("K[0] p"), KpVariant::KP, Semantics::dpal));
}

TEST(Amnesia, ValidUnderEdpal) {
  AmnesiaReport rep = amnesia_suite(Semantics::edpal, 100, {8, 2, 3, 4, 2, 3, false});
  EXPECT_EQ(rep.premised, 100u);
  EXPECT_EQ(rep.violations, 0u);
}

TEST(Amnesia, DpalCounterexampleWithinThreeStates) {
  auto w = find_amnesia_counterexample(Semantics::dpal, {6, 2, 3, 3, 2, 4, false}, 5000);
  ASSERT_TRUE(w.has_value());
  EXPECT_LE(w->model.num_states(), 3u);
  EXPECT_FALSE(check(w->model, w->state, w->formula, Semantics::dpal));
  EXPECT_TRUE(check(w->model, w->state, w->formula, Semantics::edpal));
}

TEST(Composition, FixtureStillFailsUnderDpal) {
  std::ifstream in(testutil::fixture("composition_counterexample.json"));
  CompositionWitness w = composition_witness_from_json(nlohmann::json::parse(in));
  EXPECT_LE(w.model.num_states(), 3u);
  Formula f = composition_formula(w.phi, w.psi, w.chi);
  EXPECT_FALSE(check(w.model, w.state, f, Semantics::dpal));
  EXPECT_FALSE(oracle::check(w.model, w.state, f, oracle::Kind::dpal));
  EXPECT_TRUE(check(w.model, w.state, f, Semantics::edpal));
}

TEST(Composition, SearchFindsACounterexample) {
  auto w = find_composition_counterexample(Semantics::dpal, {5, 2, 3, 3, 2, 7, false}, 20000);
  ASSERT_TRUE(w.has_value());
  EXPECT_LE(w->model.num_states(), 3u);
  auto back = composition_witness_from_json(composition_witness_to_json(*w));
  EXPECT_EQ(save_model(back.model), save_model(w->model));
  EXPECT_EQ(back.state, w->state);
  EXPECT_FALSE(check(back.model, back.state, composition_formula(back.phi, back.psi, back.chi), Semantics::dpal));
}

TEST(Composition, NoCounterexampleUnderEdpal) {
  EXPECT_FALSE(find_composition_counterexample(Semantics::edpal, {5, 2, 3, 3, 2, 7, false}, 2000).has_value());
}

TEST(Names, TablesAndVariantsParse) {
  EXPECT_EQ(parse_table("T1"), AxiomTable::T1);
  EXPECT_EQ(parse_table("T2"), AxiomTable::T3);
  EXPECT_EQ(parse_table("EDPAL_PA"), AxiomTable::T3);
  EXPECT_EQ(parse_table("DPAL_SOUND"), AxiomTable::DPAL_SOUND);
  EXPECT_FALSE(parse_table("T9").has_value());
  EXPECT_EQ(parse_kp_variant("KP'"), KpVariant::KPp);
  EXPECT_EQ(parse_kp_variant("TAp"), KpVariant::TAp);
  EXPECT_EQ(home_semantics(AxiomTable::T3), Semantics::edpal);
}
