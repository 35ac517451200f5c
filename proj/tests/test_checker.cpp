#include <gtest/gtest.h>

#include "oracles.hpp"
#include "papal/papal.hpp"

using namespace papal;

namespace {

const char* kChi = "L a q & K a (K b q | K b ~q)";

std::vector<std::string> names(const EpistemicModel& m, const StateSet& t) { return state_names(m, t); }

}  // namespace

TEST(Checker, Compose9TwoStepsButNotOne) {
  const auto pm = fixture_compose9();
  const Formula chi = parse(kChi);
  EXPECT_TRUE(holds(pm, dia_pos(dia_pos(chi))));
  EXPECT_FALSE(holds(pm, dia_pos(chi)));
  EXPECT_TRUE(oracle::holds(pm.model, dia_pos(dia_pos(chi)), pm.point));
  EXPECT_FALSE(oracle::holds(pm.model, dia_pos(chi), pm.point));
}

TEST(Checker, Compose9Witnesses) {
  const auto pm = fixture_compose9();
  const auto& m = pm.model;
  const Formula chi = parse(kChi);
  const StateSet kap = extension(m, parse("K a p"));
  EXPECT_EQ(names(m, kap), (std::vector<std::string>{"s", "t", "s'", "t'", "u'", "v'"}));
  const auto first = positive_witnesses(pm, dia_pos(chi));
  EXPECT_NE(std::find(first.begin(), first.end(), kap), first.end());
  EXPECT_TRUE(std::is_sorted(first.begin(), first.end()));

  const EpistemicModel sub = restrict(m, kap);
  const PointedModel spm{sub, sub.require_state("s")};
  const auto w = find_positive_witness(spm, chi);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(names(sub, w->states), (std::vector<std::string>{"s", "t", "u'", "v'"}));
  EXPECT_TRUE(is_positive(w->announcement));
  EXPECT_EQ(extension(sub, w->announcement), w->states);
}

TEST(Checker, ExpressivityPair) {
  const Formula body = parse("K a p & ~K b K a p");
  const auto M = fixture_expr_M();
  const auto Mp = fixture_expr_Mprime();
  EXPECT_FALSE(holds(M, dia_pos(body)));
  EXPECT_TRUE(holds(Mp, dia_pos(body)));
  EXPECT_FALSE(holds(M, dia(body)));
  EXPECT_TRUE(holds(Mp, dia(body)));
}

TEST(Checker, DiaPosPResultCarriesWitness) {
  const auto pm = fixture_compose9();
  const auto r = evaluate(pm, parse("dia+ K a p"));
  EXPECT_TRUE(r.verdict);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(r.witness->states.contains(pm.point));
  EXPECT_EQ(extension(pm.model, r.witness->announcement), r.witness->states);
  EXPECT_GT(r.stats.restrictions_enumerated, 0u);
  const auto j = result_to_json(pm.model, r);
  EXPECT_TRUE(j["verdict"].get<bool>());
  EXPECT_TRUE(j["witness_states"].is_array());
}

TEST(Checker, NoWitnessForFalseOrUniversal) {
  const auto pm = fixture_compose9();
  EXPECT_FALSE(evaluate(pm, parse("dia+ " + std::string(kChi))).witness);
  EXPECT_FALSE(evaluate(pm, parse("box+ p")).witness);
  const auto j = result_to_json(pm.model, evaluate(pm, parse("box+ p")));
  EXPECT_TRUE(j["witness_states"].is_null());
}

TEST(Checker, ApalWitnessIsBisimulationClosed) {
  const auto pm = fixture_two_leg_chain(4, 6);
  const auto r = evaluate(pm, parse("dia ~(K b K a p | K b ~K a p)"));
  ASSERT_TRUE(r.verdict);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(extension(pm.model, r.witness->announcement), r.witness->states);
}

TEST(Checker, AgreesWithDefinitionalOracle) {
  Rng rng(31);
  ModelSpec ms;
  ms.max_states = 6;
  FormulaSpec fs;
  fs.depth = 2;
  fs.height = 4;
  fs.quantifiers = 2;
  std::size_t quantified = 0;
  for (int i = 0; i < 400; ++i) {
    const EpistemicModel m = random_model(rng, ms);
    const Formula f = random_formula(rng, fs);
    quantified += has_quantifier(f) ? 1 : 0;
    ASSERT_EQ(extension(m, f), oracle::extension(m, f)) << to_string(f) << '\n' << format_model(m);
  }
  EXPECT_GT(quantified, 100u);
}

TEST(Checker, EnginesAndMemoAgree) {
  Rng rng(37);
  ModelSpec ms;
  ms.max_states = 6;
  FormulaSpec fs;
  fs.quantifiers = 2;
  for (int i = 0; i < 300; ++i) {
    const EpistemicModel m = random_model(rng, ms);
    const Formula f = random_formula(rng, fs);
    CheckConfig naive;
    naive.engine = EnumEngine::Naive;
    naive.memo_enabled = false;
    EXPECT_EQ(extension(m, f), extension(m, f, naive)) << to_string(f);
  }
}

TEST(Checker, MemoHitsOnSharedSubformulas) {
  const auto pm = fixture_compose9();
  CheckConfig on, off;
  off.memo_enabled = false;
  const Formula f = parse("dia+ dia+ (" + std::string(kChi) + ")");
  const auto a = evaluate(pm, f, on);
  const auto b = evaluate(pm, f, off);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_GT(a.stats.cache_hits, 0u);
  EXPECT_EQ(b.stats.cache_hits, 0u);
  EXPECT_LT(a.stats.nodes_visited, b.stats.nodes_visited);
}

TEST(Checker, PositiveFormulasSurviveAnnouncements) {
  Rng rng(41);
  ModelSpec ms;
  FormulaSpec pos;
  pos.fragment = Fragment::Positive;
  FormulaSpec any;
  any.quantifiers = 0;
  for (int i = 0; i < 200; ++i) {
    const EpistemicModel m = random_model(rng, ms);
    const Formula phi = random_formula(rng, pos);
    const Formula psi = random_formula(rng, any);
    EXPECT_EQ(extension(m, implies(phi, announce(psi, phi))), m.all()) << to_string(phi);
  }
}

TEST(Checker, AnnouncementSemantics) {
  const auto pm = fixture_expr_Mprime();
  EXPECT_TRUE(holds(pm, parse("[q] K a p")));
  EXPECT_FALSE(holds(pm, parse("K a p")));
  EXPECT_TRUE(holds(pm, parse("<q> ~K b K a p")));
  EXPECT_TRUE(holds(pm, parse("[~q] false")));
  EXPECT_FALSE(holds(pm, parse("<~q> true")));
}

TEST(Checker, RejectsUnknownSymbols) {
  const auto pm = fixture_expr_M();
  EXPECT_THROW(holds(pm, parse("r")), SemanticError);
  EXPECT_THROW(holds(pm, parse("K c p")), SemanticError);
}

TEST(Checker, Caps) {
  const auto pm = fixture_compose9();
  CheckConfig small;
  small.state_cap = 5;
  EXPECT_THROW(holds(pm, parse("box+ p"), small), ResourceError);
  EXPECT_NO_THROW(holds(pm, parse("K a p"), small));
  CheckConfig shallow;
  shallow.nesting_cap = 1;
  EXPECT_THROW(holds(pm, parse("dia+ dia+ p"), shallow), ResourceError);
  CheckConfig no_apal;
  no_apal.apal_enabled = false;
  EXPECT_THROW(holds(pm, parse("dia p"), no_apal), SemanticError);
  EXPECT_NO_THROW(holds(pm, parse("dia+ p"), no_apal));
  CheckConfig bad;
  bad.state_cap = 0;
  EXPECT_THROW(Evaluator(pm.model, bad), PreconditionError);
}

TEST(Checker, CapAppliesToRestrictionsOnly) {
  // Quantifier-free formulas evaluate on models of any size.
  const auto pm = fixture_left_edge_chain(3, 70);
  EXPECT_NO_THROW(holds(pm, parse("L b p | L a p")));
}

TEST(Checker, LargeModelWithoutQuantifiers) {
  const EpistemicModel m = gen_ab_chain(100, std::string(50, '1') + std::string(50, '0'));
  const StateSet ext = extension(m, parse("K a p"));
  EXPECT_EQ(ext.count(), 50u);
}
