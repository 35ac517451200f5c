#include <gtest/gtest.h>

#include "oracles.hpp"
#include "papal/papal.hpp"

using namespace papal;

namespace {

oracle::Pairs as_pairs(const StatePairRelation& r) {
  oracle::Pairs out;
  for (auto pr : r.pairs()) out.insert(pr);
  return out;
}

std::vector<EpistemicModel> corpus(std::uint64_t seed, std::size_t count, std::size_t max_states) {
  Rng rng(seed);
  ModelSpec ms;
  ms.max_states = max_states;
  std::vector<EpistemicModel> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_model(rng, ms));
  return out;
}

// All relations on n <= 3 states satisfying atoms and back: the union of
// them must be what max_refinement computes.
oracle::Pairs union_of_all_refinements(const EpistemicModel& m) {
  const auto cand = oracle::atom_pairs(m);
  const std::vector<std::pair<std::size_t, std::size_t>> v(cand.begin(), cand.end());
  oracle::Pairs all;
  for (std::uint64_t bits = 0; bits < (1ULL << v.size()); ++bits) {
    oracle::Pairs r;
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((bits >> i) & 1U) r.insert(v[i]);
    if (oracle::is_refinement(m, r)) all.insert(r.begin(), r.end());
  }
  return all;
}

}  // namespace

TEST(Bisimulation, MatchesNaiveFixedPoint) {
  for (const auto& m : corpus(1, 300, 7))
    EXPECT_EQ(as_pairs(max_bisimulation(m)), oracle::bisimulation(m)) << format_model(m);
}

TEST(Bisimulation, QuotientIsMinimalAndBisimilar) {
  for (const auto& m : corpus(2, 200, 7)) {
    const Quotient q = quotient(m);
    EXPECT_TRUE(validate(q.model).empty());
    EXPECT_TRUE(is_bisimulation_minimal(q.model));
    const EpistemicModel u = disjoint_union(m, q.model);
    const auto bis = oracle::bisimulation(u);
    for (std::size_t s = 0; s < m.size(); ++s)
      EXPECT_TRUE(bis.count({s, m.size() + q.state_map[s]})) << format_model(m);
  }
}

TEST(Bisimulation, QuotientNamesFirstMember) {
  const EpistemicModel m = gen_ab_chain(4, "0000");
  const Quotient q = quotient(m);
  EXPECT_EQ(q.model.states(), std::vector<std::string>{"0"});
}

TEST(GradedBisimulation, MatchesLevelByLevelOracle) {
  for (const auto& m : corpus(3, 150, 6)) {
    const auto fam = graded_bisimulation(m, 4);
    ASSERT_EQ(fam.levels.size(), 5u);
    // Level-wise oracle: R^{k+1} = pairs of R^k with forth and back w.r.t. R^k.
    oracle::Pairs r = oracle::atom_pairs(m);
    for (std::size_t k = 0; k <= 4; ++k) {
      EXPECT_EQ(as_pairs(fam.levels[k]), r) << "level " << k << '\n' << format_model(m);
      oracle::Pairs next;
      for (auto [x, y] : r)
        if (oracle::forth_ok(m, r, x, y) && oracle::back_ok(m, r, x, y)) next.emplace(x, y);
      r = std::move(next);
    }
  }
}

TEST(GradedBisimulation, ChainsDifferOnlyAtDepth) {
  // Chains whose p-state is k+1 links from the point, of lengths k+2 and
  // k+4: the points agree up to depth k and are told apart at depth k+2.
  for (std::size_t k = 0; k <= 5; ++k) {
    std::string p1(k + 2, '0'), p2(k + 4, '0');
    p1[k + 1] = '1';
    p2[k + 1] = '1';
    const PointedModel m1{gen_ab_chain(k + 2, p1), 0};
    const PointedModel m2{gen_ab_chain(k + 4, p2), 0};
    EXPECT_TRUE(n_bisimilar(m1, m2, k)) << k;
    EXPECT_FALSE(n_bisimilar(m1, m2, k + 2)) << k;
  }
}

TEST(GradedBisimulation, UnionNamesAndDefaults) {
  const EpistemicModel u = disjoint_union(fixture_expr_M().model, gen_ab_chain(2, "10"));
  EXPECT_EQ(u.size(), 4u);
  EXPECT_EQ(u.state_name(2), "0#2");
  EXPECT_TRUE(validate(u).empty());
}

TEST(GradedBisimulation, AgreesWithEpistemicFormulasOfBoundedDepth) {
  // n-bisimilar points satisfy the same formulas of depth <= n.
  Rng rng(4);
  FormulaSpec fs;
  fs.fragment = Fragment::Epistemic;
  fs.depth = 2;
  for (const auto& m : corpus(5, 80, 6)) {
    const auto fam = graded_bisimulation(m, 2);
    for (int i = 0; i < 5; ++i) {
      const Formula f = random_formula(rng, fs);
      const StateSet ext = oracle::extension(m, f);
      for (auto [x, y] : fam.levels[2].pairs()) EXPECT_EQ(ext.contains(x), ext.contains(y)) << to_string(f);
    }
  }
}

TEST(Refinement, MatchesNaiveFixedPoint) {
  for (const auto& m : corpus(6, 300, 7)) {
    const auto res = max_refinement(m);
    EXPECT_EQ(as_pairs(res.relation), oracle::refinement(m)) << format_model(m);
    EXPECT_LE(res.iterations, m.size() * m.size() + 1);
  }
}

TEST(Refinement, IsTheUnionOfAllRefinements) {
  ModelSpec ms;
  ms.max_states = 3;
  ms.atoms = {"p"};
  Rng rng(8);
  for (int i = 0; i < 150; ++i) {
    const EpistemicModel m = random_model(rng, ms);
    EXPECT_EQ(as_pairs(max_refinement(m).relation), union_of_all_refinements(m)) << format_model(m);
  }
}

TEST(Refinement, IsAPreorderContainingBisimulation) {
  for (const auto& m : corpus(9, 200, 6)) {
    const auto r = max_refinement(m).relation;
    const auto b = max_bisimulation(m);
    EXPECT_TRUE(b.subset_of(r));
    for (std::size_t x = 0; x < m.size(); ++x) {
      EXPECT_TRUE(r.contains(x, x));
      r.successors(x).for_each([&](std::size_t y) { EXPECT_TRUE(r.successors(y).is_subset_of(r.successors(x))); });
    }
  }
}

TEST(Refinement, RestrictedToAliveMatchesSubmodel) {
  Rng rng(10);
  std::uniform_int_distribution<std::uint64_t> pick;
  for (const auto& m : corpus(11, 200, 6)) {
    const std::uint64_t mask = pick(rng) & oracle::full_mask(m.size());
    if (mask == 0) continue;
    const StateSet alive = StateSet::from_mask(m.size(), mask);
    const auto rel = max_refinement(m, alive).relation;
    const EpistemicModel sub = restrict(m, alive);
    const auto want = oracle::refinement(sub);
    oracle::Pairs got;
    for (auto [x, y] : rel.pairs()) {
      ASSERT_TRUE(alive.contains(x) && alive.contains(y));
      got.emplace(oracle::index_in(mask, x), oracle::index_in(mask, y));
    }
    EXPECT_EQ(got, want);
  }
}

TEST(Refinement, Compose9ContainsListedPairs) {
  const auto pm = fixture_compose9();
  const auto& m = pm.model;
  const auto r = max_refinement(m).relation;
  for (auto [x, y] : std::vector<std::pair<const char*, const char*>>{
           {"s", "u'"}, {"t", "t'"}, {"u", "u'"}, {"v", "v'"}, {"s'", "t'"}, {"t'", "v'"}})
    EXPECT_TRUE(r.contains(m.require_state(x), m.require_state(y))) << x << " -> " << y;
}

TEST(Refinement, DumpFormat) {
  const auto m = gen_ab_chain(2, "00");
  EXPECT_EQ(max_refinement(m).relation.dump(m), "0 -> 0\n0 -> 1\n1 -> 0\n1 -> 1\n");
}

TEST(Closure, ViolationWitness) {
  const auto pm = fixture_compose9();
  const auto& m = pm.model;
  const auto r = max_refinement(m).relation;
  const StateSet t = state_set(m, {"s"});
  const auto bad = closure_violation(r, t);
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(bad->first, m.require_state("s"));
  EXPECT_TRUE(r.contains(bad->first, bad->second));
  EXPECT_FALSE(t.contains(bad->second));
  EXPECT_TRUE(is_refinement_closed(m, m.atom_extension("p")));
}

TEST(Closure, EnginesAgreeWithSubsetFilter) {
  for (const auto& m : corpus(12, 200, 8)) {
    const auto rel = oracle::refinement(m);
    for (std::size_t s = 0; s < m.size(); ++s) {
      std::vector<StateSet> want;
      for (std::uint64_t mask = 1; mask <= oracle::full_mask(m.size()); ++mask)
        if (((mask >> s) & 1U) && oracle::closed(rel, mask)) want.push_back(StateSet::from_mask(m.size(), mask));
      EXPECT_EQ(closed_subsets_containing(m, s, EnumEngine::DagWalk), want);
      EXPECT_EQ(closed_subsets_containing(m, s, EnumEngine::Naive), want);
    }
  }
}

TEST(Closure, EnumerationOnAliveSubset) {
  Rng rng(13);
  std::uniform_int_distribution<std::uint64_t> pick;
  for (const auto& m : corpus(14, 200, 8)) {
    const std::uint64_t alive_mask = pick(rng) & oracle::full_mask(m.size());
    if (alive_mask == 0) continue;
    const StateSet alive = StateSet::from_mask(m.size(), alive_mask);
    const auto rel = max_refinement(m, alive).relation;
    const std::size_t point = alive.first();
    std::vector<StateSet> dag, naive;
    enumerate_closed(rel, alive, point, [&](const StateSet& t) { return dag.push_back(t), true; });
    enumerate_closed(rel, alive, point, [&](const StateSet& t) { return naive.push_back(t), true; },
                     EnumEngine::Naive);
    EXPECT_EQ(dag, naive);
    for (const auto& t : dag) {
      EXPECT_TRUE(t.is_subset_of(alive));
      EXPECT_TRUE(t.contains(point));
      EXPECT_FALSE(closure_violation(rel, t));
    }
  }
}

TEST(Closure, EarlyStopAndCap) {
  // Six singleton states with distinct valuations: every subset is closed.
  std::vector<std::set<std::string>> val{{}, {"p"}, {"q"}, {"r"}, {"p", "q"}, {"q", "r"}};
  const EpistemicModel m({"a"}, {"p", "q", "r"}, {"s0", "s1", "s2", "s3", "s4", "s5"},
                         {{{0}, {1}, {2}, {3}, {4}, {5}}}, val);
  const auto rel = max_refinement(m).relation;
  std::size_t n = 0;
  EXPECT_FALSE(enumerate_closed(rel, m.all(), 0, [&](const StateSet&) { return ++n < 2; }));
  EXPECT_EQ(n, 2u);
  EXPECT_THROW(enumerate_closed(rel, m.all(), 0, [](const StateSet&) { return true; }, EnumEngine::DagWalk, 5),
               ResourceError);
  EXPECT_THROW(closed_subsets_containing(m, 0, EnumEngine::DagWalk, 5), ResourceError);
}

TEST(Closure, PointOutsideAliveYieldsNothing) {
  const auto m = gen_ab_chain(3, "000");
  const auto rel = max_refinement(m).relation;
  std::size_t n = 0;
  EXPECT_TRUE(enumerate_closed(rel, StateSet(3, {1, 2}), 0, [&](const StateSet&) { return ++n, true; }));
  EXPECT_EQ(n, 0u);
}
