#include <gtest/gtest.h>

#include "papal/papal.hpp"

using namespace papal;

TEST(Validity, StandardSchemasHold) {
  std::uint64_t seed = 100;
  for (const auto& s : standard_schemas()) {
    Sampler sm(seed++);
    const auto rep = check_validity(s, sm, 40);
    EXPECT_TRUE(rep.ok()) << s.name << ": " << (rep.ok() ? "" : rep.violations.front().instance);
    EXPECT_EQ(rep.instances, 40u * s.resamples);
  }
}

TEST(Validity, PositiveSchemasHold) {
  std::uint64_t seed = 200;
  for (const auto& s : positive_schemas()) {
    Sampler sm(seed++);
    EXPECT_TRUE(check_validity(s, sm, 60).ok()) << s.name;
  }
}

TEST(Validity, InvalidSchemaIsCaught) {
  // Not valid: the converse of preservation, and positivity fails under
  // negation.
  Sampler sm(7);
  const auto rep = check_validity(make_schema("bogus", "[psi]phi -> phi", {{"phi", Sort::Any}, {"psi", Sort::Any}}),
                                  sm, 100);
  EXPECT_FALSE(rep.ok());
  const auto& v = rep.violations.front();
  const auto mf = parse_model(v.model);
  const Formula f = parse(v.instance);
  EXPECT_FALSE(holds(PointedModel{mf.model, mf.model.require_state(v.state)}, f));

  Sampler sm2(8);
  EXPECT_FALSE(check_validity(make_schema("neg pres", "~phi -> [psi]~phi", {{"phi", Sort::Positive}, {"psi", Sort::Any}}),
                              sm2, 200)
                   .ok());
}

TEST(Validity, APlusRequiresPositiveAnnouncement) {
  // v refines u, so every positive announcement keeping u keeps v; the
  // announcement psi keeps u and drops v.
  const auto mf = parse_model(
      "agents: a b\natoms: p\nstates: y u v\nval u: p\nval v: p\n"
      "rel a: {y u} {v}\nrel b: {y} {u v}\npoint: y\n");
  const PointedModel pm = mf.at();
  const Formula phi = parse("L a p -> L a (p & L b K a p)");
  const Formula psi = parse("~p | L a ~p");
  EXPECT_TRUE(holds(pm, box_pos(phi)));
  EXPECT_FALSE(holds(pm, announce(psi, phi)));
  EXPECT_FALSE(holds(pm, box(phi)));
  EXPECT_FALSE(is_positive(psi));
}

TEST(Validity, InvariantChecks) {
  Sampler a(1), b(2), c(3), d(4);
  EXPECT_TRUE(check_positive_closure(a, 100).ok());
  EXPECT_TRUE(check_nnf_equivalence(b, 100).ok());
  EXPECT_TRUE(check_bisimulation_invariance(c, 60).ok());
  EXPECT_TRUE(check_engine_agreement(d, 100).ok());
}

TEST(Validity, RunPropsIsDeterministic) {
  const auto r1 = run_props(5, 42);
  const auto r2 = run_props(5, 42);
  ASSERT_EQ(r1.size(), r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    EXPECT_EQ(report_to_json(r1[i]), report_to_json(r2[i]));
    EXPECT_TRUE(r1[i].ok()) << r1[i].name;
  }
}
