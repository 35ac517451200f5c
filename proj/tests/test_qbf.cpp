#include <gtest/gtest.h>

#include "oracles.hpp"
#include "papal/papal.hpp"

using namespace papal;

namespace {

// Boolean formula over vars whose truth table is given by the bits of `table`
// (bit i is the value under the assignment whose binary code is i), as a DNF.
Formula from_table(const std::vector<std::string>& vars, std::uint64_t table) {
  std::vector<Formula> terms;
  for (std::uint64_t row = 0; row < (1ULL << vars.size()); ++row) {
    if (((table >> row) & 1U) == 0) continue;
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < vars.size(); ++i)
      lits.push_back(((row >> i) & 1U) ? atom(vars[i]) : neg(atom(vars[i])));
    terms.push_back(conj(lits));
  }
  return disj(terms);
}

Formula random_matrix(Rng& rng, const std::vector<std::string>& vars, std::size_t height) {
  std::uniform_int_distribution<int> d(0, 5);
  if (height == 0) {
    Formula v = atom(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]);
    return d(rng) < 2 ? neg(v) : v;
  }
  switch (d(rng)) {
    case 0:
      return neg(random_matrix(rng, vars, height - 1));
    case 1:
      return conj(random_matrix(rng, vars, height - 1), random_matrix(rng, vars, height - 1));
    case 2:
      return disj(random_matrix(rng, vars, height - 1), random_matrix(rng, vars, height - 1));
    case 3:
      return implies(random_matrix(rng, vars, height - 1), random_matrix(rng, vars, height - 1));
    case 4:
      return iff(random_matrix(rng, vars, height - 1), random_matrix(rng, vars, height - 1));
    default:
      return random_matrix(rng, vars, 0);
  }
}

}  // namespace

TEST(QbfParse, LineFormat) {
  const Qbf q = parse_qbf("forall x1\nexists x2 x3\nmatrix: x1 -> (x2 | ~x3)\n");
  ASSERT_EQ(q.prefix.size(), 3u);
  EXPECT_EQ(q.prefix[0], std::make_pair(Quant::Forall, std::string("x1")));
  EXPECT_EQ(q.prefix[2], std::make_pair(Quant::Exists, std::string("x3")));
  EXPECT_EQ(to_string(q.matrix), "x1 -> x2 | ~x3");
  EXPECT_EQ(parse_qbf(format_qbf(q)).matrix, q.matrix);
}

TEST(QbfParse, Qdimacs) {
  const Qbf q = parse_qbf("c example\np cnf 3 2\na 1 0\ne 2 0\n1 -2 0\n-1 2 3 0\n");
  ASSERT_EQ(q.prefix.size(), 3u);
  EXPECT_EQ(q.prefix[0], std::make_pair(Quant::Exists, std::string("x3")));  // free, outermost
  EXPECT_EQ(q.prefix[1], std::make_pair(Quant::Forall, std::string("x1")));
  EXPECT_EQ(to_string(q.matrix), "(x1 | ~x2) & (~x1 | x2 | x3)");
}

TEST(QbfParse, Errors) {
  EXPECT_THROW(parse_qbf("forall x\nmatrix: y"), SemanticError);
  EXPECT_THROW(parse_qbf("forall x x\nmatrix: x"), SemanticError);
  EXPECT_THROW(parse_qbf("forall x\nmatrix: K a x"), SemanticError);
  EXPECT_THROW(parse_qbf("matrix: true"), SemanticError);
  EXPECT_THROW(parse_qbf("forall x\n"), ParseError);
  EXPECT_THROW(parse_qbf("x\nmatrix: x"), ParseError);
  try {
    parse_qbf("forall x\nexists y\nmatrix: x &\n  (y |)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse_qbf("p cnf 2 1\na 3 0\n1 0\n"), SemanticError);
  EXPECT_THROW(parse_qbf("p dnf 2 1\n"), ParseError);
}

TEST(QbfBrute, Small) {
  EXPECT_TRUE(eval_brute(parse_qbf("forall x1 exists x2 matrix: x1 <-> x2")));
  EXPECT_FALSE(eval_brute(parse_qbf("exists x2 forall x1 matrix: x1 <-> x2")));
  EXPECT_FALSE(eval_brute(parse_qbf("forall x matrix: x")));
  EXPECT_TRUE(eval_brute(parse_qbf("exists x matrix: x")));
}

TEST(QbfEncode, ShapeForTwoVariables) {
  const auto [pm, f] = encode(parse_qbf("forall x1 exists x2 matrix: x1 | x2"));
  const auto& m = pm.model;
  EXPECT_EQ(m.size(), 5u);
  EXPECT_EQ(pm.point_name(), "s");
  ASSERT_EQ(m.agents(), std::vector<std::string>{"j"});
  EXPECT_EQ(m.partition(0).size(), 1u);
  EXPECT_EQ(m.valuation(m.require_state("s")), std::set<std::string>{"x0"});
  EXPECT_EQ(m.valuation(m.require_state("s1_1")), std::set<std::string>{"xp1"});
  EXPECT_EQ(m.valuation(m.require_state("s1_0")), std::set<std::string>{"xn1"});
  EXPECT_EQ(m.valuation(m.require_state("s2_1")), std::set<std::string>{"xp2"});
  EXPECT_EQ(m.valuation(m.require_state("s2_0")), std::set<std::string>{"xn2"});
  EXPECT_EQ(f.op(), Op::BoxPos);
  EXPECT_EQ(f.lhs().op(), Op::Implies);
  EXPECT_EQ(f.lhs().rhs().op(), Op::DiaPos);
  EXPECT_EQ(quantifier_nesting(f), 2u);
  EXPECT_TRUE(validate(m).empty());
}

TEST(QbfEncode, ExhaustiveUpToTwoVariables) {
  const std::vector<std::string> vars{"x1", "x2"};
  std::size_t checked = 0;
  for (std::size_t k = 1; k <= 2; ++k) {
    const std::vector<std::string> vs(vars.begin(), vars.begin() + static_cast<long>(k));
    for (std::uint64_t table = 0; table < (1ULL << (1ULL << k)); ++table)
      for (std::uint64_t qs = 0; qs < (1ULL << k); ++qs) {
        Qbf q;
        for (std::size_t i = 0; i < k; ++i) q.prefix.emplace_back((qs >> i) & 1U ? Quant::Forall : Quant::Exists, vs[i]);
        q.matrix = from_table(vs, table);
        if (q.matrix.op() == Op::Bottom) q.matrix = conj(atom(vs[0]), neg(atom(vs[0])));
        ASSERT_EQ(solve(q), eval_brute(q)) << format_qbf(q);
        ++checked;
      }
  }
  EXPECT_EQ(checked, 2u * 4 + 4u * 16);
}

TEST(QbfEncode, RandomThreeVariables) {
  Rng rng(61);
  const std::vector<std::string> vars{"x1", "x2", "x3"};
  for (int i = 0; i < 60; ++i) {
    Qbf q;
    for (const auto& v : vars) q.prefix.emplace_back(detail::coin(rng) ? Quant::Forall : Quant::Exists, v);
    q.matrix = random_matrix(rng, vars, 3);
    EXPECT_EQ(solve(q), eval_brute(q)) << format_qbf(q);
  }
}

TEST(QbfEncode, OracleSemanticsAgree) {
  // The definitional evaluator gives the same verdict on the encoding.
  Rng rng(62);
  const std::vector<std::string> vars{"x1", "x2"};
  for (int i = 0; i < 20; ++i) {
    Qbf q;
    for (const auto& v : vars) q.prefix.emplace_back(detail::coin(rng) ? Quant::Forall : Quant::Exists, v);
    q.matrix = random_matrix(rng, vars, 2);
    const auto [pm, f] = encode(q);
    EXPECT_EQ(oracle::holds(pm.model, f, pm.point), eval_brute(q)) << format_qbf(q);
  }
}

TEST(QbfEncode, QuantifierStepFixesOneVariable) {
  // Each restriction the quantifier can reach while the guard holds keeps s
  // and exactly one state of the pair for the variable it fixes.
  const auto [pm, f] = encode(parse_qbf("exists x1 exists x2 matrix: x1 & ~x2"));
  Evaluator ev(pm.model);
  const Formula guard = f.lhs().lhs();
  std::size_t valid = 0;
  ev.for_each_restriction(pm.model.all(), pm.point, true, [&](const StateSet& t) {
    if (!ev.holds(guard, t, pm.point)) return true;
    ++valid;
    EXPECT_TRUE(t.contains(0));
    EXPECT_NE(t.contains(1), t.contains(2));
    EXPECT_TRUE(t.contains(3) && t.contains(4));
    return true;
  });
  EXPECT_EQ(valid, 2u);
}

TEST(QbfSolve, Cap) {
  Qbf q;
  for (int i = 1; i <= 9; ++i) q.prefix.emplace_back(Quant::Exists, "x" + std::to_string(i));
  q.matrix = atom("x1");
  EXPECT_THROW(solve(q), ResourceError);
  EXPECT_THROW(solve(q, 3), ResourceError);
}
