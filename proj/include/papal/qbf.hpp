#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "papal/errors.hpp"
#include "papal/evaluator.hpp"
#include "papal/formula.hpp"
#include "papal/model.hpp"
#include "papal/parser.hpp"

namespace papal {

enum class Quant { Forall, Exists };

/// Prenex QBF: quantifier prefix and a boolean matrix over its variables.
struct Qbf {
  std::vector<std::pair<Quant, std::string>> prefix;
  Formula matrix;
};

constexpr std::size_t kDefaultQbfCap = 8;

namespace detail {

inline bool is_boolean(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
      return true;
    case Op::Not:
      return is_boolean(f.lhs());
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
      return is_boolean(f.lhs()) && is_boolean(f.rhs());
    default:
      return false;
  }
}

inline void check_qbf(const Qbf& q) {
  if (q.prefix.empty()) throw SemanticError("QBF prefix is empty");
  std::set<std::string> bound;
  for (const auto& [quant, v] : q.prefix)
    if (!bound.insert(v).second) throw SemanticError("variable '" + v + "' is quantified twice");
  if (!is_boolean(q.matrix))
    throw SemanticError("QBF matrix may only use ~ & | -> <-> true false");
  for (const auto& v : vars(q.matrix))
    if (bound.count(v) == 0) throw SemanticError("variable '" + v + "' is not bound by the prefix");
}

inline Qbf parse_qdimacs(std::string_view text) {
  Qbf q;
  std::vector<Formula> clauses;
  std::set<std::string> bound;
  std::size_t nvars = 0;
  bool header = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<Formula> clause;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head == "c") continue;
    if (head == "p") {
      std::string cnf;
      std::size_t nclauses = 0;
      if (!(ls >> cnf >> nvars >> nclauses) || cnf != "cnf")
        throw ParseError(line_no, 1, {"p cnf <vars> <clauses>"}, "bad problem line");
      header = true;
      continue;
    }
    if (!header) throw ParseError(line_no, 1, {"p cnf"}, "missing problem line");
    auto var = [&](long lit) {
      const auto v = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (v == 0 || v > nvars)
        throw SemanticError("variable " + std::to_string(v) + " out of range");
      return "x" + std::to_string(v);
    };
    if (head == "a" || head == "e") {
      long lit = 0;
      while (ls >> lit && lit != 0) {
        const std::string name = var(lit);
        if (!bound.insert(name).second)
          throw SemanticError("variable '" + name + "' is quantified twice");
        q.prefix.emplace_back(head == "a" ? Quant::Forall : Quant::Exists, name);
      }
      continue;
    }
    std::istringstream cs(line);
    long lit = 0;
    while (cs >> lit) {
      if (lit == 0) {
        clauses.push_back(disj(clause));
        clause.clear();
      } else {
        clause.push_back(lit > 0 ? atom(var(lit)) : neg(atom(var(lit))));
      }
    }
    if (cs.fail() && !cs.eof()) throw ParseError(line_no, 1, {"integer literal"}, "bad clause line");
  }
  if (!header) throw ParseError(line_no, 1, {"p cnf"}, "missing problem line");
  if (!clause.empty()) clauses.push_back(disj(clause));
  // Free variables are existential at the outermost level.
  std::vector<std::pair<Quant, std::string>> free;
  for (std::size_t v = 1; v <= nvars; ++v)
    if (bound.count("x" + std::to_string(v)) == 0) free.emplace_back(Quant::Exists, "x" + std::to_string(v));
  q.prefix.insert(q.prefix.begin(), free.begin(), free.end());
  q.matrix = conj(clauses);
  return q;
}

}  // namespace detail

/// Reads either the line format
///
///     forall x1
///     exists x2 x3
///     matrix: x1 -> (x2 | ~x3)
///
/// or a QDIMACS prenex CNF file (recognized by its `p cnf` line). QDIMACS
/// variable n becomes `xn`.
inline Qbf parse_qbf(std::string_view text) {
  {
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (tok == "c") {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      if (tok == "p") {
        Qbf q = detail::parse_qdimacs(text);
        detail::check_qbf(q);
        return q;
      }
      break;
    }
  }
  const std::size_t at = text.find("matrix:");
  if (at == std::string_view::npos) throw ParseError(1, 1, {"matrix:"}, "missing matrix");
  Qbf q;
  std::istringstream pre{std::string(text.substr(0, at))};
  std::string tok;
  std::optional<Quant> current;
  while (pre >> tok) {
    if (tok == "forall") {
      current = Quant::Forall;
    } else if (tok == "exists") {
      current = Quant::Exists;
    } else if (!current) {
      throw ParseError(1, 1, {"forall", "exists"}, "unexpected '" + tok + "'");
    } else {
      const Formula v = parse(tok);
      if (v.op() != Op::Atom) throw ParseError(1, 1, {"variable"}, "bad variable '" + tok + "'");
      q.prefix.emplace_back(*current, tok);
    }
  }
  const std::size_t line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + at, '\n')) + 1;
  try {
    q.matrix = parse(text.substr(at + 7));
  } catch (const ParseError& e) {
    throw ParseError(line + e.line() - 1, e.column(), e.expected(), "in matrix");
  }
  detail::check_qbf(q);
  return q;
}

inline std::string format_qbf(const Qbf& q) {
  std::ostringstream os;
  for (const auto& [quant, v] : q.prefix) os << (quant == Quant::Forall ? "forall " : "exists ") << v << '\n';
  os << "matrix: " << q.matrix << '\n';
  return os.str();
}

/// Recursive expansion over all assignments.
inline bool eval_brute(const Qbf& q) {
  detail::check_qbf(q);
  if (q.prefix.size() > 20) throw ResourceError("eval_brute supports at most 20 variables");
  std::map<std::string, bool> env;
  auto matrix = [&](auto&& self, const Formula& f) -> bool {
    switch (f.op()) {
      case Op::Top:
        return true;
      case Op::Bottom:
        return false;
      case Op::Atom:
        return env.at(f.name());
      case Op::Not:
        return !self(self, f.lhs());
      case Op::And:
        return self(self, f.lhs()) && self(self, f.rhs());
      case Op::Or:
        return self(self, f.lhs()) || self(self, f.rhs());
      case Op::Implies:
        return !self(self, f.lhs()) || self(self, f.rhs());
      case Op::Iff:
        return self(self, f.lhs()) == self(self, f.rhs());
      default:
        throw SemanticError("non-boolean matrix");
    }
  };
  auto go = [&](auto&& self, std::size_t i) -> bool {
    if (i == q.prefix.size()) return matrix(matrix, q.matrix);
    const auto& [quant, v] = q.prefix[i];
    env[v] = false;
    const bool r0 = self(self, i + 1);
    if (quant == Quant::Exists ? r0 : !r0) return r0;
    env[v] = true;
    return self(self, i + 1);
  };
  return go(go, 0);
}

// ---------------------------------------------------------------------------
// Reduction to model checking

/// Names used by the encoding for the i-th prefix variable (1-based).
inline std::string qbf_pos_atom(std::size_t i) { return "xp" + std::to_string(i); }
inline std::string qbf_neg_atom(std::size_t i) { return "xn" + std::to_string(i); }
inline const char* kQbfAgent = "j";

/// Model with the point s (where x0 holds) and, per variable i, states si_1
/// (xp_i) and si_0 (xn_i); one agent j with a single class. The formula
/// quantifies over positive announcements, each step removing one state of
/// a pair to fix the corresponding variable.
inline std::pair<PointedModel, Formula> encode(const Qbf& q) {
  detail::check_qbf(q);
  const std::size_t k = q.prefix.size();
  std::vector<std::string> atoms{"x0"};
  std::vector<std::string> states{"s"};
  std::vector<std::set<std::string>> val{{"x0"}};
  for (std::size_t i = 1; i <= k; ++i) {
    atoms.push_back(qbf_pos_atom(i));
    atoms.push_back(qbf_neg_atom(i));
    states.push_back("s" + std::to_string(i) + "_0");
    val.push_back({qbf_neg_atom(i)});
    states.push_back("s" + std::to_string(i) + "_1");
    val.push_back({qbf_pos_atom(i)});
  }
  std::vector<std::size_t> all(states.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  EpistemicModel m({kQbfAgent}, atoms, states, {{all}}, val);

  auto X = [](std::size_t i) { return poss(kQbfAgent, atom(qbf_pos_atom(i))); };
  auto Xbar = [](std::size_t i) { return poss(kQbfAgent, atom(qbf_neg_atom(i))); };
  auto U = [&](std::size_t i) { return conj(X(i), Xbar(i)); };
  auto D = [&](std::size_t i) { return iff(X(i), neg(Xbar(i))); };
  const Formula U0 = poss(kQbfAgent, atom("x0"));

  std::map<std::string, Formula> subst;
  for (std::size_t i = 1; i <= k; ++i) subst.emplace(q.prefix[i - 1].second, X(i));

  std::vector<Formula> base{U0};
  for (std::size_t i = 1; i <= k; ++i) base.push_back(D(i));
  base.push_back(substitute(q.matrix, subst));
  Formula f = conj(base);
  for (std::size_t n = k; n >= 1; --n) {
    std::vector<Formula> guard{U0};
    for (std::size_t i = 1; i <= n; ++i) guard.push_back(D(i));
    for (std::size_t i = n + 1; i <= k; ++i) guard.push_back(U(i));
    if (q.prefix[n - 1].first == Quant::Forall)
      f = box_pos(implies(conj(guard), f));
    else
      f = dia_pos(conj(conj(guard), f));
  }
  return {PointedModel{m, 0}, f};
}

/// Decides `q` by model checking its encoding.
inline bool solve(const Qbf& q, std::size_t cap = kDefaultQbfCap, CheckConfig cfg = {}) {
  detail::check_qbf(q);
  if (q.prefix.size() > cap)
    throw ResourceError("QBF has " + std::to_string(q.prefix.size()) + " variables, more than the cap of " +
                        std::to_string(cap));
  auto [pm, f] = encode(q);
  cfg.nesting_cap = std::max(cfg.nesting_cap, q.prefix.size());
  cfg.state_cap = std::max(cfg.state_cap, pm.model.size());
  return holds(pm, f, cfg);
}

}  // namespace papal
