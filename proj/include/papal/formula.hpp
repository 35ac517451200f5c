#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace papal {

/// Formula constructors. `Know`/`Poss` carry an agent name, `Atom` an atom
/// name; announcements keep the announced formula on the left.
enum class Op : unsigned char {
  Top,
  Bottom,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Know,          // K_a
  Poss,          // L_a
  Announce,      // [phi]psi
  AnnounceDual,  // <phi>psi
  BoxApal,       // box
  DiaApal,       // dia
  BoxPos,        // box+
  DiaPos,        // dia+
};

/// Immutable formula value with shared structure. Copies are cheap.
class Formula {
 public:
  Formula() : node_(leaf(Op::Top, {})) {}

  Op op() const { return node_->op; }
  /// Atom name for `Atom`, agent name for `Know`/`Poss`, empty otherwise.
  const std::string& name() const { return node_->name; }
  /// Operand of unary nodes, left operand of binary nodes, announced formula.
  const Formula& lhs() const { return node_->kids[0]; }
  /// Right operand of binary nodes, body of announcements.
  const Formula& rhs() const { return node_->kids[1]; }
  std::size_t arity() const { return node_->kids.size(); }

  /// Stable node identity for the lifetime of this value (memo keys).
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op() || a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.node_->kids[i] == b.node_->kids[i])) return false;
    return true;
  }

  static Formula make(Op op, std::string name, std::vector<Formula> kids) {
    Formula f(nullptr);
    f.node_ = std::make_shared<const Node>(Node{op, std::move(name), std::move(kids)});
    return f;
  }

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Formula> kids;
  };
  explicit Formula(std::nullptr_t) {}
  static std::shared_ptr<const Node> leaf(Op op, std::string name) {
    return std::make_shared<const Node>(Node{op, std::move(name), {}});
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Builders

inline Formula top() { return Formula::make(Op::Top, {}, {}); }
inline Formula bottom() { return Formula::make(Op::Bottom, {}, {}); }
inline Formula atom(std::string name) { return Formula::make(Op::Atom, std::move(name), {}); }
inline Formula neg(Formula f) { return Formula::make(Op::Not, {}, {std::move(f)}); }
inline Formula conj(Formula a, Formula b) {
  return Formula::make(Op::And, {}, {std::move(a), std::move(b)});
}
inline Formula disj(Formula a, Formula b) {
  return Formula::make(Op::Or, {}, {std::move(a), std::move(b)});
}
inline Formula implies(Formula a, Formula b) {
  return Formula::make(Op::Implies, {}, {std::move(a), std::move(b)});
}
inline Formula iff(Formula a, Formula b) {
  return Formula::make(Op::Iff, {}, {std::move(a), std::move(b)});
}
inline Formula know(std::string agent, Formula f) {
  return Formula::make(Op::Know, std::move(agent), {std::move(f)});
}
inline Formula poss(std::string agent, Formula f) {
  return Formula::make(Op::Poss, std::move(agent), {std::move(f)});
}
inline Formula announce(Formula what, Formula body) {
  return Formula::make(Op::Announce, {}, {std::move(what), std::move(body)});
}
inline Formula announce_dual(Formula what, Formula body) {
  return Formula::make(Op::AnnounceDual, {}, {std::move(what), std::move(body)});
}
inline Formula box(Formula f) { return Formula::make(Op::BoxApal, {}, {std::move(f)}); }
inline Formula dia(Formula f) { return Formula::make(Op::DiaApal, {}, {std::move(f)}); }
inline Formula box_pos(Formula f) { return Formula::make(Op::BoxPos, {}, {std::move(f)}); }
inline Formula dia_pos(Formula f) { return Formula::make(Op::DiaPos, {}, {std::move(f)}); }

/// Left-nested conjunction; `true` for an empty list.
inline Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}
/// Left-nested disjunction; `false` for an empty list.
inline Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

inline bool is_unary(Op op) {
  switch (op) {
    case Op::Not:
    case Op::Know:
    case Op::Poss:
    case Op::BoxApal:
    case Op::DiaApal:
    case Op::BoxPos:
    case Op::DiaPos:
      return true;
    default:
      return false;
  }
}
inline bool is_quantifier(Op op) {
  return op == Op::BoxApal || op == Op::DiaApal || op == Op::BoxPos || op == Op::DiaPos;
}

// ---------------------------------------------------------------------------
// Printer

namespace detail {

// Binding strength; higher binds tighter.
inline int precedence(Op op) {
  switch (op) {
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    default:
      return 5;
  }
}

inline void print(std::ostream& os, const Formula& f, int min_prec);

inline void print_wrapped(std::ostream& os, const Formula& f, int min_prec) {
  if (precedence(f.op()) < min_prec) {
    os << '(';
    print(os, f, 0);
    os << ')';
  } else {
    print(os, f, min_prec);
  }
}

inline void print(std::ostream& os, const Formula& f, int /*min_prec*/) {
  switch (f.op()) {
    case Op::Top:
      os << "true";
      return;
    case Op::Bottom:
      os << "false";
      return;
    case Op::Atom:
      os << f.name();
      return;
    case Op::Not:
      os << '~';
      print_wrapped(os, f.lhs(), 5);
      return;
    case Op::Know:
    case Op::Poss:
      os << (f.op() == Op::Know ? "K " : "L ") << f.name() << ' ';
      print_wrapped(os, f.lhs(), 5);
      return;
    case Op::BoxApal:
    case Op::DiaApal:
    case Op::BoxPos:
    case Op::DiaPos: {
      static const char* kw[] = {"box ", "dia ", "box+ ", "dia+ "};
      os << kw[static_cast<int>(f.op()) - static_cast<int>(Op::BoxApal)];
      print_wrapped(os, f.lhs(), 5);
      return;
    }
    case Op::Announce:
    case Op::AnnounceDual:
      os << (f.op() == Op::Announce ? '[' : '<');
      print(os, f.lhs(), 0);
      os << (f.op() == Op::Announce ? ']' : '>');
      print_wrapped(os, f.rhs(), 5);
      return;
    case Op::And:
    case Op::Or:
    case Op::Iff: {
      const int p = precedence(f.op());
      print_wrapped(os, f.lhs(), p);
      os << (f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : " <-> ");
      print_wrapped(os, f.rhs(), p + 1);
      return;
    }
    case Op::Implies: {
      const int p = precedence(f.op());
      print_wrapped(os, f.lhs(), p + 1);
      os << " -> ";
      print_wrapped(os, f.rhs(), p);
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  detail::print(os, f, 0);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  detail::print(os, f, 0);
  return os;
}

// ---------------------------------------------------------------------------
// Structural measures

/// Epistemic depth: stacked K/L count; announcements add the depths of both
/// parts; arbitrary-announcement quantifiers are ignored.
inline std::size_t depth(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
      return 0;
    case Op::Know:
    case Op::Poss:
      return depth(f.lhs()) + 1;
    case Op::Announce:
    case Op::AnnounceDual:
      return depth(f.lhs()) + depth(f.rhs());
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
      return std::max(depth(f.lhs()), depth(f.rhs()));
    default:  // Not and quantifiers
      return depth(f.lhs());
  }
}

/// Propositional variables occurring in `f`.
inline std::set<std::string> vars(const Formula& f) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (g.op() == Op::Atom) out.insert(g.name());
    for (std::size_t i = 0; i < g.arity(); ++i) self(self, i == 0 ? g.lhs() : g.rhs());
  };
  walk(walk, f);
  return out;
}

/// Agents mentioned by K/L operators in `f`.
inline std::set<std::string> agents_of(const Formula& f) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (g.op() == Op::Know || g.op() == Op::Poss) out.insert(g.name());
    for (std::size_t i = 0; i < g.arity(); ++i) self(self, i == 0 ? g.lhs() : g.rhs());
  };
  walk(walk, f);
  return out;
}

/// Number of AST nodes.
inline std::size_t size(const Formula& f) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < f.arity(); ++i) n += size(i == 0 ? f.lhs() : f.rhs());
  return n;
}

/// Maximum nesting of arbitrary-announcement quantifiers.
inline std::size_t quantifier_nesting(const Formula& f) {
  std::size_t inner = 0;
  for (std::size_t i = 0; i < f.arity(); ++i)
    inner = std::max(inner, quantifier_nesting(i == 0 ? f.lhs() : f.rhs()));
  return inner + (is_quantifier(f.op()) ? 1 : 0);
}

inline bool has_quantifier(const Formula& f) { return quantifier_nesting(f) > 0; }

/// No announcements and no quantifiers: a formula of basic epistemic logic.
inline bool is_epistemic(const Formula& f) {
  if (f.op() == Op::Announce || f.op() == Op::AnnounceDual || is_quantifier(f.op()))
    return false;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (!is_epistemic(i == 0 ? f.lhs() : f.rhs())) return false;
  return true;
}

/// Literal membership in the positive grammar p | ~p | & | | | K_a.
/// `true`/`false` are accepted as abbreviations of p|~p and p&~p.
inline bool is_positive(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
      return true;
    case Op::Not:
      return f.lhs().op() == Op::Atom;
    case Op::And:
    case Op::Or:
      return is_positive(f.lhs()) && is_positive(f.rhs());
    case Op::Know:
      return is_positive(f.lhs());
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace detail {

inline Formula nnf(const Formula& f, bool negated) {
  switch (f.op()) {
    case Op::Top:
      return negated ? bottom() : top();
    case Op::Bottom:
      return negated ? top() : bottom();
    case Op::Atom:
      return negated ? neg(f) : f;
    case Op::Not:
      return nnf(f.lhs(), !negated);
    case Op::And:
      return negated ? disj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                     : conj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Or:
      return negated ? conj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                     : disj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Implies:
      return negated ? conj(nnf(f.lhs(), false), nnf(f.rhs(), true))
                     : disj(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case Op::Iff:
      if (negated)
        return disj(conj(nnf(f.lhs(), false), nnf(f.rhs(), true)),
                    conj(nnf(f.lhs(), true), nnf(f.rhs(), false)));
      return conj(disj(nnf(f.lhs(), true), nnf(f.rhs(), false)),
                  disj(nnf(f.lhs(), false), nnf(f.rhs(), true)));
    case Op::Know:
      return negated ? poss(f.name(), nnf(f.lhs(), true)) : know(f.name(), nnf(f.lhs(), false));
    case Op::Poss:
      return negated ? know(f.name(), nnf(f.lhs(), true)) : poss(f.name(), nnf(f.lhs(), false));
    case Op::Announce:
      return negated ? announce_dual(nnf(f.lhs(), false), nnf(f.rhs(), true))
                     : announce(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::AnnounceDual:
      return negated ? announce(nnf(f.lhs(), false), nnf(f.rhs(), true))
                     : announce_dual(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::BoxApal:
      return negated ? dia(nnf(f.lhs(), true)) : box(nnf(f.lhs(), false));
    case Op::DiaApal:
      return negated ? box(nnf(f.lhs(), true)) : dia(nnf(f.lhs(), false));
    case Op::BoxPos:
      return negated ? dia_pos(nnf(f.lhs(), true)) : box_pos(nnf(f.lhs(), false));
    case Op::DiaPos:
      return negated ? box_pos(nnf(f.lhs(), true)) : dia_pos(nnf(f.lhs(), false));
  }
  return f;
}

}  // namespace detail

/// Equivalent formula in which negation only wraps atoms and no -> / <-> remain.
inline Formula nnf(const Formula& f) { return detail::nnf(f, false); }

// ---------------------------------------------------------------------------
// Alternating modality stacks

namespace detail {

inline Formula stack(std::size_t n, const Formula& base, const char* innermost,
                     const char* other, bool knows) {
  Formula acc = base;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string agent = (i % 2 == 0) ? innermost : other;
    acc = knows ? know(agent, acc) : poss(agent, acc);
  }
  return acc;
}

}  // namespace detail

/// n alternating L operators, the innermost one L_a: L_b L_a ... base.
inline Formula stack_Lba(std::size_t n, const Formula& base) {
  return detail::stack(n, base, "a", "b", false);
}
/// n alternating L operators, the innermost one L_b.
inline Formula stack_Lab(std::size_t n, const Formula& base) {
  return detail::stack(n, base, "b", "a", false);
}
inline Formula stack_Kba(std::size_t n, const Formula& base) {
  return detail::stack(n, base, "a", "b", true);
}
inline Formula stack_Kab(std::size_t n, const Formula& base) {
  return detail::stack(n, base, "b", "a", true);
}

// ---------------------------------------------------------------------------
// Substitution

/// Replaces every atom whose name is a key of `subst` by the mapped formula.
inline Formula substitute(const Formula& f, const std::map<std::string, Formula>& subst) {
  if (f.op() == Op::Atom) {
    auto it = subst.find(f.name());
    return it == subst.end() ? f : it->second;
  }
  if (f.arity() == 0) return f;
  std::vector<Formula> kids;
  kids.push_back(substitute(f.lhs(), subst));
  if (f.arity() == 2) kids.push_back(substitute(f.rhs(), subst));
  return Formula::make(f.op(), f.name(), std::move(kids));
}

}  // namespace papal
