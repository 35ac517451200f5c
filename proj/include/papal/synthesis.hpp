#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "papal/errors.hpp"
#include "papal/evaluator.hpp"
#include "papal/formula.hpp"
#include "papal/model.hpp"
#include "papal/relations.hpp"
#include "papal/state_set.hpp"

namespace papal {

struct SynthesisResult {
  Formula formula;
  StateSet target;
  /// The formula's extension was recomputed and equals `target`.
  bool verified = false;
};

/// Raised when a target set is not closed under the maximal refinement.
/// (from, to) is a pair of the refinement with `from` inside and `to` outside.
class NotClosedError : public PreconditionError {
 public:
  NotClosedError(std::string from, std::string to)
      : PreconditionError("set is not closed under refinements: " + from + " is in it, " + to +
                          " refines " + from + " but is not"),
        from_(std::move(from)),
        to_(std::move(to)) {}
  const std::string& from() const { return from_; }
  const std::string& to() const { return to_; }

 private:
  std::string from_;
  std::string to_;
};

// ---------------------------------------------------------------------------
// Simplification

namespace detail {

inline void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

inline bool contains_formula(const std::vector<Formula>& xs, const Formula& f) {
  return std::find(xs.begin(), xs.end(), f) != xs.end();
}

}  // namespace detail

/// Cheap equivalence-preserving cleanup: unit and zero elements of & and |,
/// duplicate operands, absorption, K a true, double negation.
inline Formula simplify(const Formula& f) {
  switch (f.op()) {
    case Op::Not: {
      Formula g = simplify(f.lhs());
      if (g.op() == Op::Not) return g.lhs();
      if (g.op() == Op::Top) return bottom();
      if (g.op() == Op::Bottom) return top();
      return neg(g);
    }
    case Op::Know: {
      Formula g = simplify(f.lhs());
      if (g.op() == Op::Top) return top();
      return know(f.name(), g);
    }
    case Op::Poss: {
      Formula g = simplify(f.lhs());
      if (g.op() == Op::Bottom) return bottom();
      return poss(f.name(), g);
    }
    case Op::And:
    case Op::Or: {
      const bool is_and = f.op() == Op::And;
      const Op unit = is_and ? Op::Top : Op::Bottom;
      const Op zero = is_and ? Op::Bottom : Op::Top;
      const Op dual = is_and ? Op::Or : Op::And;
      std::vector<Formula> raw;
      detail::flatten(f, f.op(), raw);
      std::vector<Formula> parts;
      for (const auto& r : raw) {
        Formula g = simplify(r);
        if (g.op() == zero) return g;
        if (g.op() == unit) continue;
        std::vector<Formula> inner;
        detail::flatten(g, f.op(), inner);
        for (auto& x : inner)
          if (!detail::contains_formula(parts, x)) parts.push_back(x);
      }
      // Absorption: drop X & (... | X | ...) and X | (... & X & ...).
      std::vector<Formula> kept;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        bool absorbed = false;
        if (parts[i].op() == dual) {
          std::vector<Formula> sub;
          detail::flatten(parts[i], dual, sub);
          for (std::size_t j = 0; j < parts.size() && !absorbed; ++j)
            if (j != i && detail::contains_formula(sub, parts[j])) absorbed = true;
        }
        if (!absorbed) kept.push_back(parts[i]);
      }
      return is_and ? conj(kept) : disj(kept);
    }
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
      return f;
    default: {
      std::vector<Formula> kids;
      kids.push_back(simplify(f.lhs()));
      if (f.arity() == 2) kids.push_back(simplify(f.rhs()));
      return Formula::make(f.op(), f.name(), std::move(kids));
    }
  }
}

// ---------------------------------------------------------------------------
// Small builders

/// Literals over `atoms` (in declared order) matching the valuation of `s`.
inline Formula char_valuation(const EpistemicModel& m, std::size_t s, const std::set<std::string>& atoms) {
  for (const auto& p : atoms)
    if (!m.has_atom(p)) throw SemanticError("undeclared atom '" + p + "'");
  std::vector<Formula> lits;
  for (const auto& p : m.atoms())
    if (atoms.count(p) != 0) lits.push_back(m.holds(s, p) ? atom(p) : neg(atom(p)));
  return conj(lits);
}

inline Formula char_valuation(const EpistemicModel& m, std::size_t s) {
  return char_valuation(m, s, std::set<std::string>(m.atoms().begin(), m.atoms().end()));
}

/// L_ba^n d0 & ~L_ba^(n-1) d0: on a one-edged chain whose edge is defined by
/// d0, the state at distance n from the edge.
inline Formula chain_delta(std::size_t n, const Formula& delta0) {
  if (n == 0) throw PreconditionError("chain_delta needs n >= 1");
  return conj(stack_Lba(n, delta0), neg(stack_Lba(n - 1, delta0)));
}

namespace detail {

inline SynthesisResult verify(const EpistemicModel& m, Formula f, const StateSet& target) {
  const StateSet got = extension(m, f);
  if (got != target)
    throw Error("internal error: synthesized formula " + to_string(f) + " misses its target");
  return {std::move(f), target, true};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Distinguishing formulas

/// Epistemic formula whose extension in `m` is exactly `t`. `m` must be
/// bisimulation minimal.
inline SynthesisResult distinguishing_formula(const EpistemicModel& m, const StateSet& t) {
  if (t.empty()) throw PreconditionError("empty target set");
  if (!is_bisimulation_minimal(m))
    throw PreconditionError("model is not bisimulation minimal; minimize it first");
  if (t == m.all()) return detail::verify(m, top(), t);

  const std::size_t N = m.size();
  // Blocks of the current partition, each with a formula defining it exactly.
  std::vector<std::size_t> block(N);
  std::vector<Formula> delta;
  {
    std::map<std::set<std::string>, std::size_t> ids;
    for (std::size_t s = 0; s < N; ++s) {
      auto [it, fresh] = ids.emplace(m.valuation(s), ids.size());
      if (fresh) delta.push_back(char_valuation(m, s));
      block[s] = it->second;
    }
    if (delta.size() == 1) delta[0] = top();
  }
  for (;;) {
    using Sig = std::vector<std::set<std::size_t>>;
    std::vector<Sig> sig(N);
    for (std::size_t s = 0; s < N; ++s)
      for (std::size_t a = 0; a < m.agents().size(); ++a) {
        std::set<std::size_t> seen;
        m.cell(a, s).for_each([&](std::size_t u) { seen.insert(block[u]); });
        sig[s].push_back(std::move(seen));
      }
    std::map<std::pair<std::size_t, Sig>, std::size_t> ids;
    std::vector<std::size_t> next(N);
    std::vector<Formula> next_delta;
    bool split = false;
    for (std::size_t s = 0; s < N; ++s) {
      auto [it, fresh] = ids.emplace(std::make_pair(block[s], sig[s]), ids.size());
      next[s] = it->second;
      if (!fresh) continue;
      // Agents whose view varies inside the old block.
      std::vector<Formula> parts{delta[block[s]]};
      for (std::size_t a = 0; a < m.agents().size(); ++a) {
        bool varies = false;
        for (std::size_t u = 0; u < N; ++u)
          if (block[u] == block[s] && sig[u][a] != sig[s][a]) varies = true;
        if (!varies) continue;
        split = true;
        const std::string& ag = m.agents()[a];
        std::vector<Formula> seen;
        for (auto c : sig[s][a]) {
          parts.push_back(poss(ag, delta[c]));
          seen.push_back(delta[c]);
        }
        parts.push_back(know(ag, disj(seen)));
      }
      next_delta.push_back(simplify(conj(parts)));
    }
    block = std::move(next);
    delta = std::move(next_delta);
    if (!split) break;
  }
  std::vector<Formula> members;
  std::set<std::size_t> used;
  t.for_each([&](std::size_t s) {
    if (used.insert(block[s]).second) members.push_back(delta[block[s]]);
  });
  return detail::verify(m, simplify(disj(members)), t);
}

/// Epistemic formula defining `t` in any model, provided `t` is a union of
/// bisimulation classes (computed on the quotient).
inline SynthesisResult bisimulation_closed_formula(const EpistemicModel& m, const StateSet& t) {
  if (t.empty()) throw PreconditionError("empty target set");
  const Quotient q = quotient(m);
  StateSet qt(q.model.size());
  t.for_each([&](std::size_t s) { qt.insert(q.state_map[s]); });
  for (std::size_t s = 0; s < m.size(); ++s)
    if (qt.contains(q.state_map[s]) != t.contains(s))
      throw PreconditionError("set is not closed under bisimulation: " + m.state_name(s));
  return detail::verify(m, distinguishing_formula(q.model, qt).formula, t);
}

// ---------------------------------------------------------------------------
// Positive defining formulas

/// Synthesizes positive formulas for refinement-closed subsets of one model.
/// Small formulas come from a size-bounded enumeration of positive formulas
/// (one per distinct extension); the rest are assembled from pairwise
/// separators, falling back to the trace of the refinement fixed point.
class PositiveSynthesizer {
 public:
  struct Limits {
    std::size_t max_size = 9;
    std::size_t max_entries = 4096;
    std::size_t max_pair_ops = 2'000'000;
  };

  explicit PositiveSynthesizer(const EpistemicModel& m) : PositiveSynthesizer(m, Limits{}) {}
  PositiveSynthesizer(const EpistemicModel& m, Limits lim) : m_(m), lim_(lim) {
    compute_rounds();
  }

  const StatePairRelation& refinement() const { return rounds_.back(); }

  /// Positive formula with extension exactly `t`.
  SynthesisResult define(const StateSet& t) {
    if (t.empty()) throw PreconditionError("empty target set");
    if (auto bad = closure_violation(refinement(), t))
      throw NotClosedError(m_.state_name(bad->first), m_.state_name(bad->second));
    if (t == m_.all()) return detail::verify(m_, top(), t);
    build_table();
    if (auto it = table_.find(t); it != table_.end()) return detail::verify(m_, it->second.formula, t);

    const StateSet outside = m_.all() - t;
    std::vector<Formula> disjuncts;
    t.for_each([&](std::size_t s) {
      std::vector<Formula> conjuncts;
      outside.for_each([&](std::size_t u) { conjuncts.push_back(separator(s, u)); });
      disjuncts.push_back(conj(conjuncts));
    });
    return detail::verify(m_, simplify(disj(disjuncts)), t);
  }

  /// Positive formula true at x and false at y; requires (x, y) outside the
  /// maximal refinement.
  Formula separator(std::size_t x, std::size_t y) {
    if (refinement().contains(x, y))
      throw PreconditionError(m_.state_name(y) + " refines " + m_.state_name(x) +
                              "; no positive formula separates them");
    build_table();
    const Entry* best = nullptr;
    for (const auto& [ext, e] : table_)
      if (ext.contains(x) && !ext.contains(y) && (best == nullptr || e.size < best->size)) best = &e;
    if (best != nullptr) return best->formula;
    return trace_separator(x, y);
  }

  /// Separator read off the round at which (x, y) left the fixed-point
  /// iteration; independent of the enumeration table.
  Formula trace_separator(std::size_t x, std::size_t y) {
    auto key = std::make_pair(x, y);
    if (auto it = trace_memo_.find(key); it != trace_memo_.end()) return it->second;
    std::size_t k = 0;
    while (k < rounds_.size() && rounds_[k].contains(x, y)) ++k;
    if (k == rounds_.size())
      throw PreconditionError(m_.state_name(y) + " refines " + m_.state_name(x));
    Formula out;
    if (k == 0) {
      for (const auto& p : m_.atoms()) {
        if (m_.holds(x, p) && !m_.holds(y, p)) {
          out = atom(p);
          break;
        }
        if (!m_.holds(x, p) && m_.holds(y, p)) {
          out = neg(atom(p));
          break;
        }
      }
    } else {
      const StatePairRelation& prev = rounds_[k - 1];
      bool found = false;
      for (std::size_t a = 0; a < m_.agents().size() && !found; ++a) {
        m_.cell(a, y).for_each([&](std::size_t y2) {
          if (found) return;
          bool matched = false;
          m_.cell(a, x).for_each([&](std::size_t x2) { matched = matched || prev.contains(x2, y2); });
          if (matched) return;
          std::vector<Formula> ds;
          m_.cell(a, x).for_each([&](std::size_t x2) { ds.push_back(trace_separator(x2, y2)); });
          out = know(m_.agents()[a], disj(ds));
          found = true;
        });
      }
      if (!found) throw Error("internal error: refinement trace has no failing agent");
    }
    trace_memo_.emplace(key, out);
    return out;
  }

 private:
  struct Entry {
    Formula formula;
    std::size_t size;
  };

  void compute_rounds() {
    const std::size_t N = m_.size();
    StatePairRelation r(N);
    for (std::size_t x = 0; x < N; ++x)
      for (std::size_t y = 0; y < N; ++y)
        if (m_.valuation(x) == m_.valuation(y)) r.insert(x, y);
    rounds_.push_back(r);
    for (;;) {
      StatePairRelation next(N);
      for (std::size_t x = 0; x < N; ++x)
        r.successors(x).for_each([&](std::size_t y) {
          for (std::size_t a = 0; a < m_.agents().size(); ++a) {
            StateSet cover(N);
            m_.cell(a, x).for_each([&](std::size_t x2) { cover |= r.successors(x2); });
            if (!m_.cell(a, y).is_subset_of(cover)) return;
          }
          next.insert(x, y);
        });
      if (next == r) break;
      r = next;
      rounds_.push_back(r);
    }
  }

  void build_table() {
    if (table_built_) return;
    table_built_ = true;
    const std::size_t N = m_.size();
    std::vector<std::vector<StateSet>> levels(lim_.max_size + 1);
    auto offer = [&](const StateSet& ext, const Formula& f, std::size_t size) {
      if (table_.size() >= lim_.max_entries) return;
      if (table_.emplace(ext, Entry{f, size}).second) levels[size].push_back(ext);
    };
    for (const auto& p : m_.atoms()) offer(m_.atom_extension(p), atom(p), 1);
    for (const auto& p : m_.atoms()) offer(m_.all() - m_.atom_extension(p), neg(atom(p)), 2);
    std::size_t ops = 0;
    for (std::size_t size = 2; size <= lim_.max_size; ++size) {
      for (std::size_t a = 0; a < m_.agents().size(); ++a)
        for (const auto& ext : std::vector<StateSet>(levels[size - 1])) {
          StateSet k(N);
          for (std::size_t s = 0; s < N; ++s)
            if (m_.cell(a, s).is_subset_of(ext)) k.insert(s);
          offer(k, know(m_.agents()[a], table_.at(ext).formula), size);
        }
      for (std::size_t i = 1; i + i <= size - 1; ++i) {
        const std::size_t j = size - 1 - i;
        const auto li = levels[i];
        const auto lj = levels[j];
        for (std::size_t x = 0; x < li.size(); ++x)
          for (std::size_t y = (i == j ? x + 1 : 0); y < lj.size(); ++y) {
            if (++ops > lim_.max_pair_ops) return;
            const Formula& fx = table_.at(li[x]).formula;
            const Formula& fy = table_.at(lj[y]).formula;
            offer(li[x] & lj[y], conj(fx, fy), size);
            offer(li[x] | lj[y], disj(fx, fy), size);
          }
      }
    }
  }

  const EpistemicModel& m_;
  Limits lim_;
  std::vector<StatePairRelation> rounds_;
  bool table_built_ = false;
  std::map<StateSet, Entry> table_;
  std::map<std::pair<std::size_t, std::size_t>, Formula> trace_memo_;
};

/// Positive formula whose extension is exactly `t`; `t` must be nonempty and
/// closed under the maximal refinement (NotClosedError otherwise).
inline SynthesisResult positive_defining_formula(const EpistemicModel& m, const StateSet& t) {
  return PositiveSynthesizer(m).define(t);
}

}  // namespace papal
