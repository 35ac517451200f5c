#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "papal/errors.hpp"
#include "papal/formula.hpp"
#include "papal/model.hpp"
#include "papal/relations.hpp"
#include "papal/state_set.hpp"

namespace papal {

struct CheckConfig {
  /// Largest model (or restriction) over which quantifiers may enumerate.
  std::size_t state_cap = kDefaultStateCap;
  std::size_t nesting_cap = 8;
  /// Whether box/dia (announcements of arbitrary epistemic formulas) are allowed.
  bool apal_enabled = true;
  bool memo_enabled = true;
  EnumEngine engine = EnumEngine::DagWalk;
};

struct CheckStats {
  std::size_t nodes_visited = 0;
  std::size_t cache_hits = 0;
  std::size_t restrictions_enumerated = 0;
};

/// Throws SemanticError for atoms or agents `m` does not declare.
inline void check_symbols(const EpistemicModel& m, const Formula& f) {
  for (const auto& p : vars(f))
    if (!m.has_atom(p)) throw SemanticError("undeclared atom '" + p + "'");
  for (const auto& a : agents_of(f))
    if (!m.agent_index(a)) throw SemanticError("undeclared agent '" + a + "'");
}

/// Evaluation session over one model. Subformula verdicts are memoized per
/// (surviving states, subformula, state); the session keeps every root
/// formula alive so node identities stay valid.
class Evaluator {
 public:
  explicit Evaluator(const EpistemicModel& m, CheckConfig cfg = {}) : m_(m), cfg_(cfg) {
    if (cfg_.state_cap == 0 || cfg_.nesting_cap == 0)
      throw PreconditionError("caps must be positive");
    if (cfg_.state_cap > 63) throw PreconditionError("state cap must be at most 63");
    if (m_.size() > 64) cfg_.memo_enabled = false;
  }

  const EpistemicModel& model() const { return m_; }
  const CheckConfig& config() const { return cfg_; }
  const CheckStats& stats() const { return stats_; }

  /// Validates `f` against the model and the configured caps; keeps it alive.
  void admit(const Formula& f) {
    check_symbols(m_, f);
    const std::size_t nest = quantifier_nesting(f);
    if (nest > cfg_.nesting_cap)
      throw ResourceError("quantifier nesting " + std::to_string(nest) + " exceeds the cap of " +
                          std::to_string(cfg_.nesting_cap));
    if (nest > 0 && m_.size() > cfg_.state_cap)
      throw ResourceError("model has " + std::to_string(m_.size()) +
                          " states, more than the state cap of " + std::to_string(cfg_.state_cap));
    if (!cfg_.apal_enabled) {
      auto walk = [&](auto&& self, const Formula& g) -> void {
        if (g.op() == Op::BoxApal || g.op() == Op::DiaApal)
          throw SemanticError("box/dia are disabled (apal_enabled is off)");
        for (std::size_t i = 0; i < g.arity(); ++i) self(self, i == 0 ? g.lhs() : g.rhs());
      };
      walk(walk, f);
    }
    roots_.push_back(f);
    root_ids_.insert(f.id());
  }

  /// Truth of `f` at `s` in the restriction of the model to `alive`.
  bool holds(const Formula& f, const StateSet& alive, std::size_t s) {
    if (root_ids_.count(f.id()) == 0) admit(f);
    return eval(f, alive, s);
  }

  StateSet extension(const Formula& f, const StateSet& alive) {
    if (root_ids_.count(f.id()) == 0) admit(f);
    return ext(f, alive);
  }

  /// Preorder whose closed sets are the quantifier range on `alive`: the
  /// maximal refinement for box+/dia+, maximal bisimulation for box/dia.
  /// Cached per restriction regardless of memo_enabled.
  const StatePairRelation& preorder(const StateSet& alive, bool positive) {
    auto& cache = positive ? refinement_cache_ : bisim_cache_;
    const std::uint64_t k = alive.mask();
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    StatePairRelation rel = positive ? max_refinement(m_, alive).relation : bisimulation_on(alive);
    return cache.emplace(k, std::move(rel)).first->second;
  }

  /// Visits, in ascending order, the restrictions a quantifier at `s` ranges
  /// over. Stops when `visit` returns false.
  void for_each_restriction(const StateSet& alive, std::size_t s, bool positive,
                            const std::function<bool(const StateSet&)>& visit) {
    const StatePairRelation& rel = preorder(alive, positive);
    enumerate_closed(rel, alive, s, [&](const StateSet& t) {
      ++stats_.restrictions_enumerated;
      return visit(t);
    }, cfg_.engine, cfg_.state_cap);
  }

 private:
  bool eval(const Formula& f, const StateSet& alive, std::size_t s) {
    ++stats_.nodes_visited;
    const bool memo = cfg_.memo_enabled && f.arity() > 0;
    Key key{};
    if (memo) {
      key = Key{alive.mask(), f.id(), s};
      if (auto it = memo_.find(key); it != memo_.end()) {
        ++stats_.cache_hits;
        return it->second;
      }
    }
    const bool r = compute(f, alive, s);
    if (memo) memo_.emplace(key, r);
    return r;
  }

  StateSet ext(const Formula& f, const StateSet& alive) {
    StateSet out(m_.size());
    alive.for_each([&](std::size_t s) {
      if (eval(f, alive, s)) out.insert(s);
    });
    return out;
  }

  struct Key {
    std::uint64_t alive;
    const void* node;
    std::size_t state;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = std::hash<std::uint64_t>{}(k.alive);
      h ^= std::hash<const void*>{}(k.node) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<std::size_t>{}(k.state) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

  StatePairRelation bisimulation_on(const StateSet& alive) {
    const EpistemicModel sub = restrict(m_, alive);
    const auto block = bisimulation_blocks(sub);
    const auto idx = alive.indices();
    StatePairRelation rel(m_.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (block[i] == block[j]) rel.insert(idx[i], idx[j]);
    return rel;
  }

  std::size_t agent(const Formula& f) const { return *m_.agent_index(f.name()); }

  bool quantify(const Formula& body, const StateSet& alive, std::size_t s, bool positive, bool universal) {
    bool result = universal;
    for_each_restriction(alive, s, positive, [&](const StateSet& t) {
      if (eval(body, t, s) != universal) {
        result = !universal;
        return false;
      }
      return true;
    });
    return result;
  }

  bool compute(const Formula& f, const StateSet& alive, std::size_t s) {
    switch (f.op()) {
      case Op::Top:
        return true;
      case Op::Bottom:
        return false;
      case Op::Atom:
        return m_.holds(s, f.name());
      case Op::Not:
        return !eval(f.lhs(), alive, s);
      case Op::And:
        return eval(f.lhs(), alive, s) && eval(f.rhs(), alive, s);
      case Op::Or:
        return eval(f.lhs(), alive, s) || eval(f.rhs(), alive, s);
      case Op::Implies:
        return !eval(f.lhs(), alive, s) || eval(f.rhs(), alive, s);
      case Op::Iff:
        return eval(f.lhs(), alive, s) == eval(f.rhs(), alive, s);
      case Op::Know:
      case Op::Poss: {
        const bool know = f.op() == Op::Know;
        const StateSet cell = m_.cell(agent(f), s) & alive;
        bool result = know;
        cell.for_each([&](std::size_t t) {
          if (result == know && eval(f.lhs(), alive, t) != know) result = !know;
        });
        return result;
      }
      case Op::Announce:
      case Op::AnnounceDual: {
        const bool box_form = f.op() == Op::Announce;
        if (!eval(f.lhs(), alive, s)) return box_form;
        const StateSet next = ext(f.lhs(), alive);
        return eval(f.rhs(), next, s);
      }
      case Op::BoxPos:
        return quantify(f.lhs(), alive, s, true, true);
      case Op::DiaPos:
        return quantify(f.lhs(), alive, s, true, false);
      case Op::BoxApal:
        return quantify(f.lhs(), alive, s, false, true);
      case Op::DiaApal:
        return quantify(f.lhs(), alive, s, false, false);
    }
    return false;
  }

  const EpistemicModel& m_;
  CheckConfig cfg_;
  CheckStats stats_;
  std::vector<Formula> roots_;
  std::unordered_set<const void*> root_ids_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::unordered_map<std::uint64_t, StatePairRelation> refinement_cache_;
  std::unordered_map<std::uint64_t, StatePairRelation> bisim_cache_;
};

/// States of `m` where `f` holds.
inline StateSet extension(const EpistemicModel& m, const Formula& f, const CheckConfig& cfg = {}) {
  Evaluator ev(m, cfg);
  ev.admit(f);
  return ev.extension(f, m.all());
}

inline bool holds(const PointedModel& pm, const Formula& f, const CheckConfig& cfg = {}) {
  Evaluator ev(pm.model, cfg);
  ev.admit(f);
  return ev.holds(f, pm.model.all(), pm.point);
}

}  // namespace papal
