#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "papal/errors.hpp"
#include "papal/model.hpp"
#include "papal/state_set.hpp"

namespace papal {

/// Ordered pairs over one model's states; row x holds every y with (x, y).
class StatePairRelation {
 public:
  StatePairRelation() = default;
  explicit StatePairRelation(std::size_t universe) : rows_(universe, StateSet(universe)) {}

  static StatePairRelation identity(const StateSet& alive) {
    StatePairRelation r(alive.universe());
    alive.for_each([&](std::size_t s) { r.insert(s, s); });
    return r;
  }

  std::size_t universe() const { return rows_.size(); }
  bool contains(std::size_t x, std::size_t y) const { return rows_[x].contains(y); }
  void insert(std::size_t x, std::size_t y) { rows_[x].insert(y); }
  void erase(std::size_t x, std::size_t y) { rows_[x].erase(y); }
  const StateSet& successors(std::size_t x) const { return rows_[x]; }
  StateSet& successors(std::size_t x) { return rows_[x]; }

  StateSet predecessors(std::size_t y) const {
    StateSet out(universe());
    for (std::size_t x = 0; x < universe(); ++x)
      if (rows_[x].contains(y)) out.insert(x);
    return out;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.count();
    return n;
  }

  /// Pairs in lexicographic state-index order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < universe(); ++x) rows_[x].for_each([&](std::size_t y) { out.emplace_back(x, y); });
    return out;
  }

  bool subset_of(const StatePairRelation& o) const {
    for (std::size_t x = 0; x < universe(); ++x)
      if (!rows_[x].is_subset_of(o.rows_[x])) return false;
    return true;
  }

  bool operator==(const StatePairRelation& o) const = default;

  /// One `s -> t` line per pair, by state index.
  std::string dump(const EpistemicModel& m) const {
    std::ostringstream os;
    for (auto [x, y] : pairs()) os << m.state_name(x) << " -> " << m.state_name(y) << '\n';
    return os.str();
  }

 private:
  std::vector<StateSet> rows_;
};

// ---------------------------------------------------------------------------
// Bisimulation

/// Block id per state of the coarsest stable partition (maximal bisimulation).
/// Block ids are numbered by first occurrence in state order.
inline std::vector<std::size_t> bisimulation_blocks(const EpistemicModel& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> block(n, 0);
  {
    std::map<std::set<std::string>, std::size_t> ids;
    for (std::size_t s = 0; s < n; ++s) {
      std::set<std::string> v;
      for (const auto& p : m.atoms())
        if (m.holds(s, p)) v.insert(p);
      block[s] = ids.emplace(v, ids.size()).first->second;
    }
  }
  std::size_t count = 0;
  for (;;) {
    // Signature: own block plus, per agent, the set of blocks in the class.
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> sig{block[s]};
      for (std::size_t a = 0; a < m.agents().size(); ++a) {
        std::set<std::size_t> seen;
        m.cell(a, s).for_each([&](std::size_t t) { seen.insert(block[t]); });
        sig.push_back(seen.size());
        sig.insert(sig.end(), seen.begin(), seen.end());
      }
      next[s] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    block = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  return block;
}

inline StatePairRelation max_bisimulation(const EpistemicModel& m) {
  const auto block = bisimulation_blocks(m);
  StatePairRelation r(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y)
      if (block[x] == block[y]) r.insert(x, y);
  return r;
}

inline bool is_bisimulation_minimal(const EpistemicModel& m) {
  const auto block = bisimulation_blocks(m);
  return std::set<std::size_t>(block.begin(), block.end()).size() == m.size();
}

struct Quotient {
  EpistemicModel model;
  /// Quotient state index for every original state.
  std::vector<std::size_t> state_map;
};

/// One state per bisimulation class, named after its first member.
inline Quotient quotient(const EpistemicModel& m) {
  const auto block = bisimulation_blocks(m);
  std::size_t k = 0;
  for (auto b : block) k = std::max(k, b + 1);
  std::vector<std::size_t> rep(k, m.size());
  for (std::size_t s = 0; s < m.size(); ++s)
    if (rep[block[s]] == m.size()) rep[block[s]] = s;
  std::vector<std::string> states;
  std::vector<std::set<std::string>> val;
  for (auto r : rep) {
    states.push_back(m.state_name(r));
    val.push_back(m.valuation(r));
  }
  std::vector<EpistemicModel::Partition> parts(m.agents().size());
  for (std::size_t a = 0; a < m.agents().size(); ++a) {
    std::set<std::vector<std::size_t>> classes;
    for (const auto& c : m.partition(a)) {
      std::set<std::size_t> bs;
      for (auto s : c) bs.insert(block[s]);
      classes.insert(std::vector<std::size_t>(bs.begin(), bs.end()));
    }
    parts[a].assign(classes.begin(), classes.end());
  }
  return {EpistemicModel(m.agents(), m.atoms(), std::move(states), std::move(parts), std::move(val)),
          block};
}

// ---------------------------------------------------------------------------
// Graded bisimulation

/// Family R^0 ⊇ R^1 ⊇ ... ⊇ R^n on one model.
struct GradedRelationFamily {
  std::vector<StatePairRelation> levels;
};

/// Disjoint union of two models; states of the second get a `#2` suffix.
/// Agents and atoms are merged; an agent missing from one side is the
/// identity there.
inline EpistemicModel disjoint_union(const EpistemicModel& m1, const EpistemicModel& m2) {
  std::vector<std::string> agents = m1.agents();
  for (const auto& a : m2.agents())
    if (!m1.agent_index(a)) agents.push_back(a);
  std::vector<std::string> atoms = m1.atoms();
  for (const auto& p : m2.atoms())
    if (!m1.has_atom(p)) atoms.push_back(p);
  std::vector<std::string> states = m1.states();
  for (const auto& s : m2.states()) states.push_back(s + "#2");
  std::vector<std::set<std::string>> val;
  for (std::size_t s = 0; s < m1.size(); ++s) val.push_back(m1.valuation(s));
  for (std::size_t s = 0; s < m2.size(); ++s) val.push_back(m2.valuation(s));
  std::vector<EpistemicModel::Partition> parts(agents.size());
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (auto i = m1.agent_index(agents[a]))
      parts[a] = m1.partition(*i);
    else
      for (std::size_t s = 0; s < m1.size(); ++s) parts[a].push_back({s});
    if (auto i = m2.agent_index(agents[a])) {
      for (auto c : m2.partition(*i)) {
        for (auto& s : c) s += m1.size();
        parts[a].push_back(std::move(c));
      }
    } else {
      for (std::size_t s = 0; s < m2.size(); ++s) parts[a].push_back({s + m1.size()});
    }
  }
  return EpistemicModel(std::move(agents), std::move(atoms), std::move(states), std::move(parts),
                        std::move(val));
}

/// R^0 relates states with equal valuations; R^{k+1} keeps the pairs of R^k
/// satisfying forth and back with respect to R^k.
inline GradedRelationFamily graded_bisimulation(const EpistemicModel& m, std::size_t n) {
  const std::size_t N = m.size();
  GradedRelationFamily fam;
  StatePairRelation r0(N);
  for (std::size_t x = 0; x < N; ++x)
    for (std::size_t y = 0; y < N; ++y)
      if (m.valuation(x) == m.valuation(y)) r0.insert(x, y);
  fam.levels.push_back(std::move(r0));
  for (std::size_t k = 0; k < n; ++k) {
    const StatePairRelation& prev = fam.levels.back();
    StatePairRelation next(N);
    for (std::size_t x = 0; x < N; ++x)
      prev.successors(x).for_each([&](std::size_t y) {
        bool ok = true;
        for (std::size_t a = 0; a < m.agents().size() && ok; ++a) {
          const StateSet& cx = m.cell(a, x);
          const StateSet& cy = m.cell(a, y);
          cx.for_each([&](std::size_t x2) {
            if (ok && !prev.successors(x2).intersects(cy)) ok = false;
          });
          cy.for_each([&](std::size_t y2) {
            if (!ok) return;
            bool hit = false;
            cx.for_each([&](std::size_t x2) { hit = hit || prev.contains(x2, y2); });
            if (!hit) ok = false;
          });
        }
        if (ok) next.insert(x, y);
      });
    const bool stable = next == prev;
    fam.levels.push_back(std::move(next));
    if (stable) {
      // Stable from here on; fill the remaining levels without recomputing.
      while (fam.levels.size() <= n) fam.levels.push_back(fam.levels.back());
      break;
    }
  }
  return fam;
}

inline bool n_bisimilar(const PointedModel& m1, const PointedModel& m2, std::size_t n) {
  const EpistemicModel u = disjoint_union(m1.model, m2.model);
  const auto fam = graded_bisimulation(u, n);
  return fam.levels[n].contains(m1.point, m1.model.size() + m2.point);
}

// ---------------------------------------------------------------------------
// Refinement

struct RefinementResult {
  StatePairRelation relation;
  /// Applications of the pruning step until it returned its input.
  std::size_t iterations = 0;
};

/// Largest refinement on `m` restricted to the states in `alive`.
/// (x, y) in the result means the model at y refines the model at x: atoms
/// agree and every a-successor of y is matched by an a-successor of x.
inline RefinementResult max_refinement(const EpistemicModel& m, const StateSet& alive) {
  const std::size_t N = m.size();
  const std::size_t A = m.agents().size();
  StatePairRelation r(N);
  alive.for_each([&](std::size_t x) {
    alive.for_each([&](std::size_t y) {
      if (m.valuation(x) == m.valuation(y)) r.insert(x, y);
    });
  });
  std::vector<std::vector<StateSet>> live_cell(A, std::vector<StateSet>(N, StateSet(N)));
  for (std::size_t a = 0; a < A; ++a)
    alive.for_each([&](std::size_t x) { live_cell[a][x] = m.cell(a, x) & alive; });

  std::size_t iterations = 0;
  for (;;) {
    ++iterations;
    // cover[a][x]: every y' matched from x's a-class under the current r.
    std::vector<std::vector<StateSet>> cover(A, std::vector<StateSet>(N, StateSet(N)));
    for (std::size_t a = 0; a < A; ++a)
      alive.for_each([&](std::size_t x) {
        StateSet u(N);
        live_cell[a][x].for_each([&](std::size_t x2) { u |= r.successors(x2); });
        cover[a][x] = std::move(u);
      });
    StatePairRelation next(N);
    alive.for_each([&](std::size_t x) {
      r.successors(x).for_each([&](std::size_t y) {
        for (std::size_t a = 0; a < A; ++a)
          if (!live_cell[a][y].is_subset_of(cover[a][x])) return;
        next.insert(x, y);
      });
    });
    if (next == r) break;
    r = std::move(next);
  }
  return {std::move(r), iterations};
}

inline RefinementResult max_refinement(const EpistemicModel& m) { return max_refinement(m, m.all()); }

/// Membership propagates along `rel`: x in t and (x, y) in rel imply y in t.
inline std::optional<std::pair<std::size_t, std::size_t>> closure_violation(const StatePairRelation& rel,
                                                                            const StateSet& t) {
  std::optional<std::pair<std::size_t, std::size_t>> bad;
  t.for_each([&](std::size_t x) {
    if (bad) return;
    const StateSet out = rel.successors(x) - t;
    if (!out.empty()) bad = std::make_pair(x, out.first());
  });
  return bad;
}

inline bool is_refinement_closed(const EpistemicModel& m, const StateSet& t) {
  return !closure_violation(max_refinement(m).relation, t);
}

// ---------------------------------------------------------------------------
// Enumerating closed subsets

enum class EnumEngine { Naive, DagWalk };

constexpr std::size_t kDefaultStateCap = 22;

/// Calls `visit(T)` for every T ⊆ alive with point ∈ T that is closed under
/// `rel` (x ∈ T, (x,y) ∈ rel ⇒ y ∈ T), in ascending bitmask order. `rel` must
/// be transitive on `alive`. Stops early when `visit` returns false.
/// Returns false iff stopped early.
template <typename Visit>
bool enumerate_closed(const StatePairRelation& rel, const StateSet& alive, std::size_t point,
                      Visit&& visit, EnumEngine engine = EnumEngine::DagWalk,
                      std::size_t cap = kDefaultStateCap) {
  const std::size_t N = alive.universe();
  if (alive.count() > cap)
    throw ResourceError("subset enumeration over " + std::to_string(alive.count()) +
                        " states exceeds the state cap of " + std::to_string(cap));
  if (!alive.contains(point)) return true;

  if (engine == EnumEngine::Naive) {
    if (N > 64) throw ResourceError("naive enumeration supports at most 64 states");
    const std::uint64_t full = alive.mask();
    std::uint64_t sub = 0;
    do {
      sub = (sub - full) & full;  // next submask in ascending order
      if (sub == 0) break;
      StateSet t = StateSet::from_mask(N, sub);
      if (t.contains(point) && !closure_violation(rel, t))
        if (!visit(static_cast<const StateSet&>(t))) return false;
    } while (sub != full);
    return true;
  }

  // Branch on states from the highest index down, excluding before including,
  // so leaves come out in ascending numeric order. Including x forces its
  // successors in; excluding x forces its predecessors out. With a transitive
  // relation every conflict-free partial choice extends to a closed set.
  const std::vector<std::size_t> order = [&] {
    auto v = alive.indices();
    std::reverse(v.begin(), v.end());
    return v;
  }();
  std::vector<StateSet> succ(N, StateSet(N)), pred(N, StateSet(N));
  for (auto x : order) {
    succ[x] = rel.successors(x) & alive;
    succ[x].insert(x);
  }
  for (auto x : order) succ[x].for_each([&](std::size_t y) { pred[y].insert(x); });

  StateSet in = succ[point];
  StateSet out(N);
  bool keep_going = true;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (!keep_going) return;
    if (depth == order.size()) {
      keep_going = visit(static_cast<const StateSet&>(in));
      return;
    }
    const std::size_t x = order[depth];
    const bool forced_in = in.contains(x);
    const bool forced_out = out.contains(x);
    if (!forced_in) {
      const StateSet saved = out;
      if (!pred[x].intersects(in)) {
        out |= pred[x];
        self(self, depth + 1);
      }
      out = saved;
      if (forced_out || !keep_going) return;
    }
    const StateSet saved = in;
    if (!succ[x].intersects(out)) {
      in |= succ[x];
      self(self, depth + 1);
    }
    in = saved;
  };
  rec(rec, 0);
  return keep_going;
}

/// All nonempty refinement-closed subsets of `m` containing `point`, ascending.
inline std::vector<StateSet> closed_subsets_containing(const EpistemicModel& m, std::size_t point,
                                                       EnumEngine engine = EnumEngine::DagWalk,
                                                       std::size_t cap = kDefaultStateCap) {
  const StateSet alive = m.all();
  if (alive.count() > cap)
    throw ResourceError("subset enumeration over " + std::to_string(alive.count()) +
                        " states exceeds the state cap of " + std::to_string(cap));
  const auto rel = max_refinement(m).relation;
  std::vector<StateSet> out;
  enumerate_closed(rel, alive, point, [&](const StateSet& t) {
    out.push_back(t);
    return true;
  }, engine, cap);
  return out;
}

}  // namespace papal
