#pragma once

// Brute-force reference implementations. They share only the model and
// formula types with the library and use none of its algorithms.

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "papal/formula.hpp"
#include "papal/model.hpp"

namespace oracle {

using papal::EpistemicModel;
using papal::Formula;
using papal::Op;
using Pairs = std::set<std::pair<std::size_t, std::size_t>>;

inline std::vector<std::size_t> cls(const EpistemicModel& m, std::size_t a, std::size_t s) {
  for (const auto& c : m.partition(a))
    for (auto x : c)
      if (x == s) return c;
  return {s};
}

inline bool same_val(const EpistemicModel& m, std::size_t x, std::size_t y) {
  for (const auto& p : m.atoms())
    if (m.holds(x, p) != m.holds(y, p)) return false;
  return true;
}

inline Pairs atom_pairs(const EpistemicModel& m) {
  Pairs r;
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y)
      if (same_val(m, x, y)) r.emplace(x, y);
  return r;
}

// back: every y' ~a y is matched by some x' ~a x.
inline bool back_ok(const EpistemicModel& m, const Pairs& r, std::size_t x, std::size_t y) {
  for (std::size_t a = 0; a < m.agents().size(); ++a)
    for (auto y2 : cls(m, a, y)) {
      bool hit = false;
      for (auto x2 : cls(m, a, x)) hit = hit || r.count({x2, y2}) != 0;
      if (!hit) return false;
    }
  return true;
}

inline bool forth_ok(const EpistemicModel& m, const Pairs& r, std::size_t x, std::size_t y) {
  for (std::size_t a = 0; a < m.agents().size(); ++a)
    for (auto x2 : cls(m, a, x)) {
      bool hit = false;
      for (auto y2 : cls(m, a, y)) hit = hit || r.count({x2, y2}) != 0;
      if (!hit) return false;
    }
  return true;
}

// Greatest fixed point by repeated deletion, one pair at a time.
inline Pairs gfp(const EpistemicModel& m, bool with_forth) {
  Pairs r = atom_pairs(m);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = r.begin(); it != r.end(); ++it) {
      if (!back_ok(m, r, it->first, it->second) || (with_forth && !forth_ok(m, r, it->first, it->second))) {
        r.erase(it);
        changed = true;
        break;
      }
    }
  }
  return r;
}

inline Pairs bisimulation(const EpistemicModel& m) { return gfp(m, true); }
inline Pairs refinement(const EpistemicModel& m) { return gfp(m, false); }

inline bool is_refinement(const EpistemicModel& m, const Pairs& r) {
  for (auto [x, y] : r)
    if (!same_val(m, x, y) || !back_ok(m, r, x, y)) return false;
  return true;
}

inline bool closed(const Pairs& r, std::uint64_t mask) {
  for (auto [x, y] : r)
    if (((mask >> x) & 1U) != 0 && ((mask >> y) & 1U) == 0) return false;
  return true;
}

inline std::uint64_t full_mask(std::size_t n) { return n == 64 ? ~0ULL : ((1ULL << n) - 1); }

inline papal::StateSet to_set(std::size_t n, std::uint64_t mask) { return papal::StateSet::from_mask(n, mask); }

/// Restriction by mask, via the public restriction operation only to build
/// the sub-model; indices in the result are positions in ascending order.
inline EpistemicModel sub(const EpistemicModel& m, std::uint64_t mask) {
  return papal::restrict(m, to_set(m.size(), mask));
}

inline std::size_t index_in(std::uint64_t mask, std::size_t s) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < s; ++i) k += (mask >> i) & 1U;
  return k;
}

/// Semantics from the definitions: announcements build the restricted model;
/// box+ ranges over every subset containing the point that is closed under
/// the naive refinement; box over unions of naive bisimulation classes.
inline bool holds(const EpistemicModel& m, const Formula& f, std::size_t s) {
  switch (f.op()) {
    case Op::Top:
      return true;
    case Op::Bottom:
      return false;
    case Op::Atom:
      return m.holds(s, f.name());
    case Op::Not:
      return !holds(m, f.lhs(), s);
    case Op::And:
      return holds(m, f.lhs(), s) && holds(m, f.rhs(), s);
    case Op::Or:
      return holds(m, f.lhs(), s) || holds(m, f.rhs(), s);
    case Op::Implies:
      return !holds(m, f.lhs(), s) || holds(m, f.rhs(), s);
    case Op::Iff:
      return holds(m, f.lhs(), s) == holds(m, f.rhs(), s);
    case Op::Know:
    case Op::Poss: {
      const std::size_t a = *m.agent_index(f.name());
      bool all = true, any = false;
      for (auto t : cls(m, a, s)) {
        const bool v = holds(m, f.lhs(), t);
        all = all && v;
        any = any || v;
      }
      return f.op() == Op::Know ? all : any;
    }
    case Op::Announce:
    case Op::AnnounceDual: {
      if (!holds(m, f.lhs(), s)) return f.op() == Op::Announce;
      std::uint64_t mask = 0;
      for (std::size_t t = 0; t < m.size(); ++t)
        if (holds(m, f.lhs(), t)) mask |= 1ULL << t;
      return holds(sub(m, mask), f.rhs(), index_in(mask, s));
    }
    case Op::BoxPos:
    case Op::DiaPos:
    case Op::BoxApal:
    case Op::DiaApal: {
      const bool positive = f.op() == Op::BoxPos || f.op() == Op::DiaPos;
      const bool universal = f.op() == Op::BoxPos || f.op() == Op::BoxApal;
      const Pairs rel = positive ? refinement(m) : bisimulation(m);
      for (std::uint64_t mask = 1; mask <= full_mask(m.size()); ++mask) {
        if (((mask >> s) & 1U) == 0 || !closed(rel, mask)) continue;
        const bool v = holds(sub(m, mask), f.lhs(), index_in(mask, s));
        if (v != universal) return !universal;
      }
      return universal;
    }
  }
  return false;
}

inline papal::StateSet extension(const EpistemicModel& m, const Formula& f) {
  papal::StateSet out(m.size());
  for (std::size_t s = 0; s < m.size(); ++s)
    if (holds(m, f, s)) out.insert(s);
  return out;
}

}  // namespace oracle
