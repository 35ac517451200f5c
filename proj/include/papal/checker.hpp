#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "papal/evaluator.hpp"
#include "papal/formula.hpp"
#include "papal/model.hpp"
#include "papal/state_set.hpp"
#include "papal/synthesis.hpp"

namespace papal {

/// A restriction certifying an existential quantifier, with an announcement
/// that produces it.
struct Witness {
  StateSet states;
  Formula announcement;
};

struct CheckResult {
  bool verdict = false;
  /// Present only for a true verdict of an outermost dia+ or dia.
  std::optional<Witness> witness;
  CheckStats stats;
};

/// Restrictions of `pm` reachable by one positive announcement that keep the
/// point and make `goal` true there, in ascending order.
inline std::vector<StateSet> positive_witnesses(const PointedModel& pm, const Formula& goal,
                                                const CheckConfig& cfg = {}) {
  Evaluator ev(pm.model, cfg);
  ev.admit(dia_pos(goal));
  std::vector<StateSet> out;
  ev.for_each_restriction(pm.model.all(), pm.point, true, [&](const StateSet& t) {
    if (ev.holds(goal, t, pm.point)) out.push_back(t);
    return true;
  });
  return out;
}

namespace detail {

inline std::optional<Witness> first_witness(Evaluator& ev, const PointedModel& pm, const Formula& goal,
                                            bool positive) {
  std::optional<StateSet> found;
  ev.for_each_restriction(pm.model.all(), pm.point, positive, [&](const StateSet& t) {
    if (!ev.holds(goal, t, pm.point)) return true;
    found = t;
    return false;
  });
  if (!found) return std::nullopt;
  Formula announcement = positive ? positive_defining_formula(pm.model, *found).formula
                                  : bisimulation_closed_formula(pm.model, *found).formula;
  return Witness{*found, announcement};
}

}  // namespace detail

/// First (ascending) refinement-closed restriction containing the point where
/// `goal` holds, with a positive formula whose announcement yields it.
inline std::optional<Witness> find_positive_witness(const PointedModel& pm, const Formula& goal,
                                                    const CheckConfig& cfg = {}) {
  Evaluator ev(pm.model, cfg);
  ev.admit(dia_pos(goal));
  return detail::first_witness(ev, pm, goal, true);
}

/// Truth of `f` at the point, with a witness for an outermost existential.
inline CheckResult evaluate(const PointedModel& pm, const Formula& f, const CheckConfig& cfg = {}) {
  Evaluator ev(pm.model, cfg);
  ev.admit(f);
  CheckResult r;
  r.verdict = ev.holds(f, pm.model.all(), pm.point);
  if (r.verdict && (f.op() == Op::DiaPos || f.op() == Op::DiaApal))
    r.witness = detail::first_witness(ev, pm, f.lhs(), f.op() == Op::DiaPos);
  r.stats = ev.stats();
  return r;
}

inline nlohmann::json result_to_json(const EpistemicModel& m, const CheckResult& r) {
  nlohmann::json j;
  j["verdict"] = r.verdict;
  if (r.witness) {
    j["witness_states"] = state_names(m, r.witness->states);
    j["witness_formula"] = to_string(r.witness->announcement);
  } else {
    j["witness_states"] = nullptr;
    j["witness_formula"] = nullptr;
  }
  j["stats"] = {{"nodes_visited", r.stats.nodes_visited},
                {"cache_hits", r.stats.cache_hits},
                {"restrictions_enumerated", r.stats.restrictions_enumerated}};
  return j;
}

}  // namespace papal
