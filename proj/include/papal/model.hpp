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
#include "papal/state_set.hpp"

namespace papal {

/// One violated model invariant, with the states that witness it.
struct Diagnostic {
  std::string kind;  // "empty domain", "overlapping classes", ...
  std::string message;
  std::vector<std::string> states;
};

/// Finite multi-agent S5 model. Relations are partitions of state indices.
///
/// Construction accepts inconsistent data so that `validate` can report it;
/// every other operation assumes a model that validates.
class EpistemicModel {
 public:
  using Partition = std::vector<std::vector<std::size_t>>;

  EpistemicModel() = default;
  EpistemicModel(std::vector<std::string> agents, std::vector<std::string> atoms,
                 std::vector<std::string> states, std::vector<Partition> partitions,
                 std::vector<std::set<std::string>> valuation)
      : agents_(std::move(agents)),
        atoms_(std::move(atoms)),
        states_(std::move(states)),
        partitions_(std::move(partitions)),
        valuation_(std::move(valuation)) {
    valuation_.resize(states_.size());
    partitions_.resize(agents_.size());
    index();
  }

  std::size_t size() const { return states_.size(); }
  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(std::size_t i) const { return states_[i]; }
  const Partition& partition(std::size_t agent) const { return partitions_[agent]; }
  const std::set<std::string>& valuation(std::size_t state) const { return valuation_[state]; }
  bool holds(std::size_t state, const std::string& atom) const {
    return valuation_[state].count(atom) != 0;
  }

  std::optional<std::size_t> agent_index(const std::string& name) const {
    auto it = std::find(agents_.begin(), agents_.end(), name);
    if (it == agents_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - agents_.begin());
  }
  bool has_atom(const std::string& name) const {
    return std::find(atoms_.begin(), atoms_.end(), name) != atoms_.end();
  }
  std::optional<std::size_t> state_index(const std::string& name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require_state(const std::string& name) const {
    auto i = state_index(name);
    if (!i) throw SemanticError("unknown state '" + name + "'");
    return *i;
  }

  /// The agent's equivalence class of `state`, as a set.
  const StateSet& cell(std::size_t agent, std::size_t state) const {
    return class_sets_[agent][class_of_[agent][state]];
  }
  std::size_t class_id(std::size_t agent, std::size_t state) const {
    return class_of_[agent][state];
  }

  /// States where `atom` holds.
  StateSet atom_extension(const std::string& atom) const {
    StateSet out(size());
    for (std::size_t s = 0; s < size(); ++s)
      if (holds(s, atom)) out.insert(s);
    return out;
  }

  StateSet all() const { return StateSet::full(size()); }

  bool operator==(const EpistemicModel& o) const {
    return agents_ == o.agents_ && atoms_ == o.atoms_ && states_ == o.states_ &&
           canonical_partitions() == o.canonical_partitions() && valuation_ == o.valuation_;
  }

  /// Partitions with classes and members sorted; comparison-friendly.
  std::vector<Partition> canonical_partitions() const {
    std::vector<Partition> out = partitions_;
    for (auto& p : out) {
      for (auto& c : p) std::sort(c.begin(), c.end());
      std::sort(p.begin(), p.end());
    }
    return out;
  }

  std::vector<Diagnostic> diagnostics() const {
    std::vector<Diagnostic> out;
    if (states_.empty()) out.push_back({"empty domain", "the model has no states", {}});
    {
      std::map<std::string, int> seen;
      for (const auto& s : states_)
        if (++seen[s] == 2)
          out.push_back({"duplicate state", "state name '" + s + "' is declared twice", {s}});
    }
    {
      std::set<std::string> seen;
      for (const auto& a : agents_)
        if (a.empty() || !seen.insert(a).second)
          out.push_back({"duplicate agent", "agent name '" + a + "' is empty or repeated", {}});
    }
    for (std::size_t s = 0; s < valuation_.size(); ++s)
      for (const auto& p : valuation_[s])
        if (!has_atom(p))
          out.push_back({"undeclared atom",
                         "atom '" + p + "' in the valuation of '" + states_[s] + "' is not declared",
                         {states_[s]}});
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      std::vector<int> hits(states_.size(), 0);
      for (const auto& c : partitions_[a]) {
        if (c.empty())
          out.push_back({"empty class", "agent '" + agents_[a] + "' has an empty class", {}});
        for (auto s : c) {
          if (s >= states_.size()) {
            out.push_back({"unknown state", "agent '" + agents_[a] + "' refers to an unknown state", {}});
            continue;
          }
          if (++hits[s] == 2)
            out.push_back({"overlapping classes",
                           "state '" + states_[s] + "' is in two classes of agent '" + agents_[a] + "'",
                           {states_[s]}});
        }
      }
      std::vector<std::string> missing;
      for (std::size_t s = 0; s < states_.size(); ++s)
        if (hits[s] == 0) missing.push_back(states_[s]);
      if (!missing.empty())
        out.push_back({"uncovered states",
                       "agent '" + agents_[a] + "' has no class for some states", missing});
    }
    return out;
  }

 private:
  void index() {
    name_index_.clear();
    for (std::size_t i = 0; i < states_.size(); ++i) name_index_.emplace(states_[i], i);
    class_of_.assign(agents_.size(), std::vector<std::size_t>(states_.size(), 0));
    class_sets_.assign(agents_.size(), {});
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      // Uncovered states get a singleton class so lookups stay total.
      std::vector<bool> covered(states_.size(), false);
      for (const auto& c : partitions_[a]) {
        StateSet set(states_.size());
        for (auto s : c)
          if (s < states_.size() && !covered[s]) {
            set.insert(s);
            covered[s] = true;
            class_of_[a][s] = class_sets_[a].size();
          }
        class_sets_[a].push_back(std::move(set));
      }
      for (std::size_t s = 0; s < states_.size(); ++s)
        if (!covered[s]) {
          class_of_[a][s] = class_sets_[a].size();
          class_sets_[a].push_back(StateSet(states_.size(), {s}));
        }
    }
  }

  std::vector<std::string> agents_;
  std::vector<std::string> atoms_;
  std::vector<std::string> states_;
  std::vector<Partition> partitions_;
  std::vector<std::set<std::string>> valuation_;

  std::map<std::string, std::size_t> name_index_;
  std::vector<std::vector<std::size_t>> class_of_;
  std::vector<std::vector<StateSet>> class_sets_;
};

struct PointedModel {
  EpistemicModel model;
  std::size_t point = 0;

  const std::string& point_name() const { return model.state_name(point); }
};

/// Empty when the model satisfies every invariant.
inline std::vector<Diagnostic> validate(const EpistemicModel& m) { return m.diagnostics(); }

inline void require_valid(const EpistemicModel& m) {
  auto d = validate(m);
  if (!d.empty()) throw SemanticError("invalid model: " + d.front().message);
}

/// Restriction to `t`, keeping state names and relative order.
inline EpistemicModel restrict(const EpistemicModel& m, const StateSet& t) {
  if (t.empty()) throw PreconditionError("restriction to the empty set");
  std::vector<std::size_t> remap(m.size(), m.size());
  std::vector<std::string> states;
  std::vector<std::set<std::string>> val;
  t.for_each([&](std::size_t s) {
    remap[s] = states.size();
    states.push_back(m.state_name(s));
    val.push_back(m.valuation(s));
  });
  std::vector<EpistemicModel::Partition> parts(m.agents().size());
  for (std::size_t a = 0; a < m.agents().size(); ++a)
    for (const auto& c : m.partition(a)) {
      std::vector<std::size_t> kept;
      for (auto s : c)
        if (s < m.size() && t.contains(s)) kept.push_back(remap[s]);
      if (!kept.empty()) parts[a].push_back(std::move(kept));
    }
  return EpistemicModel(m.agents(), m.atoms(), std::move(states), std::move(parts), std::move(val));
}

/// Maps a set over `sub`'s domain back onto the domain of `m` by state name.
inline StateSet lift(const EpistemicModel& sub, const StateSet& t, const EpistemicModel& m) {
  StateSet out(m.size());
  t.for_each([&](std::size_t s) { out.insert(m.require_state(sub.state_name(s))); });
  return out;
}

/// States named in `names`, as a set over `m`.
inline StateSet state_set(const EpistemicModel& m, const std::vector<std::string>& names) {
  StateSet out(m.size());
  for (const auto& n : names) out.insert(m.require_state(n));
  return out;
}

inline std::vector<std::string> state_names(const EpistemicModel& m, const StateSet& t) {
  std::vector<std::string> out;
  t.for_each([&](std::size_t s) { out.push_back(m.state_name(s)); });
  return out;
}

/// Line of states 0..length-1 over agents a and b. Links alternate starting
/// with `first_link` between states 0 and 1; pattern[i] == '1' puts p at i.
inline EpistemicModel gen_ab_chain(std::size_t length, const std::string& pattern,
                                   const std::string& first_link = "a") {
  if (length == 0) throw PreconditionError("chain length must be at least 1");
  if (pattern.size() != length)
    throw PreconditionError("pattern length " + std::to_string(pattern.size()) +
                            " does not match chain length " + std::to_string(length));
  if (first_link != "a" && first_link != "b")
    throw PreconditionError("first link must be 'a' or 'b'");
  std::vector<std::string> states;
  std::vector<std::set<std::string>> val;
  for (std::size_t i = 0; i < length; ++i) {
    states.push_back(std::to_string(i));
    if (pattern[i] == '1')
      val.push_back({"p"});
    else if (pattern[i] == '0')
      val.push_back({});
    else
      throw PreconditionError("pattern must consist of 0 and 1");
  }
  std::vector<EpistemicModel::Partition> parts(2);
  const std::size_t first = first_link == "a" ? 0 : 1;
  for (std::size_t ag = 0; ag < 2; ++ag) {
    std::vector<bool> used(length, false);
    for (std::size_t i = 0; i + 1 < length; ++i) {
      const std::size_t link_agent = (i % 2 == 0) ? first : 1 - first;
      if (link_agent == ag) {
        parts[ag].push_back({i, i + 1});
        used[i] = used[i + 1] = true;
      }
    }
    for (std::size_t i = 0; i < length; ++i)
      if (!used[i]) parts[ag].push_back({i});
    std::sort(parts[ag].begin(), parts[ag].end());
  }
  return EpistemicModel({"a", "b"}, {"p"}, std::move(states), std::move(parts), std::move(val));
}

}  // namespace papal
