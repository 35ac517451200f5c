#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "papal/errors.hpp"
#include "papal/model.hpp"

namespace papal {

namespace detail {

// Builds a model from named states and named classes; unnamed states get
// singleton classes.
struct ModelBuilder {
  std::vector<std::string> agents;
  std::vector<std::string> atoms;
  std::vector<std::string> states;
  std::vector<std::set<std::string>> val;
  std::vector<std::vector<std::vector<std::string>>> classes;

  ModelBuilder(std::vector<std::string> ags, std::vector<std::string> ats)
      : agents(std::move(ags)), atoms(std::move(ats)), classes(agents.size()) {}

  void add(std::string name, std::set<std::string> v = {}) {
    states.push_back(std::move(name));
    val.push_back(std::move(v));
  }
  void link(std::size_t agent, std::vector<std::string> cls) { classes[agent].push_back(std::move(cls)); }

  PointedModel build(const std::string& point) const {
    std::vector<EpistemicModel::Partition> parts(agents.size());
    auto idx = [&](const std::string& n) {
      for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == n) return i;
      throw SemanticError("fixture refers to unknown state " + n);
    };
    for (std::size_t a = 0; a < agents.size(); ++a) {
      std::vector<bool> used(states.size(), false);
      for (const auto& c : classes[a]) {
        std::vector<std::size_t> cls;
        for (const auto& n : c) {
          cls.push_back(idx(n));
          used[cls.back()] = true;
        }
        parts[a].push_back(std::move(cls));
      }
      for (std::size_t s = 0; s < states.size(); ++s)
        if (!used[s]) parts[a].push_back({s});
    }
    EpistemicModel m(agents, atoms, states, std::move(parts), val);
    return {m, m.require_state(point)};
  }
};

// Integer-labelled a-b-chain on lo..hi: a-links (2i-1, 2i), b-links (2i, 2i+1),
// p at odd states.
inline PointedModel int_chain(long lo, long hi) {
  ModelBuilder b({"a", "b"}, {"p"});
  for (long i = lo; i <= hi; ++i) {
    if (i % 2 != 0)
      b.add(std::to_string(i), {"p"});
    else
      b.add(std::to_string(i));
  }
  for (long i = lo; i < hi; ++i) b.link(i % 2 != 0 ? 0 : 1, {std::to_string(i), std::to_string(i + 1)});
  return b.build("0");
}

}  // namespace detail

/// Two states s{p} and t{}, indistinguishable for a, distinguishable for b.
inline PointedModel fixture_expr_M() {
  detail::ModelBuilder b({"a", "b"}, {"p", "q"});
  b.add("s", {"p"});
  b.add("t");
  b.link(0, {"s", "t"});
  return b.build("s");
}

/// Four-state square where announcing q makes K a p true but not known by b.
inline PointedModel fixture_expr_Mprime() {
  detail::ModelBuilder b({"a", "b"}, {"p", "q"});
  b.add("s'", {"p", "q"});
  b.add("t'");
  b.add("u'", {"p", "q"});
  b.add("v'", {"q"});
  b.link(0, {"s'", "t'"});
  b.link(0, {"u'", "v'"});
  b.link(1, {"s'", "u'"});
  b.link(1, {"t'", "v'"});
  return b.build("s'");
}

/// Nine-state model on which two positive announcements achieve what no
/// single one does.
inline PointedModel fixture_compose9() {
  detail::ModelBuilder b({"a", "b"}, {"p", "q"});
  b.add("s", {"p"});
  b.add("t", {"p", "q"});
  b.add("u", {"p"});
  b.add("v", {"p", "q"});
  b.add("w");
  b.add("s'", {"p", "q"});
  b.add("t'", {"p", "q"});
  b.add("u'", {"p"});
  b.add("v'", {"p", "q"});
  b.link(0, {"s", "t", "s'", "t'"});
  b.link(0, {"u", "v", "w"});
  b.link(0, {"u'", "v'"});
  b.link(1, {"s", "s'"});
  b.link(1, {"t", "u"});
  b.link(1, {"t'", "u'"});
  return b.build("s");
}

/// Two a-b-chains 0..upper and 0'..lower joined by the b-link 0 - 0'.
/// Both start with an a-link at 0 (resp. 0'); p holds at 0 and 0' only.
inline PointedModel fixture_two_leg_chain(std::size_t lower, std::size_t upper) {
  detail::ModelBuilder b({"a", "b"}, {"p"});
  for (std::size_t i = 0; i <= upper; ++i)
    i == 0 ? b.add("0", {"p"}) : b.add(std::to_string(i));
  for (std::size_t i = 0; i <= lower; ++i)
    i == 0 ? b.add("0'", {"p"}) : b.add(std::to_string(i) + "'");
  auto legs = [&](std::size_t len, const std::string& suffix) {
    for (std::size_t i = 0; i < len; ++i)
      b.link(i % 2 == 0 ? 0 : 1, {std::to_string(i) + suffix, std::to_string(i + 1) + suffix});
  };
  legs(upper, "");
  legs(lower, "'");
  b.link(1, {"0", "0'"});
  return b.build("0");
}

/// Chain -edge..far with its edge on the a-link side of 0 (edge odd).
inline PointedModel fixture_left_edge_chain(std::size_t edge, std::optional<std::size_t> far = {}) {
  if (edge % 2 == 0) throw PreconditionError("left edge distance must be odd");
  return detail::int_chain(-static_cast<long>(edge), static_cast<long>(far.value_or(2 * edge + 3)));
}

/// Chain -far..edge with its edge on the b-link side of 0 (edge even, >= 2).
inline PointedModel fixture_right_edge_chain(std::size_t edge, std::optional<std::size_t> far = {}) {
  if (edge == 0 || edge % 2 != 0) throw PreconditionError("right edge distance must be even and positive");
  return detail::int_chain(-static_cast<long>(far.value_or(2 * edge + 3)), static_cast<long>(edge));
}

/// Looks a fixture up by name, e.g. "compose9" or "two_leg_chain(4,6)".
inline PointedModel fixture(const std::string& spec) {
  std::string name = spec;
  std::vector<std::size_t> args;
  if (auto open = spec.find('('); open != std::string::npos) {
    if (spec.back() != ')') throw SemanticError("malformed fixture name '" + spec + "'");
    name = spec.substr(0, open);
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      std::size_t comma = inner.find(',', pos);
      if (comma == std::string::npos) comma = inner.size();
      const std::string tok = inner.substr(pos, comma - pos);
      try {
        std::size_t used = 0;
        args.push_back(std::stoul(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw SemanticError("bad fixture argument '" + tok + "'");
      }
      pos = comma + 1;
    }
  }
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw SemanticError("wrong number of arguments for fixture '" + name + "'");
  };
  if (name == "expr_M") return want(0, 0), fixture_expr_M();
  if (name == "expr_Mprime") return want(0, 0), fixture_expr_Mprime();
  if (name == "compose9") return want(0, 0), fixture_compose9();
  if (name == "two_leg_chain") return want(2, 2), fixture_two_leg_chain(args[0], args[1]);
  if (name == "left_edge_chain") {
    want(1, 2);
    return fixture_left_edge_chain(args[0], args.size() > 1 ? std::optional(args[1]) : std::nullopt);
  }
  if (name == "right_edge_chain") {
    want(1, 2);
    return fixture_right_edge_chain(args[0], args.size() > 1 ? std::optional(args[1]) : std::nullopt);
  }
  throw SemanticError("unknown fixture '" + spec + "'");
}

}  // namespace papal
