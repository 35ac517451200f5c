#pragma once

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "papal/formula.hpp"
#include "papal/model.hpp"

namespace papal {

using Rng = std::mt19937_64;

namespace detail {

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

}  // namespace detail

struct ModelSpec {
  std::size_t min_states = 1;
  std::size_t max_states = 5;
  std::vector<std::string> agents{"a", "b"};
  std::vector<std::string> atoms{"p", "q"};
};

/// Random S5 model; each agent's partition comes from random class labels.
inline EpistemicModel random_model(Rng& rng, const ModelSpec& spec = {}) {
  const std::size_t n = spec.min_states + detail::pick(rng, spec.max_states - spec.min_states + 1);
  std::vector<std::string> states;
  std::vector<std::set<std::string>> val(n);
  for (std::size_t s = 0; s < n; ++s) {
    states.push_back("s" + std::to_string(s));
    for (const auto& p : spec.atoms)
      if (detail::coin(rng)) val[s].insert(p);
  }
  std::vector<EpistemicModel::Partition> parts(spec.agents.size());
  for (auto& part : parts) {
    // Fewer labels than states makes nontrivial classes likely.
    const std::size_t labels = 1 + detail::pick(rng, n);
    std::vector<std::vector<std::size_t>> by_label(labels);
    for (std::size_t s = 0; s < n; ++s) by_label[detail::pick(rng, labels)].push_back(s);
    for (auto& c : by_label)
      if (!c.empty()) part.push_back(std::move(c));
  }
  return EpistemicModel(spec.agents, spec.atoms, std::move(states), std::move(parts), std::move(val));
}

enum class Fragment {
  Positive,   // p | ~p | & | | | K
  Epistemic,  // booleans, K, L
  Pal,        // plus announcements
  Full,       // plus box+/dia+/box/dia
};

struct FormulaSpec {
  Fragment fragment = Fragment::Full;
  /// Bound on epistemic depth.
  std::size_t depth = 2;
  /// Bound on syntax-tree height.
  std::size_t height = 4;
  /// Bound on quantifier nesting.
  std::size_t quantifiers = 1;
  bool apal = true;
  std::vector<std::string> agents{"a", "b"};
  std::vector<std::string> atoms{"p", "q"};
};

namespace detail {

inline Formula literal(Rng& rng, const FormulaSpec& spec, bool allow_neg) {
  Formula p = atom(spec.atoms[pick(rng, spec.atoms.size())]);
  return allow_neg && coin(rng) ? neg(p) : p;
}

inline Formula gen(Rng& rng, const FormulaSpec& spec, std::size_t depth, std::size_t height,
                   std::size_t quants) {
  const bool positive = spec.fragment == Fragment::Positive;
  if (height == 0 || coin(rng, 0.2)) return literal(rng, spec, true);
  const std::string agent = spec.agents[pick(rng, spec.agents.size())];
  enum Choice { Lit, Not, And, Or, Imp, Iff, K, L, Ann, AnnDual, BoxPos, DiaPos, Box, Dia };
  std::vector<Choice> options{Lit, And, Or};
  if (depth > 0) options.push_back(K);
  if (!positive) {
    options.insert(options.end(), {Not, Imp, Iff});
    if (depth > 0) options.push_back(L);
  }
  if (spec.fragment == Fragment::Pal || spec.fragment == Fragment::Full)
    options.insert(options.end(), {Ann, AnnDual});
  if (spec.fragment == Fragment::Full && quants > 0) {
    options.insert(options.end(), {BoxPos, DiaPos});
    if (spec.apal) options.insert(options.end(), {Box, Dia});
  }
  const std::size_t h = height - 1;
  switch (options[pick(rng, options.size())]) {
    case Lit:
      return literal(rng, spec, true);
    case Not:
      return neg(gen(rng, spec, depth, h, quants));
    case And:
      return conj(gen(rng, spec, depth, h, quants), gen(rng, spec, depth, h, quants));
    case Or:
      return disj(gen(rng, spec, depth, h, quants), gen(rng, spec, depth, h, quants));
    case Imp:
      return implies(gen(rng, spec, depth, h, quants), gen(rng, spec, depth, h, quants));
    case Iff:
      return iff(gen(rng, spec, depth, h, quants), gen(rng, spec, depth, h, quants));
    case K:
      return know(agent, gen(rng, spec, depth - 1, h, quants));
    case L:
      return poss(agent, gen(rng, spec, depth - 1, h, quants));
    case Ann:
    case AnnDual: {
      // Depths of announcement and body add up.
      const std::size_t d1 = pick(rng, depth + 1);
      Formula what = gen(rng, spec, d1, h, quants);
      Formula body = gen(rng, spec, depth - d1, h, quants);
      return coin(rng) ? announce(what, body) : announce_dual(what, body);
    }
    case BoxPos:
      return box_pos(gen(rng, spec, depth, h, quants - 1));
    case DiaPos:
      return dia_pos(gen(rng, spec, depth, h, quants - 1));
    case Box:
      return box(gen(rng, spec, depth, h, quants - 1));
    case Dia:
      return dia(gen(rng, spec, depth, h, quants - 1));
  }
  return top();
}

}  // namespace detail

inline Formula random_formula(Rng& rng, const FormulaSpec& spec = {}) {
  return detail::gen(rng, spec, spec.depth, spec.height, spec.quantifiers);
}

}  // namespace papal
