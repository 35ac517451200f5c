#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "papal/evaluator.hpp"
#include "papal/formula.hpp"
#include "papal/generators.hpp"
#include "papal/model.hpp"
#include "papal/model_io.hpp"
#include "papal/parser.hpp"
#include "papal/relations.hpp"

namespace papal {

/// What a schema metavariable may be instantiated with.
enum class Sort { Any, Epistemic, Positive };

/// A formula schema. Its metavariables are atoms named phi, psi or chi; any
/// other atom (p, q) stands for itself.
struct Schema {
  std::string name;
  Formula formula;
  std::map<std::string, Sort> metavars;
  /// Metavariable re-instantiated `resamples` times per instance (the others
  /// stay fixed), e.g. several positive announcements per instance.
  std::optional<std::string> resampled;
  std::size_t resamples = 1;
};

inline Schema make_schema(std::string name, const std::string& text, std::map<std::string, Sort> sorts,
                          std::optional<std::string> resampled = {}, std::size_t resamples = 1) {
  return {std::move(name), parse(text), std::move(sorts), std::move(resampled), resamples};
}

/// Random models and instantiations.
struct Sampler {
  Rng rng;
  ModelSpec model_spec;
  FormulaSpec any;
  FormulaSpec epistemic;
  FormulaSpec positive;

  explicit Sampler(std::uint64_t seed) : rng(seed) {
    any.fragment = Fragment::Full;
    epistemic.fragment = Fragment::Epistemic;
    positive.fragment = Fragment::Positive;
  }

  EpistemicModel model() { return random_model(rng, model_spec); }
  Formula formula(Sort s) {
    switch (s) {
      case Sort::Positive:
        return random_formula(rng, positive);
      case Sort::Epistemic:
        return random_formula(rng, epistemic);
      case Sort::Any:
        break;
    }
    return random_formula(rng, any);
  }
};

struct Violation {
  std::string model;  // text model format
  std::string state;
  std::string instance;
};

struct ValidityReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t evaluations = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

// Evaluates `f` at every state; records failing states.
inline void check_everywhere(const EpistemicModel& m, const Formula& f, const CheckConfig& cfg,
                             ValidityReport& rep) {
  ++rep.instances;
  Evaluator ev(m, cfg);
  const StateSet ext = ev.extension(f, m.all());
  rep.evaluations += m.size();
  const StateSet bad = m.all() - ext;
  bad.for_each([&](std::size_t s) { rep.violations.push_back({format_model(m), m.state_name(s), to_string(f)}); });
}

}  // namespace detail

/// Evaluates `trials` random instances of the schema at every state of a
/// fresh random model each; every failing (model, state, instance) is kept.
inline ValidityReport check_validity(const Schema& schema, Sampler& sampler, std::size_t trials,
                                     const CheckConfig& cfg = {}) {
  ValidityReport rep{schema.name, 0, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    const EpistemicModel m = sampler.model();
    std::map<std::string, Formula> subst;
    for (const auto& [v, sort] : schema.metavars) subst[v] = sampler.formula(sort);
    for (std::size_t r = 0; r < schema.resamples; ++r) {
      if (schema.resampled && r > 0) subst[*schema.resampled] = sampler.formula(schema.metavars.at(*schema.resampled));
      detail::check_everywhere(m, substitute(schema.formula, subst), cfg, rep);
    }
  }
  return rep;
}

/// Validities of the positive quantifier, the reduction axioms for
/// announcements and the S5 axioms.
inline std::vector<Schema> standard_schemas() {
  const auto A = Sort::Any;
  const auto E = Sort::Epistemic;
  const auto P = Sort::Positive;
  return {
      make_schema("box+ distributes over &", "box+ (phi & psi) <-> (box+ phi & box+ psi)", {{"phi", A}, {"psi", A}}),
      make_schema("box+ T", "box+ phi -> phi", {{"phi", A}}),
      make_schema("K a box+ to box+ K a", "K a box+ phi -> box+ K a phi", {{"phi", A}}),
      make_schema("Church-Rosser", "dia+ box+ phi -> box+ dia+ phi", {{"phi", A}}),
      make_schema("McKinsey", "box+ dia+ phi -> dia+ box+ phi", {{"phi", A}}),
      make_schema("AP", "[phi]p <-> (phi -> p)", {{"phi", A}}),
      make_schema("AN", "[phi]~psi <-> (phi -> ~[phi]psi)", {{"phi", A}, {"psi", A}}),
      make_schema("AC", "[phi](psi & chi) <-> ([phi]psi & [phi]chi)", {{"phi", A}, {"psi", A}, {"chi", A}}),
      make_schema("AK", "[phi]K a psi <-> (phi -> K a [phi]psi)", {{"phi", A}, {"psi", A}}),
      make_schema("AA", "[phi][psi]chi <-> [phi & [phi]psi]chi", {{"phi", A}, {"psi", A}, {"chi", A}}),
      make_schema("A+", "box+ phi -> [psi]phi", {{"phi", A}, {"psi", P}}, "psi", 5),
      make_schema("K", "K a (phi -> psi) -> (K a phi -> K a psi)", {{"phi", E}, {"psi", E}}),
      make_schema("T", "K a phi -> phi", {{"phi", E}}),
      make_schema("4", "K a phi -> K a K a phi", {{"phi", E}}),
      make_schema("5", "~K a phi -> K a ~K a phi", {{"phi", E}}),
  };
}

/// Properties of positive formulas as announcements.
inline std::vector<Schema> positive_schemas() {
  const auto A = Sort::Any;
  const auto P = Sort::Positive;
  return {
      make_schema("preservation", "phi -> [psi]phi", {{"phi", P}, {"psi", A}}),
      make_schema("success", "phi -> [phi]phi", {{"phi", P}}),
      make_schema("idempotence", "[phi]psi -> [phi][phi]psi", {{"phi", P}, {"psi", A}}),
  };
}

/// Extensions of random positive formulas are closed under refinements.
inline ValidityReport check_positive_closure(Sampler& sampler, std::size_t trials) {
  ValidityReport rep{"refinement closure of positive extensions", 0, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    const EpistemicModel m = sampler.model();
    const Formula f = sampler.formula(Sort::Positive);
    const StateSet ext = extension(m, f);
    ++rep.instances;
    ++rep.evaluations;
    const auto rel = max_refinement(m).relation;
    if (auto bad = closure_violation(rel, ext))
      rep.violations.push_back({format_model(m), m.state_name(bad->first), to_string(f)});
  }
  return rep;
}

/// f and nnf(f) have the same extension.
inline ValidityReport check_nnf_equivalence(Sampler& sampler, std::size_t trials) {
  ValidityReport rep{"nnf equivalence", 0, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    const EpistemicModel m = sampler.model();
    const Formula f = sampler.formula(Sort::Any);
    Evaluator ev(m);
    const StateSet a = ev.extension(f, m.all());
    const StateSet b = ev.extension(nnf(f), m.all());
    ++rep.instances;
    rep.evaluations += m.size();
    ((a - b) | (b - a)).for_each([&](std::size_t s) { rep.violations.push_back({format_model(m), m.state_name(s), to_string(f)}); });
  }
  return rep;
}

/// A point and its copy in the disjoint union of a model with itself agree
/// on random formulas.
inline ValidityReport check_bisimulation_invariance(Sampler& sampler, std::size_t trials) {
  ValidityReport rep{"bisimulation invariance", 0, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    const EpistemicModel base = sampler.model();
    if (2 * base.size() > kDefaultStateCap) continue;
    const EpistemicModel u = disjoint_union(base, base);
    const Formula f = sampler.formula(Sort::Any);
    Evaluator ev(u);
    const StateSet ext = ev.extension(f, u.all());
    ++rep.instances;
    rep.evaluations += u.size();
    for (std::size_t s = 0; s < base.size(); ++s)
      if (ext.contains(s) != ext.contains(s + base.size()))
        rep.violations.push_back({format_model(u), base.state_name(s), to_string(f)});
  }
  return rep;
}

/// The closed-set walk and the all-subsets filter give the same verdicts.
inline ValidityReport check_engine_agreement(Sampler& sampler, std::size_t trials) {
  ValidityReport rep{"enumeration engines agree", 0, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    const EpistemicModel m = sampler.model();
    const Formula f = sampler.formula(Sort::Any);
    CheckConfig fast;
    CheckConfig naive;
    naive.engine = EnumEngine::Naive;
    naive.memo_enabled = false;
    const StateSet a = extension(m, f, fast);
    const StateSet b = extension(m, f, naive);
    ++rep.instances;
    rep.evaluations += m.size();
    ((a - b) | (b - a)).for_each([&](std::size_t s) { rep.violations.push_back({format_model(m), m.state_name(s), to_string(f)}); });
  }
  return rep;
}

/// Every schema and invariant check, deterministic in `seed`.
inline std::vector<ValidityReport> run_props(std::size_t trials, std::uint64_t seed) {
  std::vector<ValidityReport> out;
  std::uint64_t k = 0;
  for (const auto& s : standard_schemas()) {
    Sampler sm(seed + k++);
    out.push_back(check_validity(s, sm, trials));
  }
  for (const auto& s : positive_schemas()) {
    Sampler sm(seed + k++);
    out.push_back(check_validity(s, sm, trials));
  }
  {
    Sampler sm(seed + k++);
    out.push_back(check_positive_closure(sm, trials));
  }
  {
    Sampler sm(seed + k++);
    out.push_back(check_nnf_equivalence(sm, trials));
  }
  {
    Sampler sm(seed + k++);
    out.push_back(check_bisimulation_invariance(sm, trials));
  }
  {
    Sampler sm(seed + k++);
    out.push_back(check_engine_agreement(sm, trials));
  }
  return out;
}

inline nlohmann::json report_to_json(const ValidityReport& r) {
  nlohmann::json j{{"name", r.name}, {"instances", r.instances}, {"evaluations", r.evaluations},
                   {"violations", nlohmann::json::array()}};
  for (const auto& v : r.violations)
    j["violations"].push_back({{"model", v.model}, {"state", v.state}, {"instance", v.instance}});
  return j;
}

}  // namespace papal
