// papal: command-line front end.
//
// Exit codes: 0 ran, 1 usage or parse error, 2 semantic error (invalid
// model, undeclared symbol, cap exceeded, failed precondition). `qbf` exits
// 10 for SAT and 20 for UNSAT.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "papal/papal.hpp"

namespace {

using nlohmann::json;
using namespace papal;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SemanticError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A model argument is a file path or `fixture:<name>`.
ModelFile load(const std::string& arg) {
  if (arg.rfind("fixture:", 0) == 0) {
    PointedModel pm = fixture(arg.substr(8));
    return {pm.model, pm.point_name()};
  }
  return load_model(arg);
}

Formula formula_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return parse(read_file(arg.substr(1)));
  return parse(arg);
}

void print_names(std::ostream& os, const std::vector<std::string>& names) {
  os << '{';
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? " " : "") << names[i];
  os << '}';
}

json pairs_json(const EpistemicModel& m, const StatePairRelation& r) {
  json out = json::array();
  for (auto [x, y] : r.pairs()) out.push_back({m.state_name(x), m.state_name(y)});
  return out;
}

struct Caps {
  std::size_t state_cap = kDefaultStateCap;
  std::size_t nesting_cap = 8;
  bool no_apal = false;
  bool no_memo = false;
  bool naive = false;

  void add(CLI::App* app) {
    app->add_option("--state-cap", state_cap, "largest model quantifiers may enumerate")->capture_default_str();
    app->add_option("--nesting-cap", nesting_cap, "deepest quantifier nesting")->capture_default_str();
    app->add_flag("--no-apal", no_apal, "reject box/dia");
    app->add_flag("--no-memo", no_memo, "disable verdict memoization");
    app->add_flag("--naive", naive, "enumerate restrictions by filtering all subsets");
  }
  CheckConfig config() const {
    CheckConfig c;
    c.state_cap = state_cap;
    c.nesting_cap = nesting_cap;
    c.apal_enabled = !no_apal;
    c.memo_enabled = !no_memo;
    c.engine = naive ? EnumEngine::Naive : EnumEngine::DagWalk;
    return c;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"papal: model checker for positive arbitrary public announcement logic"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  // check
  auto* check = app.add_subcommand("check", "evaluate a formula at a state");
  std::string model_arg, state_arg, formula_text;
  Caps caps;
  check->add_option("model", model_arg, "model file or fixture:<name>")->required();
  check->add_option("formula", formula_text, "formula, or @file")->required();
  check->add_option("-s,--state", state_arg, "evaluation state (default: the model's point)");
  check->add_flag("--json", as_json);
  caps.add(check);

  // minimize
  auto* minimize = app.add_subcommand("minimize", "bisimulation quotient");
  minimize->add_option("model", model_arg)->required();
  minimize->add_flag("--json", as_json);

  // refine
  auto* refine = app.add_subcommand("refine", "maximal refinement as `s -> t` pairs (t refines s)");
  refine->add_option("model", model_arg)->required();
  refine->add_flag("--json", as_json);

  // bisim
  auto* bisim = app.add_subcommand("bisim", "maximal bisimulation, or n-bisimilarity of two points");
  std::string other_arg, other_state;
  std::optional<std::size_t> depth;
  bisim->add_option("model", model_arg)->required();
  bisim->add_option("--other", other_arg, "second model for n-bisimilarity");
  bisim->add_option("-s,--state", state_arg, "point in the first model");
  bisim->add_option("-t,--other-state", other_state, "point in the second model");
  bisim->add_option("-n,--depth", depth, "graded bisimilarity depth");
  bisim->add_flag("--json", as_json);

  // distinguish / define-positive
  std::vector<std::string> target;
  auto* distinguish = app.add_subcommand("distinguish", "epistemic formula defining a set of states");
  distinguish->add_option("model", model_arg)->required();
  distinguish->add_option("states", target, "target states")->required();
  distinguish->add_flag("--json", as_json);
  auto* define_pos = app.add_subcommand("define-positive", "positive formula defining a refinement-closed set");
  define_pos->add_option("model", model_arg)->required();
  define_pos->add_option("states", target, "target states")->required();
  define_pos->add_flag("--json", as_json);

  // qbf
  auto* qbf = app.add_subcommand("qbf", "decide a QBF through the model-checking reduction");
  std::string qbf_path, dump_prefix;
  std::size_t qbf_cap = kDefaultQbfCap;
  qbf->add_option("file", qbf_path, "QBF in line format or QDIMACS")->required();
  qbf->add_option("--dump-encoding", dump_prefix, "write <prefix>.epml and <prefix>.formula");
  qbf->add_option("--cap", qbf_cap, "largest number of variables")->capture_default_str();
  qbf->add_flag("--json", as_json);

  // gen
  auto* gen = app.add_subcommand("gen", "print a fixture, chain or random model");
  std::string fixture_name, pattern, first_link = "a", out_path;
  std::optional<std::size_t> chain_len;
  bool random = false;
  std::uint64_t seed = 1;
  std::size_t max_states = 5;
  gen->add_option("fixture", fixture_name, "fixture name, e.g. compose9 or two_leg_chain(4,6)");
  gen->add_option("--chain", chain_len, "a-b-chain of this length");
  gen->add_option("--pattern", pattern, "p-valuation bits for --chain");
  gen->add_option("--first", first_link, "agent of the first chain link")->capture_default_str();
  gen->add_flag("--random", random, "random model");
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--max-states", max_states)->capture_default_str();
  gen->add_option("-o,--output", out_path, "write here instead of standard output");
  gen->add_flag("--json", as_json);

  // props
  auto* props = app.add_subcommand("props", "run the validity and invariant suite");
  std::size_t trials = 200;
  props->add_option("--trials", trials)->capture_default_str();
  props->add_option("--seed", seed)->capture_default_str();
  props->add_flag("--json", as_json);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "check model invariants");
  validate_cmd->add_option("model", model_arg)->required();
  validate_cmd->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::ostream& out = std::cout;

  if (*check) {
    const ModelFile mf = load(model_arg);
    require_valid(mf.model);
    const PointedModel pm = mf.at(state_arg);
    const CheckResult r = evaluate(pm, formula_arg(formula_text), caps.config());
    if (as_json) {
      out << result_to_json(pm.model, r).dump(2) << '\n';
    } else {
      out << (r.verdict ? "true" : "false") << '\n';
      if (r.witness) {
        out << "witness: ";
        print_names(out, state_names(pm.model, r.witness->states));
        out << "\nannouncement: " << r.witness->announcement << '\n';
      }
    }
    return 0;
  }

  if (*minimize) {
    const ModelFile mf = load(model_arg);
    require_valid(mf.model);
    const Quotient q = quotient(mf.model);
    std::optional<std::string> point;
    if (mf.point) point = q.model.state_name(q.state_map[mf.model.require_state(*mf.point)]);
    if (as_json) {
      json j{{"model", model_to_json(q.model, point)}, {"map", json::object()}};
      for (std::size_t s = 0; s < mf.model.size(); ++s)
        j["map"][mf.model.state_name(s)] = q.model.state_name(q.state_map[s]);
      out << j.dump(2) << '\n';
    } else {
      out << format_model(q.model, point);
    }
    return 0;
  }

  if (*refine) {
    const ModelFile mf = load(model_arg);
    require_valid(mf.model);
    const RefinementResult r = max_refinement(mf.model);
    if (as_json)
      out << json{{"pairs", pairs_json(mf.model, r.relation)}, {"iterations", r.iterations}}.dump(2) << '\n';
    else
      out << r.relation.dump(mf.model);
    return 0;
  }

  if (*bisim) {
    const ModelFile mf = load(model_arg);
    require_valid(mf.model);
    if (!other_arg.empty() || depth) {
      if (!depth) throw SemanticError("--depth is required for n-bisimilarity");
      const ModelFile other = other_arg.empty() ? mf : load(other_arg);
      require_valid(other.model);
      const bool r = n_bisimilar(mf.at(state_arg), other.at(other_state), *depth);
      if (as_json)
        out << json{{"bisimilar", r}, {"depth", *depth}}.dump(2) << '\n';
      else
        out << (r ? "true" : "false") << '\n';
      return 0;
    }
    const StatePairRelation r = max_bisimulation(mf.model);
    if (as_json)
      out << json{{"pairs", pairs_json(mf.model, r)}}.dump(2) << '\n';
    else
      out << r.dump(mf.model);
    return 0;
  }

  if (*distinguish || *define_pos) {
    const ModelFile mf = load(model_arg);
    require_valid(mf.model);
    const StateSet t = state_set(mf.model, target);
    const SynthesisResult r =
        *distinguish ? distinguishing_formula(mf.model, t) : positive_defining_formula(mf.model, t);
    const auto names = state_names(mf.model, extension(mf.model, r.formula));
    if (as_json) {
      out << json{{"formula", to_string(r.formula)}, {"extension", names}, {"verified", r.verified}}.dump(2)
          << '\n';
    } else {
      out << r.formula << '\n' << "extension: ";
      print_names(out, names);
      out << '\n';
    }
    return 0;
  }

  if (*qbf) {
    const Qbf q = parse_qbf(read_file(qbf_path));
    if (!dump_prefix.empty()) {
      auto [pm, f] = encode(q);
      std::ofstream(dump_prefix + ".epml") << format_model(pm.model, pm.point_name());
      std::ofstream(dump_prefix + ".formula") << to_string(f) << '\n';
    }
    const bool sat = solve(q, qbf_cap);
    if (as_json)
      out << json{{"sat", sat}}.dump(2) << '\n';
    else
      out << (sat ? "SAT" : "UNSAT") << '\n';
    return sat ? 10 : 20;
  }

  if (*gen) {
    EpistemicModel m;
    std::optional<std::string> point;
    if (random) {
      Rng rng(seed);
      ModelSpec spec;
      spec.max_states = max_states;
      m = random_model(rng, spec);
      point = m.state_name(0);
    } else if (chain_len) {
      m = gen_ab_chain(*chain_len, pattern.empty() ? std::string(*chain_len, '0') : pattern, first_link);
      point = m.state_name(0);
    } else if (!fixture_name.empty()) {
      PointedModel pm = fixture(fixture_name);
      m = pm.model;
      point = pm.point_name();
    } else {
      std::cerr << "gen: give a fixture name, --chain or --random\n";
      return 1;
    }
    const std::string text = as_json ? model_to_json(m, point).dump(2) + "\n" : format_model(m, point);
    if (out_path.empty())
      out << text;
    else
      std::ofstream(out_path) << text;
    return 0;
  }

  if (*props) {
    const auto reports = run_props(trials, seed);
    std::size_t total = 0;
    if (as_json) {
      json j = json::array();
      for (const auto& r : reports) j.push_back(report_to_json(r));
      out << j.dump(2) << '\n';
    } else {
      for (const auto& r : reports) {
        out << (r.ok() ? "ok   " : "FAIL ") << r.name << "  instances=" << r.instances
            << " violations=" << r.violations.size() << '\n';
        for (const auto& v : r.violations)
          out << "  at " << v.state << ": " << v.instance << "\n" << v.model;
      }
    }
    for (const auto& r : reports) total += r.violations.size();
    if (!as_json) out << "violations: " << total << '\n';
    return 0;
  }

  if (*validate_cmd) {
    const ModelFile mf = load(model_arg);
    auto diags = validate(mf.model);
    if (mf.point && !mf.model.state_index(*mf.point))
      diags.push_back({"unknown point", "point '" + *mf.point + "' is not a state", {*mf.point}});
    if (as_json) {
      json j{{"ok", diags.empty()}, {"diagnostics", json::array()}};
      for (const auto& d : diags) j["diagnostics"].push_back({{"kind", d.kind}, {"message", d.message}, {"states", d.states}});
      out << j.dump(2) << '\n';
    } else if (diags.empty()) {
      out << "ok\n";
    } else {
      for (const auto& d : diags) std::cerr << d.kind << ": " << d.message << '\n';
    }
    return diags.empty() ? 0 : 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const papal::ParseError& e) {
    std::cerr << "papal: " << e.what() << '\n';
    return 1;
  } catch (const papal::Error& e) {
    std::cerr << "papal: " << e.what() << '\n';
    return 2;
  }
}
