#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "papal/errors.hpp"
#include "papal/model.hpp"

namespace papal {

/// A model as read from a file; the point is optional.
struct ModelFile {
  EpistemicModel model;
  std::optional<std::string> point;

  /// Pointed model at `state`, or at the file's point when `state` is empty.
  PointedModel at(const std::string& state = {}) const {
    const std::string name = !state.empty() ? state : point.value_or("");
    if (name.empty()) throw SemanticError("no state given and the model declares no point");
    return {model, model.require_state(name)};
  }
};

namespace detail {

inline bool state_char(char c) {
  return c != '{' && c != '}' && c != '(' && c != ')' && c != ',' && c != ':' && c != '#' &&
         std::isspace(static_cast<unsigned char>(c)) == 0;
}

class ModelLineReader {
 public:
  ModelLineReader(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])) != 0) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size() || s_[i_] == '#';
  }
  bool accept(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail({std::string("'") + c + "'"});
  }
  std::string name() {
    skip_ws();
    std::size_t j = i_;
    while (j < s_.size() && state_char(s_[j])) ++j;
    if (j == i_) fail({"name"});
    std::string out(s_.substr(i_, j - i_));
    i_ = j;
    return out;
  }
  std::vector<std::string> names() {
    std::vector<std::string> out;
    while (!at_end()) out.push_back(name());
    return out;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const std::string got = i_ < s_.size() ? "'" + std::string(1, s_[i_]) + "'" : "end of line";
    throw ParseError(line_, i_ + 1, std::move(expected), "unexpected " + got);
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct RawModel {
  std::vector<std::string> agents, atoms, states;
  std::map<std::string, std::vector<std::string>> val;
  std::map<std::string, std::vector<std::vector<std::string>>> rel;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> edges;
  std::optional<std::string> point;
};

inline ModelFile build_model(const RawModel& raw) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < raw.states.size(); ++i) idx.emplace(raw.states[i], i);
  auto state = [&](const std::string& n) {
    auto it = idx.find(n);
    if (it == idx.end()) throw SemanticError("unknown state '" + n + "'");
    return it->second;
  };
  auto check_agent = [&](const std::string& a) {
    if (std::find(raw.agents.begin(), raw.agents.end(), a) == raw.agents.end())
      throw SemanticError("unknown agent '" + a + "'");
  };
  std::vector<std::set<std::string>> val(raw.states.size());
  for (const auto& [s, ps] : raw.val) val[state(s)] = std::set<std::string>(ps.begin(), ps.end());

  std::vector<EpistemicModel::Partition> parts(raw.agents.size());
  for (const auto& [a, classes] : raw.rel) check_agent(a);
  for (const auto& [a, es] : raw.edges) {
    check_agent(a);
    if (raw.rel.count(a) != 0)
      throw SemanticError("agent '" + a + "' has both a partition and an edge list");
  }
  for (std::size_t ai = 0; ai < raw.agents.size(); ++ai) {
    const auto& a = raw.agents[ai];
    if (auto it = raw.rel.find(a); it != raw.rel.end()) {
      for (const auto& c : it->second) {
        std::vector<std::size_t> cls;
        for (const auto& n : c) cls.push_back(state(n));
        parts[ai].push_back(std::move(cls));
      }
    } else if (auto et = raw.edges.find(a); et != raw.edges.end()) {
      // Reflexive-symmetric-transitive closure of the listed edges.
      UnionFind uf(raw.states.size());
      for (const auto& [x, y] : et->second) uf.unite(state(x), state(y));
      std::map<std::size_t, std::vector<std::size_t>> groups;
      for (std::size_t s = 0; s < raw.states.size(); ++s) groups[uf.find(s)].push_back(s);
      for (auto& [root, members] : groups) parts[ai].push_back(std::move(members));
    }
  }
  ModelFile out{EpistemicModel(raw.agents, raw.atoms, raw.states, std::move(parts), std::move(val)),
                raw.point};
  if (raw.point) state(*raw.point);
  return out;
}

}  // namespace detail

/// Reads the text model format:
///
///     agents: a b
///     atoms: p q
///     states: s t u
///     val s: p q
///     rel a: {s t} {u}
///     edges b: (s,u)
///     point: s
///
/// `edges` lines give an agent's relation as pairs that are closed into a
/// partition. `#` starts a comment.
inline ModelFile parse_model(std::string_view text) {
  detail::RawModel raw;
  std::set<std::string> seen_headers;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    detail::ModelLineReader r(line, line_no);
    if (r.at_end()) continue;
    const std::string key = r.name();
    auto once = [&](const std::string& k) {
      if (!seen_headers.insert(k).second)
        throw ParseError(line_no, 1, {}, "duplicate '" + k + "' line");
    };
    if (key == "agents" || key == "atoms" || key == "states" || key == "point") {
      once(key);
      r.expect(':');
      auto ns = r.names();
      if (key == "agents") raw.agents = std::move(ns);
      else if (key == "atoms") raw.atoms = std::move(ns);
      else if (key == "states") raw.states = std::move(ns);
      else {
        if (ns.size() != 1) throw ParseError(line_no, 1, {"one state name"}, "bad point line");
        raw.point = ns.front();
      }
    } else if (key == "val") {
      const std::string s = r.name();
      once("val " + s);
      r.expect(':');
      raw.val[s] = r.names();
    } else if (key == "rel") {
      const std::string a = r.name();
      once("rel " + a);
      r.expect(':');
      auto& classes = raw.rel[a];
      while (!r.at_end()) {
        r.expect('{');
        std::vector<std::string> c;
        while (!r.accept('}')) {
          if (r.at_end()) r.fail({"'}'"});
          c.push_back(r.name());
        }
        classes.push_back(std::move(c));
      }
    } else if (key == "edges") {
      const std::string a = r.name();
      once("edges " + a);
      r.expect(':');
      auto& es = raw.edges[a];
      while (!r.at_end()) {
        r.expect('(');
        std::string x = r.name();
        r.expect(',');
        std::string y = r.name();
        r.expect(')');
        es.emplace_back(std::move(x), std::move(y));
      }
    } else {
      throw ParseError(line_no, 1, {"agents", "atoms", "states", "val", "rel", "edges", "point"},
                       "unknown line '" + key + "'");
    }
  }
  return detail::build_model(raw);
}

/// Canonical text form; parse_model(format_model(m)) == m.
inline std::string format_model(const EpistemicModel& m, const std::optional<std::string>& point = {}) {
  std::ostringstream os;
  auto list = [&](const char* key, const std::vector<std::string>& xs) {
    os << key << ':';
    for (const auto& x : xs) os << ' ' << x;
    os << '\n';
  };
  list("agents", m.agents());
  list("atoms", m.atoms());
  list("states", m.states());
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.valuation(s).empty()) continue;
    os << "val " << m.state_name(s) << ':';
    for (const auto& p : m.atoms())
      if (m.holds(s, p)) os << ' ' << p;
    os << '\n';
  }
  for (std::size_t a = 0; a < m.agents().size(); ++a) {
    os << "rel " << m.agents()[a] << ':';
    for (const auto& c : m.partition(a)) {
      os << " {";
      for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << m.state_name(c[i]);
      os << '}';
    }
    os << '\n';
  }
  if (point) os << "point: " << *point << '\n';
  return os.str();
}

inline nlohmann::json model_to_json(const EpistemicModel& m, const std::optional<std::string>& point = {}) {
  nlohmann::json j;
  j["agents"] = m.agents();
  j["atoms"] = m.atoms();
  j["states"] = m.states();
  j["val"] = nlohmann::json::object();
  for (std::size_t s = 0; s < m.size(); ++s) {
    std::vector<std::string> ps;
    for (const auto& p : m.atoms())
      if (m.holds(s, p)) ps.push_back(p);
    j["val"][m.state_name(s)] = ps;
  }
  j["rel"] = nlohmann::json::object();
  for (std::size_t a = 0; a < m.agents().size(); ++a) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : m.partition(a)) {
      std::vector<std::string> names;
      for (auto s : c) names.push_back(m.state_name(s));
      classes.push_back(names);
    }
    j["rel"][m.agents()[a]] = classes;
  }
  if (point) j["point"] = *point;
  return j;
}

inline ModelFile model_from_json(const nlohmann::json& j) {
  detail::RawModel raw;
  try {
    raw.agents = j.at("agents").get<std::vector<std::string>>();
    raw.atoms = j.value("atoms", std::vector<std::string>{});
    raw.states = j.at("states").get<std::vector<std::string>>();
    if (j.contains("val"))
      for (const auto& [s, ps] : j.at("val").items()) raw.val[s] = ps.get<std::vector<std::string>>();
    if (j.contains("rel"))
      for (const auto& [a, cs] : j.at("rel").items())
        raw.rel[a] = cs.get<std::vector<std::vector<std::string>>>();
    if (j.contains("point")) raw.point = j.at("point").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, 1, {}, std::string("malformed JSON model: ") + e.what());
  }
  return detail::build_model(raw);
}

/// Reads a model file; `.json` files use the JSON form, anything else text.
inline ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SemanticError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(1, e.byte, {}, "invalid JSON");
    }
    return model_from_json(j);
  }
  return parse_model(text);
}

}  // namespace papal
