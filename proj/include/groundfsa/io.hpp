#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "groundfsa/automata.hpp"
#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"
#include "groundfsa/product.hpp"
#include "json.hpp"

namespace groundfsa {

using Json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
}

/// Stable rendering: sorted keys, two-space indent, trailing newline.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline Json propositions_to_json(std::span<const Proposition> props) {
  Json arr = Json::array();
  for (const auto& p : props) arr.push_back({{"id", p.id}, {"display_text", p.display_text}});
  return arr;
}

inline std::vector<Proposition> propositions_from_json(const Json& j) {
  std::vector<Proposition> out;
  for (const auto& item : j) {
    if (item.is_string()) {
      out.push_back({item.get<std::string>(), item.get<std::string>()});
    } else {
      const auto id = item.at("id").get<std::string>();
      out.push_back({id, item.value("display_text", id)});
    }
  }
  return out;
}

inline std::size_t state_ref(const std::vector<std::string>& states, const std::string& name) {
  auto idx = find_index(states, name);
  if (!idx) throw InvalidDocument("unknown state '" + name + "'");
  return *idx;
}

template <typename Fn>
auto wrap_json_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw InvalidDocument(std::string("malformed document: ") + e.what());
  } catch (const SyntaxError& e) {
    throw InvalidDocument(std::string("bad guard: ") + e.what());
  }
}

}  // namespace detail

inline Json controller_to_json(const Controller& c) {
  Json j;
  j["propositions"] = detail::propositions_to_json(c.propositions());
  j["actions"] = std::vector<std::string>(c.actions().begin(), c.actions().end());
  j["states"] = std::vector<std::string>(c.states().begin(), c.states().end());
  j["init"] = c.state_name(c.init());
  Json ts = Json::array();
  for (const auto& t : c.transitions()) {
    ts.push_back({{"from", c.state_name(t.from)},
                  {"guard", to_string(t.guard)},
                  {"action", t.action},
                  {"to", c.state_name(t.to)}});
  }
  j["transitions"] = std::move(ts);
  return j;
}

inline Controller controller_from_json(const Json& j) {
  return detail::wrap_json_errors([&] {
    auto states = j.at("states").get<std::vector<std::string>>();
    const auto init = detail::state_ref(states, j.at("init").get<std::string>());
    std::vector<ControllerTransition> ts;
    for (const auto& t : j.at("transitions")) {
      ts.push_back(ControllerTransition{detail::state_ref(states, t.at("from").get<std::string>()),
                                        parse_formula(t.value("guard", std::string("true"))),
                                        t.value("action", std::string(kNoop)),
                                        detail::state_ref(states, t.at("to").get<std::string>())});
    }
    return Controller(detail::propositions_from_json(j.at("propositions")),
                      j.value("actions", std::vector<std::string>{}), std::move(states), init, std::move(ts));
  });
}

inline Json model_to_json(const EnvironmentModel& m) {
  Json j;
  j["propositions"] = detail::propositions_to_json(m.propositions());
  j["actions"] = std::vector<std::string>(m.actions().begin(), m.actions().end());
  j["states"] = std::vector<std::string>(m.states().begin(), m.states().end());
  Json labels = Json::object();
  for (std::size_t s = 0; s < m.states().size(); ++s) {
    labels[m.state_name(s)] = std::vector<std::string>(m.label(s).begin(), m.label(s).end());
  }
  j["labels"] = std::move(labels);
  Json ts = Json::array();
  for (const auto& t : m.transitions()) {
    ts.push_back({{"from", m.state_name(t.from)}, {"guard", to_string(t.guard)}, {"to", m.state_name(t.to)}});
  }
  j["transitions"] = std::move(ts);
  return j;
}

/// Reads a model document. A transition may give either a `guard` formula
/// over action atoms or a single `action` name.
inline EnvironmentModel model_from_json(const Json& j) {
  return detail::wrap_json_errors([&] {
    auto states = j.at("states").get<std::vector<std::string>>();
    std::vector<std::set<std::string>> labels(states.size());
    const auto& lj = j.at("labels");
    for (auto it = lj.begin(); it != lj.end(); ++it) {
      const auto s = detail::state_ref(states, it.key());
      for (const auto& p : it.value()) labels[s].insert(p.get<std::string>());
    }
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (!lj.contains(states[s])) throw InvalidDocument("state '" + states[s] + "' has no label entry");
    }
    std::vector<ModelTransition> ts;
    for (const auto& t : j.at("transitions")) {
      Formula guard = t.contains("action") ? Formula::atom(t.at("action").get<std::string>())
                                           : parse_formula(t.at("guard").get<std::string>());
      ts.push_back(ModelTransition{detail::state_ref(states, t.at("from").get<std::string>()), std::move(guard),
                                   detail::state_ref(states, t.at("to").get<std::string>())});
    }
    return EnvironmentModel(detail::propositions_from_json(j.at("propositions")),
                            j.value("actions", std::vector<std::string>{}), std::move(states), std::move(labels),
                            std::move(ts));
  });
}

inline Controller load_controller(const std::string& path) {
  return detail::wrap_json_errors([&] { return controller_from_json(Json::parse(read_file(path))); });
}

inline EnvironmentModel load_model(const std::string& path) {
  return detail::wrap_json_errors([&] { return model_from_json(Json::parse(read_file(path))); });
}

inline Json product_to_json(const ProductAutomaton& prod) {
  Json states = Json::array();
  for (std::size_t s = 0; s < prod.states().size(); ++s) {
    const auto& st = prod.states()[s];
    Json moves = Json::array();
    for (std::size_t m = 0; m < st.moves.size(); ++m) {
      const auto& mv = st.moves[m];
      std::vector<std::string> succ;
      for (std::size_t t : mv.successors) succ.push_back(prod.state_name(t));
      const auto label = prod.label(s, m);
      moves.push_back({{"transition", mv.controller_transition},
                       {"action", mv.action},
                       {"label", std::vector<std::string>(label.begin(), label.end())},
                       {"when_certain", mv.when_certain},
                       {"when_uncertain", mv.when_uncertain},
                       {"successors", succ}});
    }
    states.push_back({{"id", prod.state_name(s)},
                      {"model_state", prod.model().state_name(st.model_state)},
                      {"controller_state", prod.controller().state_name(st.controller_state)},
                      {"initial", st.initial},
                      {"moves", std::move(moves)}});
  }
  return Json{{"states", std::move(states)}};
}

// ---------------------------------------------------------------------------
// Graphviz

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline std::string controller_to_dot(const Controller& c) {
  std::ostringstream os;
  os << "digraph controller {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (const auto& s : c.states()) os << "  \"" << detail::dot_escape(s) << "\" [shape=circle];\n";
  os << "  __start -> \"" << detail::dot_escape(c.state_name(c.init())) << "\";\n";
  for (const auto& t : c.transitions()) {
    os << "  \"" << detail::dot_escape(c.state_name(t.from)) << "\" -> \"" << detail::dot_escape(c.state_name(t.to))
       << "\" [label=\"(" << detail::dot_escape(to_string(t.guard)) << ", " << detail::dot_escape(t.action)
       << ")\"];\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string model_to_dot(const EnvironmentModel& m) {
  std::ostringstream os;
  os << "digraph model {\n";
  for (std::size_t s = 0; s < m.states().size(); ++s) {
    std::string label;
    for (const auto& p : m.label(s)) label += (label.empty() ? "" : ", ") + p;
    os << "  \"" << detail::dot_escape(m.state_name(s)) << "\" [label=\"" << detail::dot_escape(m.state_name(s))
       << "\\n{" << detail::dot_escape(label) << "}\"];\n";
  }
  for (const auto& t : m.transitions()) {
    os << "  \"" << detail::dot_escape(m.state_name(t.from)) << "\" -> \"" << detail::dot_escape(m.state_name(t.to))
       << "\" [label=\"" << detail::dot_escape(to_string(t.guard)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string product_to_dot(const ProductAutomaton& prod) {
  std::ostringstream os;
  os << "digraph product {\n";
  for (std::size_t s = 0; s < prod.states().size(); ++s) {
    os << "  \"" << detail::dot_escape(prod.state_name(s)) << "\"";
    if (prod.states()[s].initial) os << " [peripheries=2]";
    os << ";\n";
  }
  for (const auto& t : prod.transitions()) {
    os << "  \"" << detail::dot_escape(prod.state_name(t.from)) << "\" -> \""
       << detail::dot_escape(prod.state_name(t.to)) << "\" [label=\"" << detail::dot_escape(t.action)
       << (t.when_certain ? "" : " [UNC]") << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace groundfsa
