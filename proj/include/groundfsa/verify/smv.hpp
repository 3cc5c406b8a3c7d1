#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "groundfsa/automata.hpp"
#include "groundfsa/formula.hpp"
#include "groundfsa/product.hpp"
#include "groundfsa/verify/checker.hpp"
#include "groundfsa/verify/spec.hpp"

namespace groundfsa {

namespace detail {

inline std::string smv_ident(std::string_view prefix, std::string_view name) {
  std::string out(prefix);
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

/// Unique SMV identifiers for a list of names.
inline std::vector<std::string> smv_names(std::string_view prefix, std::span<const std::string> names) {
  std::vector<std::string> out;
  std::set<std::string> used;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string id = smv_ident(prefix, names[i]);
    if (used.contains(id)) id += "_" + std::to_string(i);
    used.insert(id);
    out.push_back(std::move(id));
  }
  return out;
}

inline std::string smv_formula(const Formula& f, const std::function<std::string(const std::string&)>& atom) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return f.value() ? "TRUE" : "FALSE";
    case Formula::Kind::Unc:
      return "unc";
    case Formula::Kind::Atom:
      return atom(f.name());
    case Formula::Kind::Not:
      return "!(" + smv_formula(f.operands().front(), atom) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string out = "(";
      const char* op = f.kind() == Formula::Kind::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.operands().size(); ++i) {
        if (i) out += op;
        out += smv_formula(f.operands()[i], atom);
      }
      return out + ")";
    }
  }
  return "FALSE";
}

inline std::string smv_set(const std::vector<std::string>& items) {
  if (items.empty()) return "FALSE";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return "{" + out + "}";
}

inline std::string smv_disjunction(const std::vector<std::string>& items) {
  if (items.empty()) return "FALSE";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? " | " : "") + items[i];
  return out;
}

}  // namespace detail

/// Renders the composition of `m` and `c` with the invariant `spec` as one
/// SMV `MODULE main`.
///
/// State variables: model state `m`, controller state `c`, the chosen
/// controller transition `tr` (`t_none` when none is enabled), a free `unc`
/// input re-chosen every step, and `halted`, which latches once the emitted
/// action has no model successor so that finite product paths end in a
/// stuttering tail the invariant ignores. In exact mode `unc` is fixed false.
inline std::string export_smv(const EnvironmentModel& m, const Controller& c, const Spec& spec,
                              CheckMode mode = CheckMode::Assumption1) {
  check_product_alphabets(m, c);
  const auto ms = detail::smv_names("m_", m.states());
  const auto cs = detail::smv_names("c_", c.states());

  std::vector<std::string> actions(m.actions().begin(), m.actions().end());
  for (const auto& a : c.actions()) {
    if (std::find(actions.begin(), actions.end(), a) == actions.end()) actions.push_back(a);
  }
  auto action_var = [](const std::string& a) { return detail::smv_ident("a_", a); };
  auto prop_var = [](const std::string& p) { return detail::smv_ident("p_", p); };
  auto guard_atom = [&](const std::string& name) {
    if (name.starts_with(kActionPrefix)) {
      const auto a = name.substr(kActionPrefix.size());
      return std::find(actions.begin(), actions.end(), a) != actions.end() ? action_var(a) : std::string("FALSE");
    }
    return m.has_proposition(name) ? prop_var(name) : std::string("FALSE");
  };
  auto model_atom = [&](const std::string& a) { return action_var(a); };

  std::ostringstream os;
  os << "-- composition of environment model and controller, " << to_string(mode) << " semantics\n";
  os << "MODULE main\n";
  os << "VAR\n";
  os << "  m : " << detail::smv_set(ms) << ";\n";
  os << "  c : " << detail::smv_set(cs) << ";\n";
  std::vector<std::string> trs{"t_none"};
  for (std::size_t i = 0; i < c.transitions().size(); ++i) trs.push_back("t_" + std::to_string(i));
  os << "  tr : " << detail::smv_set(trs) << ";\n";
  os << "  unc : boolean;\n";
  os << "  halted : boolean;\n";

  os << "DEFINE\n";
  for (const auto& p : m.propositions()) {
    std::vector<std::string> in;
    for (std::size_t s = 0; s < m.states().size(); ++s) {
      if (m.label(s).contains(p.id)) in.push_back(ms[s]);
    }
    os << "  " << prop_var(p.id) << " := " << (in.empty() ? "FALSE" : "m in " + detail::smv_set(in)) << ";\n";
  }
  for (const auto& a : actions) {
    std::vector<std::string> in;
    for (std::size_t i = 0; i < c.transitions().size(); ++i) {
      if (c.transitions()[i].action == a) in.push_back("t_" + std::to_string(i));
    }
    os << "  " << action_var(a) << " := " << (in.empty() ? "FALSE" : "tr in " + detail::smv_set(in)) << ";\n";
  }
  std::vector<std::string> enabled;
  for (std::size_t i = 0; i < c.transitions().size(); ++i) {
    const auto& t = c.transitions()[i];
    os << "  en_" << i << " := c = " << cs[t.from] << " & " << detail::smv_formula(t.guard, guard_atom) << ";\n";
    enabled.push_back("en_" + std::to_string(i));
  }
  os << "  any_enabled := " << detail::smv_disjunction(enabled) << ";\n";

  // Model moves, without next(): which model transitions the current action fires.
  std::vector<std::string> fire;
  for (std::size_t k = 0; k < m.transitions().size(); ++k) {
    const auto& t = m.transitions()[k];
    os << "  fire_" << k << " := tr != t_none & m = " << ms[t.from] << " & "
       << detail::smv_formula(t.guard, model_atom) << ";\n";
    fire.push_back("fire_" + std::to_string(k));
  }
  std::vector<std::string> noop_stay;
  for (std::size_t s = 0; s < m.states().size(); ++s) {
    if (model_successors(m, s, kNoop).front().second == std::nullopt) noop_stay.push_back(ms[s]);
  }
  const std::string stay = noop_stay.empty() ? "FALSE" : "a_noop & m in " + detail::smv_set(noop_stay);
  os << "  noop_stay := " << stay << ";\n";
  fire.push_back("noop_stay");
  os << "  can_move := " << detail::smv_disjunction(fire) << ";\n";

  os << "INIT\n  c = " << cs[c.init()] << " & !halted\n";
  os << "INVAR\n  (tr = t_none -> !any_enabled)";
  for (std::size_t i = 0; i < c.transitions().size(); ++i) os << "\n  & (tr = t_" << i << " -> en_" << i << ")";
  os << "\n";
  if (mode == CheckMode::Exact) os << "INVAR\n  !unc\n";

  os << "TRANS\n  next(halted) = (halted | !can_move)\n";
  os << "TRANS\n  next(halted) -> (next(m) = m & next(c) = c)\n";
  os << "TRANS\n  !next(halted) -> (\n    case\n";
  for (std::size_t i = 0; i < c.transitions().size(); ++i) {
    os << "      tr = t_" << i << " : next(c) = " << cs[c.transitions()[i].to] << ";\n";
  }
  os << "      TRUE : next(c) = c;\n    esac\n";
  os << "    & (";
  std::vector<std::string> moves;
  for (std::size_t k = 0; k < m.transitions().size(); ++k) {
    moves.push_back("(fire_" + std::to_string(k) + " & next(m) = " + ms[m.transitions()[k].to] + ")");
  }
  moves.push_back("(noop_stay & next(m) = m)");
  for (std::size_t i = 0; i < moves.size(); ++i) os << (i ? "\n       | " : "") << moves[i];
  os << "))\n";

  os << "LTLSPEC\n  G (halted | " << detail::smv_formula(spec.body, guard_atom) << ")\n";
  return os.str();
}

}  // namespace groundfsa
