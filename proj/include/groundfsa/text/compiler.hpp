#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "groundfsa/automata.hpp"
#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"
#include "groundfsa/text/canonical.hpp"
#include "groundfsa/text/chunker.hpp"
#include "groundfsa/text/pddl.hpp"
#include "groundfsa/text/transcript.hpp"

namespace groundfsa::text {

using SchemaMap = std::map<std::string, ActionSchema>;

struct CompileOptions {
  SynonymTable synonyms;
  /// Known condition propositions (for example the environment model's), used
  /// to resolve condition phrases in addition to the schema atoms.
  std::vector<Proposition> proposition_universe;
};

struct CompileResult {
  Controller controller;
  std::vector<std::string> warnings;
};

inline SchemaMap schemas_by_name(const std::vector<ActionSchema>& schemas) {
  SchemaMap out;
  for (const auto& s : schemas) out.insert_or_assign(s.name, s);
  return out;
}

namespace detail {

/// Maps verb phrases to actions and condition phrases to formulas.
class Resolver {
 public:
  Resolver(const SchemaMap& schemas, const CompileOptions& options, std::vector<std::string>& warnings)
      : schemas_(schemas), options_(options), warnings_(warnings) {
    for (const auto& p : options.proposition_universe) add_universe(p.id, p.display_text);
    for (const auto& [_, s] : schemas) {
      for (const auto& a : atoms_in_order_of(s.precondition)) add_universe(a, "");
      for (const auto& a : atoms_in_order_of(s.effect)) add_universe(a, "");
    }
  }

  struct Action {
    std::string id;
    Formula precondition;
  };

  Action action(const std::string& vp) {
    if (is_negated_action(vp)) return {std::string(kNoop), Formula::constant(true)};
    const std::string id = action_id(vp);
    if (id == kNoop) return {id, Formula::constant(true)};
    if (auto it = schemas_.find(id); it != schemas_.end()) return {id, it->second.precondition};
    warn("no action schema for '" + id + "'; using precondition true");
    return {id, Formula::constant(true)};
  }

  /// Condition of a wait/after clause: the effect of the awaited event when it
  /// names a known action, otherwise the condition it describes.
  Formula event(const Phrase& p) {
    return build(p, [&](const std::string& text) {
      if (auto s = schema_for(text)) return s->effect;
      return condition_atom(text);
    });
  }

  /// Condition of an if/until clause.
  Formula condition(const Phrase& p) {
    return build(p, [&](const std::string& text) { return condition_atom(text); });
  }

  const std::map<std::string, std::string>& display_texts() const noexcept { return display_; }

 private:
  static std::vector<std::string> atoms_in_order_of(const Formula& f) {
    std::vector<std::string> out;
    atoms_in_order(f, out);
    return out;
  }

  void add_universe(const std::string& id, const std::string& display) {
    if (std::find(universe_.begin(), universe_.end(), id) == universe_.end()) universe_.push_back(id);
    if (!display.empty() && !display_.contains(id)) display_[id] = display;
  }

  void warn(std::string msg) { warnings_.push_back(std::move(msg)); }

  template <typename AtomFn>
  Formula build(const Phrase& p, AtomFn&& atom_fn) {
    switch (p.op) {
      case Phrase::Op::Atom:
        return atom_fn(p.text);
      case Phrase::Op::Not:
        return negate(build(p.operands.front(), atom_fn));
      case Phrase::Op::And:
      case Phrase::Op::Or: {
        std::vector<Formula> parts;
        for (const auto& o : p.operands) parts.push_back(build(o, atom_fn));
        return p.op == Phrase::Op::And ? make_and(std::move(parts)) : make_or(std::move(parts));
      }
    }
    return Formula::constant(true);
  }

  /// Schema whose name words all occur in the phrase (longest name wins), or
  /// the schema a synonym points at.
  const ActionSchema* schema_for(const std::string& phrase) const {
    if (auto id = options_.synonyms.find_exact(phrase)) {
      if (auto it = schemas_.find(*id); it != schemas_.end()) return &it->second;
    }
    if (auto id = options_.synonyms.find_contained(phrase)) {
      if (auto it = schemas_.find(*id); it != schemas_.end()) return &it->second;
    }
    const auto ws = words(phrase);
    const ActionSchema* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& [name, s] : schemas_) {
      auto name_words = words(name);
      if (name_words.size() > best_len && covers(ws, name_words)) {
        best = &s;
        best_len = name_words.size();
      }
      auto display_words = content_words(s.display_text);
      if (display_words.size() > best_len && covers(ws, display_words)) {
        best = &s;
        best_len = display_words.size();
      }
    }
    return best;
  }

  std::string action_id(const std::string& vp) const {
    if (auto id = options_.synonyms.find_exact(vp)) return *id;
    if (auto id = options_.synonyms.find_contained(vp)) return *id;
    if (const auto* s = schema_for(vp)) return s->name;
    return canonical_id(vp);
  }

  Formula condition_atom(const std::string& text) {
    if (auto id = options_.synonyms.find_exact(text)) return resolved(*id, text);
    if (auto id = options_.synonyms.find_contained(text)) return resolved(*id, text);

    const auto phrase_words = content_words(text);
    std::optional<std::string> best;
    std::size_t best_len = 0;
    for (const auto& id : universe_) {
      const auto id_words = content_words(id);
      if (id_words.size() > best_len && covers(phrase_words, id_words)) {
        best = id;
        best_len = id_words.size();
      }
    }
    if (!best) {
      std::size_t best_extra = 0;
      for (const auto& id : universe_) {
        const auto id_words = content_words(id);
        if (covers(id_words, phrase_words) && (!best || id_words.size() < best_extra)) {
          best = id;
          best_extra = id_words.size();
        }
      }
    }
    if (best) return resolved(*best, text);
    if (const auto* s = schema_for(text)) return s->effect;

    const std::string id = canonical_id(text);
    warn("condition '" + text + "' matches no known proposition; introduced '" + id + "'");
    add_universe(id, text);
    return resolved(id, text);
  }

  Formula resolved(const std::string& id, const std::string& text) {
    if (auto it = schemas_.find(id); it != schemas_.end()) return it->second.effect;
    if (!display_.contains(id)) display_[id] = text;
    return Formula::atom(id);
  }

  const SchemaMap& schemas_;
  const CompileOptions& options_;
  std::vector<std::string>& warnings_;
  std::vector<std::string> universe_;
  std::map<std::string, std::string> display_;
};

}  // namespace detail

/// Builds a controller with one state per step (plus a terminal state when
/// the last step does not jump back). Per step the stay self-loop, when
/// present, is declared before the advancing transitions.
inline CompileResult compile(const std::vector<StepDescription>& steps, const SchemaMap& schemas,
                             const CompileOptions& options = {}) {
  std::vector<std::string> warnings;
  for (const auto& s : steps) warnings.insert(warnings.end(), s.warnings.begin(), s.warnings.end());
  detail::Resolver resolve(schemas, options, warnings);

  const std::size_t n = steps.size();
  if (n == 0) throw InvalidDocument("no steps to compile");
  auto goto_of = [](const StepDescription& s) -> std::optional<int> {
    std::optional<int> out;
    for (const auto& c : s.clauses) {
      if (c.keyword == ClauseKind::Goto) out = c.target_step;
    }
    return out;
  };
  const bool terminal = !goto_of(steps.back()).has_value();
  std::vector<std::string> states;
  for (std::size_t i = 0; i < n + (terminal ? 1 : 0); ++i) states.push_back("q" + std::to_string(i + 1));

  std::vector<ControllerTransition> ts;
  std::vector<std::string> actions{std::string(kNoop)};
  auto emit = [&](std::size_t from, Formula guard, const std::string& action, std::size_t to) {
    if (guard.is_false()) return;
    if (std::find(actions.begin(), actions.end(), action) == actions.end()) actions.push_back(action);
    ts.push_back(ControllerTransition{from, std::move(guard), action, to});
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& step = steps[i];
    std::size_t next = i + 1;
    std::vector<const Clause*> body;
    for (const auto& c : step.clauses) {
      if (c.keyword != ClauseKind::Goto) body.push_back(&c);
    }
    if (auto target = goto_of(step)) {
      if (*target < 1 || static_cast<std::size_t>(*target) > n) throw DanglingGoto(step.index, *target);
      next = static_cast<std::size_t>(*target - 1);
    }

    if (body.empty()) {
      emit(i, Formula::constant(true), std::string(kNoop), next);
      continue;
    }

    const bool multi_if = body.size() > 1 && std::all_of(body.begin(), body.end(), [](const Clause* c) {
                            return c->keyword == ClauseKind::If;
                          });
    if (multi_if) {
      std::vector<Formula> conds;
      std::vector<std::string> acts;
      for (const Clause* c : body) {
        conds.push_back(resolve.condition(*c->condition));
        acts.push_back(resolve.action(c->verb_phrases.front()).id);
      }
      std::vector<Formula> negated;
      for (const auto& f : conds) negated.push_back(negate(f));
      emit(i, make_and(std::move(negated)), std::string(kNoop), i);
      for (std::size_t k = 0; k < conds.size(); ++k) emit(i, conds[k], acts[k], next);
      continue;
    }
    if (body.size() > 1) {
      warnings.push_back("step " + std::to_string(step.index) +
                         " combines clauses that have no joint rule; only the first clause is compiled");
    }

    const Clause& c = *body.front();
    switch (c.keyword) {
      case ClauseKind::Plain: {
        const auto a = resolve.action(c.verb_phrases.front());
        emit(i, negate(a.precondition), std::string(kNoop), i);
        emit(i, a.precondition, a.id, next);
        break;
      }
      case ClauseKind::Wait:
      case ClauseKind::After: {
        const Formula e = resolve.event(*c.condition);
        const std::string a = c.verb_phrases.empty() ? std::string(kNoop) : resolve.action(c.verb_phrases.front()).id;
        emit(i, negate(e), std::string(kNoop), i);
        emit(i, e, a, next);
        break;
      }
      case ClauseKind::Until: {
        const Formula cond = resolve.condition(*c.condition);
        const auto a = resolve.action(c.verb_phrases.front());
        emit(i, negate(cond), a.id, i);
        emit(i, cond, std::string(kNoop), next);
        break;
      }
      case ClauseKind::If: {
        const Formula cond = resolve.condition(*c.condition);
        const auto a = resolve.action(c.verb_phrases.front());
        emit(i, negate(cond), std::string(kNoop), i);
        emit(i, cond, a.id, next);
        break;
      }
      case ClauseKind::IfElse: {
        const Formula cond = resolve.condition(*c.condition);
        const auto then_action = resolve.action(c.verb_phrases.at(0));
        const auto else_action = resolve.action(c.verb_phrases.at(1));
        emit(i, cond, then_action.id, next);
        emit(i, negate(cond), else_action.id, next);
        break;
      }
      case ClauseKind::Goto:
        break;
    }
  }
  if (terminal) emit(n, Formula::constant(true), std::string(kNoop), n);

  std::vector<Proposition> props;
  std::set<std::string> seen;
  for (const auto& t : ts) {
    std::vector<std::string> used;
    atoms_in_order(t.guard, used);
    for (const auto& id : used) {
      if (!seen.insert(id).second) continue;
      auto it = resolve.display_texts().find(id);
      std::string display = it != resolve.display_texts().end() ? it->second : id;
      if (display == id) std::replace(display.begin(), display.end(), '_', ' ');
      props.push_back(Proposition{id, display});
    }
  }
  return CompileResult{Controller(std::move(props), std::move(actions), std::move(states), 0, std::move(ts)),
                       std::move(warnings)};
}

/// Convenience pipeline: the first steps transcript in `steps_text` and every
/// PDDL transcript in `pddl_text`.
inline CompileResult compile_transcripts(const std::string& steps_text, const std::string& pddl_text,
                                         const CompileOptions& options = {}) {
  std::vector<StepDescription> steps;
  for (const auto& t : parse_transcripts(steps_text)) {
    if (t.kind == TranscriptKind::Steps) {
      steps = extract_steps(t);
      break;
    }
  }
  if (steps.empty()) throw MalformedNumbering("no steps transcript found");
  std::vector<ActionSchema> schemas;
  for (const auto& t : parse_transcripts(pddl_text)) {
    if (t.kind == TranscriptKind::PddlAction) schemas.push_back(parse_pddl_action(t, options.synonyms));
  }
  return compile(steps, schemas_by_name(schemas), options);
}

}  // namespace groundfsa::text
