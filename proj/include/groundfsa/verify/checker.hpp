#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "groundfsa/automata.hpp"
#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"
#include "groundfsa/product.hpp"
#include "groundfsa/verify/spec.hpp"

namespace groundfsa {

enum class CheckMode {
  /// Guards see the model label with UNC false.
  Exact,
  /// Each step either sees the model label exactly or UNC holds.
  Assumption1,
};

inline std::string_view to_string(CheckMode m) { return m == CheckMode::Exact ? "exact" : "assumption1"; }

inline CheckMode parse_check_mode(std::string_view s) {
  if (s == "exact") return CheckMode::Exact;
  if (s == "assumption1") return CheckMode::Assumption1;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected exact or assumption1)");
}

/// One position of a counterexample path.
struct CounterexampleStep {
  std::size_t product_state = 0;
  std::size_t model_state = 0;
  std::size_t controller_state = 0;
  /// Controller transition taken here; empty when no transition is enabled.
  std::optional<std::size_t> controller_transition;
  std::string action;
  /// The step was taken on the UNC branch.
  bool uncertain = false;
  std::set<std::string> label;

  friend bool operator==(const CounterexampleStep&, const CounterexampleStep&) = default;
};

struct Verdict {
  bool holds = true;
  /// Path from an initial state; the label of the last step violates the body.
  std::optional<std::vector<CounterexampleStep>> counterexample;
  std::size_t states_explored = 0;
};

namespace detail {

inline BoolValuation label_valuation(const std::set<std::string>& universe, const std::set<std::string>& label) {
  BoolValuation v;
  for (const auto& a : universe) v[a] = label.contains(a);
  return v;
}

inline void check_spec_atoms(const Spec& spec, const std::set<std::string>& universe) {
  for (const auto& a : atoms(spec.body)) {
    if (!universe.contains(a)) throw UnboundAtom(a);
  }
  if (contains_unc(spec.body)) throw InvalidDocument("specifications may not mention UNC");
}

inline bool move_allowed(const ProductMove& mv, CheckMode mode) {
  return mode == CheckMode::Assumption1 ? (mv.when_certain || mv.when_uncertain) : mv.when_certain;
}

}  // namespace detail

/// Breadth-first search over the reachable product from every initial state.
///
/// A visited state violates the spec when the label of some allowed move
/// falsifies the body, or, when some explored branch (certain, or UNC in
/// assumption1 mode) enables no transition, when its condition label alone
/// does. The first violation found is a shortest counterexample; ties follow
/// initial-state and move declaration order.
inline Verdict check(const ProductAutomaton& prod, const Spec& spec, CheckMode mode) {
  const auto universe = prod.label_universe();
  detail::check_spec_atoms(spec, universe);

  const auto& states = prod.states();
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> parent(states.size());
  std::vector<bool> seen(states.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t s : prod.initial_states()) {
    seen[s] = true;
    queue.push_back(s);
  }

  auto path_to = [&](std::size_t s) {
    std::vector<CounterexampleStep> rev;
    std::size_t cur = s;
    while (parent[cur]) {
      const auto [prev, move] = *parent[cur];
      const auto& mv = states[prev].moves[move];
      rev.push_back(CounterexampleStep{prev, states[prev].model_state, states[prev].controller_state,
                                       mv.controller_transition, mv.action, !mv.when_certain, prod.label(prev, move)});
      cur = prev;
    }
    return std::vector<CounterexampleStep>(rev.rbegin(), rev.rend());
  };

  Verdict verdict;
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    ++verdict.states_explored;
    const auto& st = states[s];
    bool certain_move = false;
    bool uncertain_move = false;
    for (std::size_t m = 0; m < st.moves.size(); ++m) {
      const auto& mv = st.moves[m];
      if (!detail::move_allowed(mv, mode)) continue;
      certain_move = certain_move || mv.when_certain;
      uncertain_move = uncertain_move || mv.when_uncertain;
      auto label = prod.label(s, m);
      if (!eval_classical(spec.body, detail::label_valuation(universe, label))) {
        auto path = path_to(s);
        path.push_back(CounterexampleStep{s, st.model_state, st.controller_state, mv.controller_transition, mv.action,
                                          !mv.when_certain, std::move(label)});
        verdict.holds = false;
        verdict.counterexample = std::move(path);
        return verdict;
      }
      for (std::size_t succ : mv.successors) {
        if (seen[succ]) continue;
        seen[succ] = true;
        parent[succ] = std::pair{s, m};
        queue.push_back(succ);
      }
    }
    // A branch with no enabled transition stops the run in this state; its
    // label is the condition label alone.
    const bool stuck_certain = !certain_move;
    const bool stuck_uncertain = mode == CheckMode::Assumption1 && !uncertain_move;
    if (stuck_certain || stuck_uncertain) {
      const auto& label = prod.condition_label(s);
      if (!eval_classical(spec.body, detail::label_valuation(universe, label))) {
        auto path = path_to(s);
        path.push_back(
            CounterexampleStep{s, st.model_state, st.controller_state, std::nullopt, "", !stuck_certain, label});
        verdict.holds = false;
        verdict.counterexample = std::move(path);
        return verdict;
      }
    }
  }
  return verdict;
}

/// Re-validates a counterexample against the model and controller
/// definitions, independently of the product construction. Returns an empty
/// string on success, otherwise the reason it is invalid.
inline std::string replay_counterexample(const EnvironmentModel& m, const Controller& c, const Spec& spec,
                                         CheckMode mode, const std::vector<CounterexampleStep>& path) {
  if (path.empty()) return "empty path";
  if (path.front().controller_state != c.init()) return "path does not start in the initial controller state";
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& step = path[i];
    if (step.model_state >= m.states().size() || step.controller_state >= c.states().size()) {
      return "step " + std::to_string(i) + " refers to an unknown state";
    }
    const auto conditions = m.condition_valuation(step.model_state);
    std::set<std::string> expected = m.label(step.model_state);
    if (step.controller_transition) {
      const auto& t = c.transitions()[*step.controller_transition];
      if (t.from != step.controller_state) return "step " + std::to_string(i) + " takes a transition of another state";
      if (t.action != step.action) return "step " + std::to_string(i) + " emits the wrong action";
      if (step.uncertain && mode == CheckMode::Exact) return "exact mode path uses the UNC branch";
      if (!eval_classical(t.guard, conditions, step.uncertain)) {
        return "step " + std::to_string(i) + " guard is not enabled";
      }
      expected.insert(action_atom(t.action));
    } else {
      if (step.uncertain && mode == CheckMode::Exact) return "exact mode path uses the UNC branch";
      for (std::size_t ti : c.outgoing(step.controller_state)) {
        if (eval_classical(c.transitions()[ti].guard, conditions, step.uncertain)) {
          return "step " + std::to_string(i) + " claims no enabled transition";
        }
      }
      if (i + 1 != path.size()) return "path continues after a state without moves";
    }
    if (step.label != expected) return "step " + std::to_string(i) + " has a wrong label";
    if (i + 1 < path.size()) {
      const auto& t = c.transitions()[*step.controller_transition];
      const auto& next = path[i + 1];
      if (next.controller_state != t.to) return "step " + std::to_string(i + 1) + " has the wrong controller state";
      bool reachable = false;
      for (const auto& [p_next, _] : model_successors(m, step.model_state, t.action)) {
        reachable = reachable || p_next == next.model_state;
      }
      if (!reachable) return "step " + std::to_string(i + 1) + " is not a model successor";
    }
  }
  std::set<std::string> universe;
  for (const auto& p : m.propositions()) universe.insert(p.id);
  for (const auto& a : m.actions()) universe.insert(action_atom(a));
  for (const auto& a : c.actions()) universe.insert(action_atom(a));
  for (const auto& a : atoms(spec.body)) universe.insert(a);
  if (eval_classical(spec.body, detail::label_valuation(universe, path.back().label))) {
    return "last label does not violate the specification";
  }
  return "";
}

}  // namespace groundfsa
