#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "groundfsa/automata.hpp"
#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"

namespace groundfsa {

/// Label atom for an emitted action, e.g. `act:cross_road`.
inline std::string action_atom(std::string_view action) {
  return std::string(kActionPrefix) + std::string(action);
}

/// One controller transition taken from a product state, together with the
/// product states the model can move to in response.
struct ProductMove {
  std::size_t controller_transition = 0;
  std::string action;
  /// Enabled when the guard is evaluated on the model label with UNC false.
  bool when_certain = false;
  /// Enabled when the guard is evaluated on the model label with UNC true.
  bool when_uncertain = false;
  /// Successor product states, in model-transition order, deduplicated.
  std::vector<std::size_t> successors;
  /// Witnessing model transition per successor; empty optional when a noop
  /// leaves the model in place.
  std::vector<std::optional<std::size_t>> model_transitions;
};

struct ProductState {
  std::size_t model_state = 0;
  std::size_t controller_state = 0;
  bool initial = false;
  std::vector<ProductMove> moves;
};

/// Flat view of one product edge.
struct ProductTransition {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t controller_transition = 0;
  std::string action;
  std::set<std::string> label;
  bool when_certain = false;
  bool when_uncertain = false;
};

/// Reachable part of the composition of an environment model with a
/// controller. Product states pair a model state with a controller state; a
/// state's label is the model's condition label together with the action atom
/// of the controller move taken from it.
class ProductAutomaton {
 public:
  ProductAutomaton(std::shared_ptr<const EnvironmentModel> model, std::shared_ptr<const Controller> controller,
                   std::vector<ProductState> states)
      : model_(std::move(model)), controller_(std::move(controller)), states_(std::move(states)) {}

  const EnvironmentModel& model() const noexcept { return *model_; }
  const Controller& controller() const noexcept { return *controller_; }
  std::span<const ProductState> states() const noexcept { return states_; }

  std::vector<std::size_t> initial_states() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].initial) out.push_back(i);
    }
    return out;
  }

  /// Conditions holding in product state `s` (the model label).
  const std::set<std::string>& condition_label(std::size_t s) const {
    return model_->label(states_.at(s).model_state);
  }

  /// Full label when move `m` is taken from state `s`.
  std::set<std::string> label(std::size_t s, std::size_t m) const {
    auto out = condition_label(s);
    out.insert(action_atom(states_.at(s).moves.at(m).action));
    return out;
  }

  /// Every atom a label may contain: model conditions and action atoms.
  std::set<std::string> label_universe() const {
    std::set<std::string> out;
    for (const auto& p : model_->propositions()) out.insert(p.id);
    for (const auto& a : model_->actions()) out.insert(action_atom(a));
    for (const auto& a : controller_->actions()) out.insert(action_atom(a));
    return out;
  }

  std::string state_name(std::size_t s) const {
    const auto& st = states_.at(s);
    return "(" + model_->state_name(st.model_state) + "," + controller_->state_name(st.controller_state) + ")";
  }

  std::vector<ProductTransition> transitions() const {
    std::vector<ProductTransition> out;
    for (std::size_t s = 0; s < states_.size(); ++s) {
      for (std::size_t m = 0; m < states_[s].moves.size(); ++m) {
        const auto& mv = states_[s].moves[m];
        for (std::size_t succ : mv.successors) {
          out.push_back(ProductTransition{s, succ, mv.controller_transition, mv.action, label(s, m), mv.when_certain,
                                          mv.when_uncertain});
        }
      }
    }
    return out;
  }

  /// Index of the product state (p, q), if reachable.
  std::optional<std::size_t> find(std::size_t model_state, std::size_t controller_state) const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].model_state == model_state && states_[i].controller_state == controller_state) return i;
    }
    return std::nullopt;
  }

 private:
  std::shared_ptr<const EnvironmentModel> model_;
  std::shared_ptr<const Controller> controller_;
  std::vector<ProductState> states_;
};

/// Model states reachable from `p` when the controller emits `action`.
/// A noop that no model transition accepts leaves the model where it is.
inline std::vector<std::pair<std::size_t, std::optional<std::size_t>>> model_successors(const EnvironmentModel& m,
                                                                                         std::size_t p,
                                                                                         std::string_view action) {
  std::vector<std::pair<std::size_t, std::optional<std::size_t>>> out;
  for (std::size_t i : m.outgoing(p)) {
    const auto& t = m.transitions()[i];
    if (!m.fires_on(t, action)) continue;
    bool dup = false;
    for (const auto& [to, _] : out) dup = dup || to == t.to;
    if (!dup) out.emplace_back(t.to, i);
  }
  if (out.empty() && action == kNoop) out.emplace_back(p, std::nullopt);
  return out;
}

/// Checks the alphabet preconditions of build_product.
inline void check_product_alphabets(const EnvironmentModel& m, const Controller& c) {
  std::vector<std::string> offending;
  for (const auto& p : c.propositions()) {
    if (!m.has_proposition(p.id)) offending.push_back(p.id);
  }
  for (const auto& a : c.actions()) {
    if (a != kNoop && !m.has_action(a)) offending.push_back(action_atom(a));
  }
  if (!offending.empty()) throw AlphabetMismatch(std::move(offending));
}

/// Builds the product of `m` and `c`. Every pair (p, q0) is initial; only
/// states reachable from an initial pair (under either UNC value) are kept.
inline ProductAutomaton build_product(const EnvironmentModel& m, const Controller& c) {
  check_product_alphabets(m, c);
  auto model = std::make_shared<const EnvironmentModel>(m);
  auto controller = std::make_shared<const Controller>(c);

  std::vector<ProductState> states;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::deque<std::size_t> queue;
  auto intern = [&](std::size_t p, std::size_t q) {
    auto [it, inserted] = index.try_emplace({p, q}, states.size());
    if (inserted) {
      states.push_back(ProductState{p, q, false, {}});
      queue.push_back(it->second);
    }
    return it->second;
  };

  for (std::size_t p = 0; p < m.states().size(); ++p) {
    const std::size_t s = intern(p, c.init());
    states[s].initial = true;
  }

  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const std::size_t p = states[s].model_state;
    const std::size_t q = states[s].controller_state;
    const BoolValuation conditions = m.condition_valuation(p);
    std::vector<ProductMove> moves;
    for (std::size_t ti : c.outgoing(q)) {
      const auto& t = c.transitions()[ti];
      ProductMove mv;
      mv.controller_transition = ti;
      mv.action = t.action;
      mv.when_certain = eval_classical(t.guard, conditions, false);
      mv.when_uncertain = eval_classical(t.guard, conditions, true);
      if (!mv.when_certain && !mv.when_uncertain) continue;
      for (const auto& [p_next, witness] : model_successors(m, p, t.action)) {
        mv.successors.push_back(intern(p_next, t.to));
        mv.model_transitions.push_back(witness);
      }
      moves.push_back(std::move(mv));
    }
    states[s].moves = std::move(moves);
  }
  return ProductAutomaton(std::move(model), std::move(controller), std::move(states));
}

}  // namespace groundfsa
