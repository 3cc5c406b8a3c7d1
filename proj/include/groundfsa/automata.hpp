#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"

namespace groundfsa {

/// The reserved "no operation" action.
inline constexpr std::string_view kNoop = "noop";
/// Identifier that user propositions may not take.
inline constexpr std::string_view kReservedUnc = "unc";

/// True for `[a-z][a-z0-9_]*`.
inline bool is_identifier(std::string_view id) {
  if (id.empty() || id.front() < 'a' || id.front() > 'z') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

struct Proposition {
  std::string id;
  std::string display_text;

  friend bool operator==(const Proposition&, const Proposition&) = default;
};

struct ControllerTransition {
  std::size_t from = 0;
  Formula guard;
  std::string action;
  std::size_t to = 0;

  bool is_self_loop() const noexcept { return from == to; }

  friend bool operator==(const ControllerTransition&, const ControllerTransition&) = default;
};

namespace detail {

inline std::vector<std::string> with_noop(std::vector<std::string> actions) {
  if (std::find(actions.begin(), actions.end(), kNoop) == actions.end()) {
    actions.insert(actions.begin(), std::string(kNoop));
  }
  return actions;
}

inline void check_unique_states(const std::vector<std::string>& states, std::string_view what) {
  if (states.empty()) throw InvalidDocument(std::string(what) + " has no states");
  std::set<std::string> seen;
  for (const auto& s : states) {
    if (s.empty()) throw InvalidDocument(std::string(what) + " has an empty state id");
    if (!seen.insert(s).second) throw InvalidDocument("duplicate state '" + s + "'");
  }
}

inline std::optional<std::size_t> find_index(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace detail

/// Guarded, action-emitting finite state automaton.
///
/// Input symbols are propositional guards over the declared propositions
/// (plus the reserved UNC atom once hardened); the output alphabet always
/// contains `noop`. Validated on construction and immutable afterwards.
class Controller {
 public:
  Controller(std::vector<Proposition> propositions, std::vector<std::string> actions,
             std::vector<std::string> states, std::size_t init, std::vector<ControllerTransition> transitions)
      : propositions_(std::move(propositions)),
        actions_(detail::with_noop(std::move(actions))),
        states_(std::move(states)),
        init_(init),
        transitions_(std::move(transitions)) {
    validate();
    outgoing_.resize(states_.size());
    for (std::size_t i = 0; i < transitions_.size(); ++i) outgoing_[transitions_[i].from].push_back(i);
  }

  std::span<const Proposition> propositions() const noexcept { return propositions_; }
  std::span<const std::string> actions() const noexcept { return actions_; }
  std::span<const std::string> states() const noexcept { return states_; }
  std::size_t init() const noexcept { return init_; }
  std::span<const ControllerTransition> transitions() const noexcept { return transitions_; }

  /// Indices into transitions() leaving `state`, in declaration order.
  std::span<const std::size_t> outgoing(std::size_t state) const { return outgoing_.at(state); }

  const std::string& state_name(std::size_t state) const { return states_.at(state); }
  std::optional<std::size_t> state_index(std::string_view name) const { return detail::find_index(states_, name); }

  bool has_proposition(std::string_view id) const {
    return std::any_of(propositions_.begin(), propositions_.end(), [&](const auto& p) { return p.id == id; });
  }

  /// Atoms appearing in the guards leaving `state`, in order of first use.
  std::vector<std::string> guard_atoms(std::size_t state) const {
    std::vector<std::string> out;
    for (std::size_t t : outgoing(state)) atoms_in_order(transitions_[t].guard, out);
    return out;
  }

  friend bool operator==(const Controller& a, const Controller& b) {
    return a.propositions_ == b.propositions_ && a.actions_ == b.actions_ && a.states_ == b.states_ &&
           a.init_ == b.init_ && a.transitions_ == b.transitions_;
  }

 private:
  void validate() const {
    std::set<std::string> ids;
    for (const auto& p : propositions_) {
      if (!is_identifier(p.id)) throw InvalidDocument("invalid proposition id '" + p.id + "'");
      if (p.id == kReservedUnc) throw InvalidDocument("proposition id 'unc' is reserved");
      if (!ids.insert(p.id).second) throw InvalidDocument("duplicate proposition '" + p.id + "'");
    }
    std::set<std::string> acts;
    for (const auto& a : actions_) {
      if (!is_identifier(a)) throw InvalidDocument("invalid action id '" + a + "'");
      if (!acts.insert(a).second) throw InvalidDocument("duplicate action '" + a + "'");
    }
    detail::check_unique_states(states_, "controller");
    if (init_ >= states_.size()) throw InvalidDocument("initial state out of range");
    for (const auto& t : transitions_) {
      if (t.from >= states_.size() || t.to >= states_.size()) {
        throw InvalidDocument("transition endpoint out of range");
      }
      if (!acts.contains(t.action)) throw InvalidDocument("undeclared action '" + t.action + "'");
      for (const auto& a : atoms(t.guard)) {
        if (!ids.contains(a)) throw InvalidDocument("guard uses undeclared proposition '" + a + "'");
      }
    }
  }

  std::vector<Proposition> propositions_;
  std::vector<std::string> actions_;
  std::vector<std::string> states_;
  std::size_t init_;
  std::vector<ControllerTransition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

struct ModelTransition {
  std::size_t from = 0;
  /// Formula over action atoms; a transition fires on action `a` when the
  /// guard holds with `a` true and every other action false.
  Formula guard;
  std::size_t to = 0;

  friend bool operator==(const ModelTransition&, const ModelTransition&) = default;
};

/// Nondeterministic transition system with action-triggered edges and
/// condition-labelled states.
class EnvironmentModel {
 public:
  EnvironmentModel(std::vector<Proposition> propositions, std::vector<std::string> actions,
                   std::vector<std::string> states, std::vector<std::set<std::string>> labels,
                   std::vector<ModelTransition> transitions)
      : propositions_(std::move(propositions)),
        actions_(detail::with_noop(std::move(actions))),
        states_(std::move(states)),
        labels_(std::move(labels)),
        transitions_(std::move(transitions)) {
    validate();
    outgoing_.resize(states_.size());
    for (std::size_t i = 0; i < transitions_.size(); ++i) outgoing_[transitions_[i].from].push_back(i);
  }

  std::span<const Proposition> propositions() const noexcept { return propositions_; }
  std::span<const std::string> actions() const noexcept { return actions_; }
  std::span<const std::string> states() const noexcept { return states_; }
  std::span<const ModelTransition> transitions() const noexcept { return transitions_; }
  std::span<const std::size_t> outgoing(std::size_t state) const { return outgoing_.at(state); }

  const std::set<std::string>& label(std::size_t state) const { return labels_.at(state); }
  const std::string& state_name(std::size_t state) const { return states_.at(state); }
  std::optional<std::size_t> state_index(std::string_view name) const { return detail::find_index(states_, name); }

  bool has_proposition(std::string_view id) const {
    return std::any_of(propositions_.begin(), propositions_.end(), [&](const auto& p) { return p.id == id; });
  }
  bool has_action(std::string_view id) const {
    return std::find(actions_.begin(), actions_.end(), id) != actions_.end();
  }

  /// Condition valuation induced by the label of `state`.
  BoolValuation condition_valuation(std::size_t state) const {
    BoolValuation v;
    for (const auto& p : propositions_) v[p.id] = labels_.at(state).contains(p.id);
    return v;
  }

  /// Whether model transition `t` fires when the controller emits `action`.
  bool fires_on(const ModelTransition& t, std::string_view action) const {
    BoolValuation v;
    for (const auto& a : actions_) v[a] = a == action;
    return eval_classical(t.guard, v);
  }

  friend bool operator==(const EnvironmentModel& a, const EnvironmentModel& b) {
    return a.propositions_ == b.propositions_ && a.actions_ == b.actions_ && a.states_ == b.states_ &&
           a.labels_ == b.labels_ && a.transitions_ == b.transitions_;
  }

 private:
  void validate() const {
    std::set<std::string> ids;
    for (const auto& p : propositions_) {
      if (!is_identifier(p.id)) throw InvalidDocument("invalid proposition id '" + p.id + "'");
      if (p.id == kReservedUnc) throw InvalidDocument("proposition id 'unc' is reserved");
      if (!ids.insert(p.id).second) throw InvalidDocument("duplicate proposition '" + p.id + "'");
    }
    std::set<std::string> acts;
    for (const auto& a : actions_) {
      if (!is_identifier(a)) throw InvalidDocument("invalid action id '" + a + "'");
      if (!acts.insert(a).second) throw InvalidDocument("duplicate action '" + a + "'");
    }
    detail::check_unique_states(states_, "model");
    if (labels_.size() != states_.size()) throw InvalidDocument("every model state needs a label entry");
    for (const auto& label : labels_) {
      for (const auto& p : label) {
        if (!ids.contains(p)) throw InvalidDocument("label uses undeclared proposition '" + p + "'");
      }
    }
    for (const auto& t : transitions_) {
      if (t.from >= states_.size() || t.to >= states_.size()) {
        throw InvalidDocument("model transition endpoint out of range");
      }
      if (contains_unc(t.guard)) throw InvalidDocument("model guards may not mention UNC");
      for (const auto& a : atoms(t.guard)) {
        if (!acts.contains(a)) throw InvalidDocument("model guard uses undeclared action '" + a + "'");
      }
    }
  }

  std::vector<Proposition> propositions_;
  std::vector<std::string> actions_;
  std::vector<std::string> states_;
  std::vector<std::set<std::string>> labels_;
  std::vector<ModelTransition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

}  // namespace groundfsa
