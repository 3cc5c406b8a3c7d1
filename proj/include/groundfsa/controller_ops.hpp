#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "groundfsa/automata.hpp"
#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"

namespace groundfsa {

inline bool controller_mentions_unc(const Controller& c) {
  for (const auto& t : c.transitions()) {
    if (contains_unc(t.guard)) return true;
  }
  return false;
}

/// Every state has a noop self-loop that is enabled whenever UNC holds.
inline bool is_hardened(const Controller& c) {
  for (std::size_t q = 0; q < c.states().size(); ++q) {
    bool covered = false;
    for (std::size_t i : c.outgoing(q)) {
      const auto& t = c.transitions()[i];
      if (t.is_self_loop() && t.action == kNoop && (t.guard.is_true() || contains_unc(t.guard))) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

/// Adds the uncertainty self-loop to every state.
///
/// The first existing noop self-loop of a state absorbs UNC as a disjunct
/// (a constant-true guard is left as is); states without one get a fresh
/// `(UNC, noop)` self-loop. The UNC loop is declared first among the state's
/// transitions so first-enabled selection halts under uncertainty. All other
/// transitions are kept unchanged.
inline Controller harden(const Controller& c) {
  if (controller_mentions_unc(c)) throw AlreadyHardened();
  std::vector<ControllerTransition> out;
  out.reserve(c.transitions().size() + c.states().size());
  for (std::size_t q = 0; q < c.states().size(); ++q) {
    std::optional<std::size_t> merged;
    for (std::size_t i : c.outgoing(q)) {
      const auto& t = c.transitions()[i];
      if (t.is_self_loop() && t.action == kNoop) {
        merged = i;
        break;
      }
    }
    if (merged) {
      auto loop = c.transitions()[*merged];
      if (!loop.guard.is_true()) loop.guard = make_or(Formula::unc(), loop.guard);
      out.push_back(std::move(loop));
    } else {
      out.push_back(ControllerTransition{q, Formula::unc(), std::string(kNoop), q});
    }
    for (std::size_t i : c.outgoing(q)) {
      if (merged && i == *merged) continue;
      out.push_back(c.transitions()[i]);
    }
  }
  std::vector<Proposition> props(c.propositions().begin(), c.propositions().end());
  std::vector<std::string> actions(c.actions().begin(), c.actions().end());
  std::vector<std::string> states(c.states().begin(), c.states().end());
  return Controller(std::move(props), std::move(actions), std::move(states), c.init(), std::move(out));
}

/// Outgoing transitions of `state` whose guard is definitely True under `v`,
/// as indices into `c.transitions()` in declaration order.
inline std::vector<std::size_t> enabled_transitions(const Controller& c, std::size_t state, const TriValuation& v) {
  std::vector<std::size_t> out;
  for (std::size_t i : c.outgoing(state)) {
    if (eval_three_valued(c.transitions()[i].guard, v) == TriBool::True) out.push_back(i);
  }
  return out;
}

struct StateCoverage {
  std::size_t state = 0;
  bool complete = true;
  bool deterministic = true;
  /// A valuation under which no guard is definitely True.
  std::optional<TriValuation> incomplete_witness;
  /// A valuation under which two or more guards are definitely True.
  std::optional<TriValuation> overlap_witness;
  std::vector<std::size_t> overlapping;
};

struct CompletenessReport {
  std::vector<StateCoverage> states;

  bool ok() const {
    for (const auto& s : states) {
      if (!s.complete || !s.deterministic) return false;
    }
    return true;
  }
};

/// Guard-coverage lint: enumerates every TriBool valuation of the atoms used
/// by each state's guards and records missing or overlapping guards.
inline CompletenessReport validate_completeness(const Controller& c) {
  CompletenessReport report;
  for (std::size_t q = 0; q < c.states().size(); ++q) {
    StateCoverage cov;
    cov.state = q;
    const auto names = c.guard_atoms(q);
    if (names.size() > 12) throw std::invalid_argument("state '" + c.state_name(q) + "' has too many guard atoms");
    std::size_t rows = 1;
    for (std::size_t i = 0; i < names.size(); ++i) rows *= 3;
    for (std::size_t row = 0; row < rows; ++row) {
      TriValuation v;
      std::size_t code = row;
      for (const auto& name : names) {
        v[name] = static_cast<TriBool>(code % 3);
        code /= 3;
      }
      const auto enabled = enabled_transitions(c, q, v);
      if (enabled.empty() && cov.complete) {
        cov.complete = false;
        cov.incomplete_witness = v;
      }
      if (enabled.size() > 1 && cov.deterministic) {
        cov.deterministic = false;
        cov.overlap_witness = v;
        cov.overlapping = enabled;
      }
    }
    report.states.push_back(std::move(cov));
  }
  return report;
}

}  // namespace groundfsa
