#pragma once

#include <cstddef>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "groundfsa/automata.hpp"
#include "groundfsa/calibration/bounds.hpp"
#include "groundfsa/controller_ops.hpp"
#include "groundfsa/error.hpp"
#include "groundfsa/formula.hpp"
#include "groundfsa/runtime/perception.hpp"
#include "json.hpp"

namespace groundfsa {

struct EvaluationRecord {
  std::string proposition;
  double score = 0.0;
  TriBool value = TriBool::Unknown;
  /// Definite value of an atom in the guard of the transition taken; these
  /// are the evaluations the run's correctness depends on.
  bool decisive = false;

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

struct TrajectoryStep {
  std::string frame_id;
  std::string state_before;
  std::vector<EvaluationRecord> evaluations;
  bool unc = false;
  std::size_t transition = 0;
  std::string action;
  std::string state_after;
  /// Taken without evaluating anything: a guard-true noop edge out of a state
  /// whose guards mention no proposition, followed at the start of a frame.
  bool chained = false;

  friend bool operator==(const TrajectoryStep&, const TrajectoryStep&) = default;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::string initial_state;
  Thresholds thresholds;
  /// Number of decisive evaluations.
  std::size_t n_certain = 0;

  /// Initial state followed by the state after every step.
  std::vector<std::string> state_sequence() const {
    std::vector<std::string> out{initial_state};
    for (const auto& s : steps) out.push_back(s.state_after);
    return out;
  }
};

namespace detail {

inline bool proposition_free(const Controller& c, std::size_t q) { return c.guard_atoms(q).empty(); }

/// Target of a guard-true noop edge leaving a proposition-free state, if the
/// first enabled transition is one.
inline std::optional<std::size_t> chain_edge(const Controller& c, std::size_t q) {
  if (!proposition_free(c, q)) return std::nullopt;
  const auto enabled = enabled_transitions(c, q, TriValuation{});
  if (enabled.empty()) return std::nullopt;
  const auto& t = c.transitions()[enabled.front()];
  if (t.action != kNoop || t.is_self_loop()) return std::nullopt;
  return enabled.front();
}

}  // namespace detail

/// Executes a hardened controller on a frame sequence, one decision per frame.
///
/// Per frame: first follow chain edges (at most |states| of them), then score
/// every proposition in the current state's guards, derive UNC, take the
/// first enabled transition and emit its action.
inline Trajectory run(const Controller& c, const std::vector<ObservationFrame>& frames, PerceptionBackend& backend,
                      const Thresholds& th) {
  th.validate();
  if (!is_hardened(c)) throw InvalidDocument("controller is not hardened; harden it before execution");
  if (frames.empty()) throw std::invalid_argument("no frames to run");

  Trajectory traj;
  traj.thresholds = th;
  traj.initial_state = c.state_name(c.init());
  std::size_t q = c.init();
  for (const auto& frame : frames) {
    for (std::size_t hops = 0; hops < c.states().size(); ++hops) {
      const auto edge = detail::chain_edge(c, q);
      if (!edge) break;
      const auto& t = c.transitions()[*edge];
      traj.steps.push_back(
          TrajectoryStep{frame.frame_id, c.state_name(q), {}, false, *edge, t.action, c.state_name(t.to), true});
      q = t.to;
    }

    TrajectoryStep step;
    step.frame_id = frame.frame_id;
    step.state_before = c.state_name(q);
    const auto props = c.guard_atoms(q);
    std::map<std::string, double> scores;
    try {
      scores = backend.score_all(props, frame);
    } catch (const BackendFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw BackendFailure(frame.frame_id, e.what());
    }
    TriValuation v;
    for (const auto& p : props) {
      auto it = scores.find(p);
      if (it == scores.end()) throw BackendFailure(frame.frame_id, "no score for '" + p + "'");
      const double s = detail::checked_score(it->second, frame, p);
      const TriBool value = classify_score(s, th);
      v[p] = value;
      step.evaluations.push_back(EvaluationRecord{p, s, value, false});
      step.unc = step.unc || value == TriBool::Unknown;
    }
    const auto enabled = enabled_transitions(c, q, v);
    if (enabled.empty()) throw Stuck(c.state_name(q), frame.frame_id);
    const auto& t = c.transitions()[enabled.front()];
    const auto guard_atoms = atoms(t.guard);
    for (auto& e : step.evaluations) {
      e.decisive = e.value != TriBool::Unknown && guard_atoms.contains(e.proposition);
      if (e.decisive) ++traj.n_certain;
    }
    step.transition = enabled.front();
    step.action = t.action;
    step.state_after = c.state_name(t.to);
    traj.steps.push_back(std::move(step));
    q = t.to;
  }
  return traj;
}

/// Probability that every decisive evaluation of the run was correct.
inline double runtime_bound(const Trajectory& traj, double p_t, double p_f) {
  return all_certain_bound(p_t, p_f, traj.n_certain);
}

inline nlohmann::json trajectory_to_json(const Trajectory& traj, std::optional<std::pair<double, double>> accuracies = {}) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : traj.steps) {
    nlohmann::json evals = nlohmann::json::array();
    for (const auto& e : s.evaluations) {
      evals.push_back({{"proposition", e.proposition},
                       {"score", e.score},
                       {"value", std::string(to_string(e.value))},
                       {"decisive", e.decisive}});
    }
    steps.push_back({{"frame_id", s.frame_id},
                     {"state_before", s.state_before},
                     {"evaluations", std::move(evals)},
                     {"unc", s.unc},
                     {"transition", s.transition},
                     {"action", s.action},
                     {"state_after", s.state_after},
                     {"chained", s.chained}});
  }
  nlohmann::json j{{"initial_state", traj.initial_state},
                   {"steps", std::move(steps)},
                   {"state_sequence", traj.state_sequence()},
                   {"n_certain", traj.n_certain},
                   {"thresholds", {{"t", traj.thresholds.t}, {"f", traj.thresholds.f}}}};
  if (!traj.thresholds.source.empty()) j["thresholds"]["source"] = traj.thresholds.source;
  if (accuracies) {
    j["p_t"] = accuracies->first;
    j["p_f"] = accuracies->second;
    j["runtime_bound"] = runtime_bound(traj, accuracies->first, accuracies->second);
  }
  return j;
}

inline std::string trajectory_table(const Trajectory& traj, std::optional<std::pair<double, double>> accuracies = {}) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "frame" << std::setw(8) << "from" << std::setw(8) << "to" << std::setw(30)
     << "action"
     << "evaluations\n";
  for (const auto& s : traj.steps) {
    std::string evals;
    for (const auto& e : s.evaluations) {
      std::ostringstream one;
      one << e.proposition << "=" << std::fixed << std::setprecision(3) << e.score << ":" << to_string(e.value);
      evals += (evals.empty() ? "" : " ") + one.str();
    }
    if (s.chained) evals = "(chained)";
    os << std::setw(10) << s.frame_id << std::setw(8) << s.state_before << std::setw(8) << s.state_after
       << std::setw(30) << s.action << evals << "\n";
  }
  os << "states: ";
  const auto seq = traj.state_sequence();
  for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? " -> " : "") << seq[i];
  os << "\nn_certain: " << traj.n_certain << "\n";
  if (accuracies) {
    os << "runtime_bound: " << std::setprecision(6) << runtime_bound(traj, accuracies->first, accuracies->second)
       << "\n";
  }
  return os.str();
}

}  // namespace groundfsa
