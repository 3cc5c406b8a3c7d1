// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "groundfsa/calibration/curve.hpp"
#include "groundfsa/calibration/monte_carlo.hpp"
#include "groundfsa/calibration/records.hpp"
#include "groundfsa/controller_ops.hpp"
#include "groundfsa/product.hpp"
#include "groundfsa/runtime/executor.hpp"
#include "groundfsa/verify/checker.hpp"
#include "groundfsa/verify/smv.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/smv_interp.hpp"
#include "support/synthetic_models.hpp"

using namespace groundfsa;
using namespace groundfsa::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= limit_seconds) {
    o.ok = false;
    o.detail += " [over time limit " + std::to_string(limit_seconds) + " s]";
  }
  if (!o.ok) ++failures;
  std::printf("[%s] criterion %d: %s (%.3f s) %s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

std::optional<std::string> find_external_checker() {
  for (const char* name : {"NuSMV", "nuXmv"}) {
    const std::string probe = std::string("command -v ") + name + " >/dev/null 2>&1";
    if (std::system(probe.c_str()) == 0) return std::string(name);
  }
  return std::nullopt;
}

/// Runs an external SMV checker; true when it reports the spec as true.
bool external_verdict(const std::string& tool, const std::string& smv, const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto in = dir / ("groundfsa_" + tag + ".smv");
  const auto out = dir / ("groundfsa_" + tag + ".out");
  write_file(in.string(), smv);
  const std::string cmd = tool + " " + in.string() + " > " + out.string() + " 2>&1";
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error(tool + " failed on " + in.string());
  const auto text = read_file(out.string());
  if (text.find("is true") != std::string::npos) return true;
  if (text.find("is false") != std::string::npos) return false;
  throw std::runtime_error(tool + " produced no verdict");
}

}  // namespace

int main() {
  criterion(1, "controller reconstruction", 1.0, [] {
    Outcome o;
    const auto crossing = compile_case("crossing").controller;
    const auto arm = compile_case("arm").controller;
    const auto m1 = isomorphism_mismatch(crossing, expected_crossing());
    const auto m2 = isomorphism_mismatch(arm, expected_arm());
    o.ok = m1.empty() && m2.empty();
    o.detail = "crossing: " + (m1.empty() ? std::to_string(crossing.states().size()) + " states, " +
                                                std::to_string(crossing.transitions().size()) + " transitions"
                                          : m1) +
               "; arm: " +
               (m2.empty() ? std::to_string(arm.states().size()) + " states, " +
                                 std::to_string(arm.transitions().size()) + " transitions"
                           : m2);
    return o;
  });

  criterion(2, "hardening", 1.0, [] {
    const auto hardened = harden(compile_case("crossing").controller);
    const auto iso = isomorphism_mismatch(hardened, expected_crossing_hardened());
    return Outcome{iso.empty() && is_hardened(hardened), iso.empty() ? "per-edge guards equivalent" : iso};
  });

  criterion(3, "verification verdicts", 1.0, [] {
    Outcome o;
    const auto crossing_m = model_case("crossing");
    const auto crossing_c = harden(compile_case("crossing").controller);
    const auto crossing_spec = spec_case("crossing");
    const auto v1 = check(build_product(crossing_m, crossing_c), crossing_spec, CheckMode::Assumption1);
    const auto arm_m = model_case("arm");
    const auto arm_c = harden(compile_case("arm").controller);
    const auto v2 = check(build_product(arm_m, arm_c), spec_case("arm"), CheckMode::Assumption1);

    // Weaken the guard of the transition emitting cross_road to `true`.
    const auto plain = compile_case("crossing").controller;
    std::size_t emit = 0;
    for (std::size_t i = 0; i < plain.transitions().size(); ++i) {
      if (plain.transitions()[i].action == "cross_road") emit = i;
    }
    const auto mutant = harden(with_guard(plain, emit, Formula::constant(true)));
    const auto v3 = check(build_product(crossing_m, mutant), crossing_spec, CheckMode::Assumption1);
    std::string replay = "no counterexample";
    if (v3.counterexample) replay = replay_counterexample(crossing_m, mutant, crossing_spec, CheckMode::Assumption1,
                                                          *v3.counterexample);
    o.ok = v1.holds && v2.holds && !v3.holds && replay.empty();
    o.detail = std::string("crossing ") + (v1.holds ? "holds" : "violated") + ", arm " +
               (v2.holds ? "holds" : "violated") + ", mutant " + (v3.holds ? "holds" : "violated") +
               (v3.counterexample ? " (" + std::to_string(v3.counterexample->size()) + "-step counterexample, replay " +
                                        (replay.empty() ? "valid" : replay) + ")"
                                  : "");
    return o;
  });

  criterion(4, "grounded trajectory", 1.0, [] {
    const auto c = harden(compile_case("crossing").controller);
    RecordedScoreBackend backend;
    const auto traj = run(c, frames_case("crossing"), backend, Thresholds{0.45, 0.2, "acceptance"});
    const std::vector<std::string> expected{"q1", "q2", "q2", "q3", "q3", "q4"};
    const bool seq_ok = traj.state_sequence() == expected;
    bool frame2_ok = false;
    for (const auto& step : traj.steps) {
      if (step.frame_id != "f2") continue;
      for (const auto& e : step.evaluations) {
        frame2_ok = frame2_ok ||
                    (e.proposition == "traffic_light_is_green" && e.score == 0.4 && e.value == TriBool::Unknown);
      }
    }
    const double bound = runtime_bound(traj, 0.983, 0.975);
    const bool bound_ok = std::abs(bound - std::pow(0.975, 5)) <= 1e-12;
    std::ostringstream d;
    d << "states";
    for (const auto& s : traj.state_sequence()) d << " " << s;
    d << ", n_certain " << traj.n_certain << ", bound " << bound;
    return Outcome{seq_ok && frame2_ok && traj.n_certain == 5 && bound_ok, d.str()};
  });

  criterion(5, "calibration points", 1.0, [] {
    const auto records = read_records(read_file(data_path("calibration/synthetic_records.csv")));
    const std::vector<double> grid = default_grid();
    const auto curve = sweep(records, grid);
    std::optional<double> pt;
    std::optional<double> pf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid[i] - 0.45) < 1e-9) pt = curve.acc_true[i];
      if (std::abs(grid[i] - 0.2) < 1e-9) pf = curve.acc_false[i];
    }
    std::ostringstream d;
    d << "p_t(0.45) " << (pt ? std::to_string(*pt) : "undefined") << ", p_f(0.2) "
      << (pf ? std::to_string(*pf) : "undefined") << " over " << records.size() << " records";
    return Outcome{pt && pf && std::abs(*pt - 0.9825) <= 0.0005 && std::abs(*pf - 0.975) <= 0.0005, d.str()};
  });

  criterion(6, "single-evaluation bound, Monte Carlo", 30.0, [] {
    Outcome o;
    int passed = 0;
    double worst_margin = 1.0;
    const auto battery = synthetic_battery();
    for (const auto& sc : battery) {
      const auto r = monte_carlo_a1(sc.model, sc.thresholds, 100000, sc.seed, 4);
      const double sum = r.p_e2() + r.p_e3() + r.p_eu();
      const double floor = single_evaluation_bound(*sc.model.accuracy_true(sc.thresholds.t),
                                          *sc.model.accuracy_false(sc.thresholds.f));
      const auto acc = r.conditional_accuracy();
      const bool ok = acc && *acc >= floor - 3.0 * r.sigma(floor) && std::abs(sum - 1.0) <= 1e-12;
      if (acc) worst_margin = std::min(worst_margin, *acc - (floor - 3.0 * r.sigma(floor)));
      if (ok) {
        ++passed;
      } else {
        o.detail += "[" + sc.name + " failed] ";
      }
    }
    o.ok = passed == static_cast<int>(battery.size()) && battery.size() == 10;
    o.detail += std::to_string(passed) + "/" + std::to_string(battery.size()) +
                " models, smallest margin over min(p_t, p_f) - 3 sigma " + std::to_string(worst_margin);
    return o;
  });

  criterion(7, "checker agrees with path-enumeration oracle", 60.0, [] {
    Rng rng(20240607);
    int disagreements = 0;
    int violated = 0;
    for (int i = 0; i < 200; ++i) {
      auto inst = random_instance(rng, 6);
      const Controller c =
          coin(rng) && !controller_mentions_unc(inst.controller) ? harden(inst.controller) : inst.controller;
      for (auto mode : {CheckMode::Exact, CheckMode::Assumption1}) {
        const auto native = check(build_product(inst.model, c), inst.spec, mode);
        const auto oracle = path_oracle(inst.model, c, inst.spec, mode);
        bool agree = native.holds == oracle.holds;
        if (agree && !native.holds) {
          agree = native.counterexample->size() == *oracle.violation_depth + 1 &&
                  replay_counterexample(inst.model, c, inst.spec, mode, *native.counterexample).empty();
          ++violated;
        }
        if (!agree) ++disagreements;
      }
    }
    return Outcome{disagreements == 0, std::to_string(disagreements) + " disagreements over 400 checks (200 instances x 2 modes, " +
                                           std::to_string(violated) + " violated)"};
  });

  criterion(8, "Kleene and classical evaluation agree", 10.0, [] {
    Rng rng(8);
    int disagreements = 0;
    std::size_t rows = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto names = numbered("x", 1 + pick(rng, 8));
      const Formula f = random_formula(rng, names, 4);
      for (std::size_t bits = 0; bits < (std::size_t{1} << names.size()); ++bits) {
        BoolValuation bv;
        TriValuation tv;
        for (std::size_t k = 0; k < names.size(); ++k) {
          bv[names[k]] = ((bits >> k) & 1U) != 0;
          tv[names[k]] = to_tribool(bv[names[k]]);
        }
        ++rows;
        if (eval_three_valued(f, tv) != to_tribool(eval_classical(f, bv))) ++disagreements;
      }
    }
    return Outcome{disagreements == 0,
                   std::to_string(disagreements) + " disagreements over 1000 formulas, " + std::to_string(rows) +
                       " valuations"};
  });

  criterion(9, "SMV export", 5.0, [] {
    Outcome o;
    const auto tool = find_external_checker();
    for (const std::string name : {"crossing", "arm"}) {
      const auto m = model_case(name);
      const auto c = harden(compile_case(name).controller);
      const auto spec = spec_case(name);
      const auto smv = export_smv(m, c, spec, CheckMode::Assumption1);
      const bool native = check(build_product(m, c), spec, CheckMode::Assumption1).holds;
      const bool golden = smv == read_file(golden_path(name + ".smv"));
      const SmvModel parsed(smv);
      const auto interp = parsed.check();
      bool ok = golden && interp.deadlocks == 0 && interp.holds == native;
      o.detail += name + ": golden " + (golden ? "match" : "MISMATCH") + ", well-formed, interpreter " +
                  (interp.holds ? "holds" : "violated") + " over " + std::to_string(interp.reachable) + " states";
      if (tool) {
        const bool ext = external_verdict(*tool, smv, name);
        ok = ok && ext == native;
        o.detail += ", " + *tool + " " + (ext ? "holds" : "violated");
      }
      o.detail += "; ";
      o.ok = o.ok && ok;
    }
    if (!tool) o.detail += "no external SMV checker on PATH";
    return o;
  });

  std::printf("%s\n", failures == 0 ? "all criteria passed" : (std::to_string(failures) + " criteria failed").c_str());
  return failures == 0 ? 0 : 1;
}
