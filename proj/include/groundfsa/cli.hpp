#pragma once

#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "groundfsa/calibration/curve.hpp"
#include "groundfsa/calibration/records.hpp"
#include "groundfsa/controller_ops.hpp"
#include "groundfsa/io.hpp"
#include "groundfsa/product.hpp"
#include "groundfsa/runtime/executor.hpp"
#include "groundfsa/runtime/perception.hpp"
#include "groundfsa/runtime/remote_backend.hpp"
#include "groundfsa/text/compiler.hpp"
#include "groundfsa/verify/checker.hpp"
#include "groundfsa/verify/smv.hpp"

namespace groundfsa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolated = 2;

/// Parsed command line of one invocation.
struct PipelineConfig {
  std::string steps_path;
  std::string pddl_path;
  std::string synonyms_path;
  std::string model_path;
  std::string controller_path;
  std::string spec_text;
  std::string spec_path;
  std::string mode = "assumption1";
  std::string smv_path;
  std::string records_path;
  std::string curve_path;
  std::string thresholds_path;
  std::string frames_path;
  std::string backend_url;
  std::string output_path;
  std::string format = "json";
  std::vector<double> grid;
  double target_pt = 0.98;
  double target_pf = 0.97;
  std::optional<double> t;
  std::optional<double> f;
  std::optional<double> pt;
  std::optional<double> pf;
  bool harden_first = false;
};

namespace detail {

inline void emit(const PipelineConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    out << text;
  } else {
    write_file(cfg.output_path, text);
  }
}

/// Hardens `c` unless it already carries UNC loops.
inline Controller hardened(const Controller& c, std::ostream& err) {
  if (controller_mentions_unc(c)) return c;
  err << "note: controller has no UNC self-loops; hardening it first\n";
  return harden(c);
}

inline Spec load_spec(const PipelineConfig& cfg) {
  if (!cfg.spec_path.empty()) return parse_spec(read_file(cfg.spec_path));
  return parse_spec(cfg.spec_text);
}

inline std::string verdict_table(const ProductAutomaton& prod, const Spec& spec, CheckMode mode, const Verdict& v) {
  std::ostringstream os;
  os << "spec: " << spec.to_string() << "\nmode: " << to_string(mode) << "\nverdict: "
     << (v.holds ? "holds" : "violated") << "\nstates explored: " << v.states_explored << "\n";
  if (v.counterexample) {
    os << "counterexample:\n";
    os << std::left << std::setw(6) << "step" << std::setw(16) << "state" << std::setw(30) << "action"
       << "label\n";
    for (std::size_t i = 0; i < v.counterexample->size(); ++i) {
      const auto& s = (*v.counterexample)[i];
      std::string label;
      for (const auto& a : s.label) label += (label.empty() ? "" : " ") + a;
      std::string action = s.controller_transition ? s.action : "(none)";
      if (s.uncertain) action += " [UNC]";
      os << std::setw(6) << i << std::setw(16) << prod.state_name(s.product_state) << std::setw(30) << action << "{"
         << label << "}\n";
    }
  }
  return os.str();
}

inline Json verdict_json(const ProductAutomaton& prod, const Spec& spec, CheckMode mode, const Verdict& v) {
  Json j{{"spec", spec.to_string()},
         {"mode", std::string(to_string(mode))},
         {"holds", v.holds},
         {"states_explored", v.states_explored}};
  if (v.counterexample) {
    Json steps = Json::array();
    for (const auto& s : *v.counterexample) {
      Json step{{"state", prod.state_name(s.product_state)},
                {"model_state", prod.model().state_name(s.model_state)},
                {"controller_state", prod.controller().state_name(s.controller_state)},
                {"uncertain", s.uncertain},
                {"label", std::vector<std::string>(s.label.begin(), s.label.end())}};
      if (s.controller_transition) {
        step["transition"] = *s.controller_transition;
        step["action"] = s.action;
      }
      steps.push_back(std::move(step));
    }
    j["counterexample"] = std::move(steps);
  }
  return j;
}

inline std::string curve_table(const AccuracyCurve& c) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "threshold" << std::setw(12) << "acc_true" << std::setw(10) << "n_true"
     << std::setw(12) << "acc_false"
     << "n_false\n";
  os << std::fixed;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    auto cell = [](const std::optional<double>& v) {
      if (!v) return std::string("undefined");
      std::ostringstream s;
      s << std::fixed << std::setprecision(4) << *v;
      return s.str();
    };
    os << std::setw(10) << std::setprecision(2) << c.grid[i] << std::setw(12) << cell(c.acc_true[i]) << std::setw(10)
       << c.count_true[i] << std::setw(12) << cell(c.acc_false[i]) << c.count_false[i] << "\n";
  }
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_compile(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  text::CompileOptions options;
  if (!cfg.synonyms_path.empty()) {
    options.synonyms = text::SynonymTable::from_json(Json::parse(read_file(cfg.synonyms_path)));
  }
  if (!cfg.model_path.empty()) {
    const auto m = load_model(cfg.model_path);
    options.proposition_universe.assign(m.propositions().begin(), m.propositions().end());
  }
  const auto pddl = cfg.pddl_path.empty() ? std::string() : read_file(cfg.pddl_path);
  auto result = text::compile_transcripts(read_file(cfg.steps_path), pddl, options);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  Controller c = cfg.harden_first ? harden(result.controller) : result.controller;
  detail::emit(cfg, cfg.format == "dot" ? controller_to_dot(c) : dump_json(controller_to_json(c)), out);
  return kExitOk;
}

inline int cmd_harden(const PipelineConfig& cfg, std::ostream& out, std::ostream&) {
  detail::emit(cfg, dump_json(controller_to_json(harden(load_controller(cfg.controller_path)))), out);
  return kExitOk;
}

inline int cmd_product(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  Controller c = load_controller(cfg.controller_path);
  if (cfg.harden_first) c = detail::hardened(c, err);
  const auto prod = build_product(load_model(cfg.model_path), c);
  detail::emit(cfg, cfg.format == "dot" ? product_to_dot(prod) : dump_json(product_to_json(prod)), out);
  return kExitOk;
}

inline int cmd_verify(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto mode = parse_check_mode(cfg.mode);
  const auto spec = detail::load_spec(cfg);
  const auto m = load_model(cfg.model_path);
  Controller c = load_controller(cfg.controller_path);
  if (mode == CheckMode::Assumption1 || cfg.harden_first) c = detail::hardened(c, err);
  const auto prod = build_product(m, c);
  const auto v = check(prod, spec, mode);
  if (!cfg.smv_path.empty()) write_file(cfg.smv_path, export_smv(m, c, spec, mode));
  detail::emit(cfg,
               cfg.format == "table" ? detail::verdict_table(prod, spec, mode, v)
                                     : dump_json(detail::verdict_json(prod, spec, mode, v)),
               out);
  return v.holds ? kExitOk : kExitViolated;
}

inline int cmd_export_smv(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto mode = parse_check_mode(cfg.mode);
  Controller c = load_controller(cfg.controller_path);
  if (mode == CheckMode::Assumption1 || cfg.harden_first) c = detail::hardened(c, err);
  detail::emit(cfg, export_smv(load_model(cfg.model_path), c, detail::load_spec(cfg), mode), out);
  return kExitOk;
}

inline int cmd_calibrate(const PipelineConfig& cfg, std::ostream& out, std::ostream&) {
  const auto records = read_records(read_file(cfg.records_path));
  if (records.empty()) throw InvalidDocument("no calibration records in '" + cfg.records_path + "'");
  const auto grid = cfg.grid.empty() ? default_grid() : cfg.grid;
  const auto curve = sweep(records, grid);
  if (!cfg.curve_path.empty()) write_file(cfg.curve_path, curve_to_csv(curve));
  const auto sel = select_thresholds(curve, cfg.target_pt, cfg.target_pf, cfg.records_path);
  if (cfg.format == "table") {
    std::ostringstream os;
    os << detail::curve_table(curve) << "selected: t=" << sel.thresholds.t << " f=" << sel.thresholds.f
       << " p_t=" << sel.p_t << " p_f=" << sel.p_f << "\n";
    detail::emit(cfg, os.str(), out);
  } else {
    const Json j{{"t", sel.thresholds.t},
                 {"f", sel.thresholds.f},
                 {"p_t", sel.p_t},
                 {"p_f", sel.p_f},
                 {"source", sel.thresholds.source},
                 {"records", records.size()},
                 {"targets", {{"p_t", cfg.target_pt}, {"p_f", cfg.target_pf}}}};
    detail::emit(cfg, dump_json(j), out);
  }
  return kExitOk;
}

inline int cmd_run(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  Thresholds th;
  std::optional<double> pt = cfg.pt;
  std::optional<double> pf = cfg.pf;
  if (!cfg.thresholds_path.empty()) {
    const auto j = Json::parse(read_file(cfg.thresholds_path));
    th = Thresholds{j.at("t").get<double>(), j.at("f").get<double>(), j.value("source", cfg.thresholds_path)};
    if (!pt && j.contains("p_t")) pt = j.at("p_t").get<double>();
    if (!pf && j.contains("p_f")) pf = j.at("p_f").get<double>();
  } else {
    th = Thresholds{*cfg.t, *cfg.f, "command line"};
  }
  th.validate();
  const Controller c = detail::hardened(load_controller(cfg.controller_path), err);
  const auto frames = read_frames_jsonl(read_file(cfg.frames_path));
  const auto url = resolve_backend_url(cfg.backend_url.empty() ? std::nullopt : std::optional(cfg.backend_url));
  std::unique_ptr<PerceptionBackend> backend;
  if (url) {
    backend = std::make_unique<RemoteBackend>(*url);
  } else {
    backend = std::make_unique<RecordedScoreBackend>();
  }
  const auto traj = run(c, frames, *backend, th);
  std::optional<std::pair<double, double>> acc;
  if (pt && pf) acc = std::pair{*pt, *pf};
  detail::emit(cfg, cfg.format == "table" ? trajectory_table(traj, acc) : dump_json(trajectory_to_json(traj, acc)),
               out);
  return kExitOk;
}

inline int cmd_export_dot(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.model_path.empty() && !cfg.controller_path.empty()) {
    Controller c = load_controller(cfg.controller_path);
    if (cfg.harden_first) c = detail::hardened(c, err);
    detail::emit(cfg, product_to_dot(build_product(load_model(cfg.model_path), c)), out);
  } else if (!cfg.controller_path.empty()) {
    Controller c = load_controller(cfg.controller_path);
    if (cfg.harden_first) c = detail::hardened(c, err);
    detail::emit(cfg, controller_to_dot(c), out);
  } else {
    detail::emit(cfg, model_to_dot(load_model(cfg.model_path)), out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

/// Parses `argv`, runs one subcommand and returns the process exit code:
/// 0 success (or the spec holds), 2 spec violated, 1 usage or data error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  PipelineConfig cfg;
  CLI::App app{"Compile, verify and execute automaton controllers built from task descriptions", "groundfsa"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", cfg.output_path, "Output file (default stdout)"); };
  auto add_format = [&](CLI::App* sub, std::vector<std::string> choices) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember(choices))->capture_default_str();
  };
  auto add_spec = [&](CLI::App* sub) {
    auto* text = sub->add_option("--spec", cfg.spec_text, "Invariant, e.g. \"G !(act:a & !p)\"");
    auto* file = sub->add_option("--spec-file", cfg.spec_path, "File holding the invariant")->check(CLI::ExistingFile);
    text->excludes(file);
    file->excludes(text);
    sub->callback([&, text, file] {
      if (text->count() + file->count() == 0) throw CLI::RequiredError("--spec or --spec-file");
    });
  };

  auto* compile = app.add_subcommand("compile", "Build a controller from step and PDDL transcripts");
  compile->add_option("--steps", cfg.steps_path, "Steps transcript")->required()->check(CLI::ExistingFile);
  compile->add_option("--pddl", cfg.pddl_path, "PDDL action transcripts")->check(CLI::ExistingFile);
  compile->add_option("--synonyms", cfg.synonyms_path, "Phrase-to-identifier JSON map")->check(CLI::ExistingFile);
  compile->add_option("--model", cfg.model_path, "Model whose propositions resolve condition phrases")
      ->check(CLI::ExistingFile);
  compile->add_flag("--harden", cfg.harden_first, "Harden the compiled controller");
  add_output(compile);
  add_format(compile, {"json", "dot"});

  auto* harden_cmd = app.add_subcommand("harden", "Add UNC self-loops to a controller");
  harden_cmd->add_option("--controller", cfg.controller_path, "Controller JSON")->required()->check(CLI::ExistingFile);
  add_output(harden_cmd);

  auto* product = app.add_subcommand("product", "Compose a model with a controller");
  product->add_option("--model", cfg.model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  product->add_option("--controller", cfg.controller_path, "Controller JSON")->required()->check(CLI::ExistingFile);
  product->add_flag("--harden", cfg.harden_first, "Harden the controller first");
  add_output(product);
  add_format(product, {"json", "dot"});

  auto* verify = app.add_subcommand("verify", "Check an invariant on the product");
  verify->add_option("--model", cfg.model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--controller", cfg.controller_path, "Controller JSON")->required()->check(CLI::ExistingFile);
  add_spec(verify);
  verify->add_option("--mode", cfg.mode, "exact or assumption1")
      ->check(CLI::IsMember({"exact", "assumption1"}))
      ->capture_default_str();
  verify->add_option("--emit-smv", cfg.smv_path, "Also write the SMV model here");
  verify->add_flag("--harden", cfg.harden_first, "Harden the controller in exact mode too");
  add_output(verify);
  add_format(verify, {"json", "table"});

  auto* smv = app.add_subcommand("export-smv", "Write the product and invariant as an SMV model");
  smv->add_option("--model", cfg.model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  smv->add_option("--controller", cfg.controller_path, "Controller JSON")->required()->check(CLI::ExistingFile);
  add_spec(smv);
  smv->add_option("--mode", cfg.mode, "exact or assumption1")
      ->check(CLI::IsMember({"exact", "assumption1"}))
      ->capture_default_str();
  smv->add_flag("--harden", cfg.harden_first, "Harden the controller in exact mode too");
  add_output(smv);

  auto* calibrate = app.add_subcommand("calibrate", "Choose thresholds from labelled scores");
  calibrate->add_option("--records", cfg.records_path, "CSV or JSON-lines records")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--target-pt", cfg.target_pt, "Required true-side accuracy")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  calibrate->add_option("--target-pf", cfg.target_pf, "Required false-side accuracy")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  calibrate->add_option("--grid", cfg.grid, "Threshold grid (default 0.05..0.65 step 0.05)")->delimiter(',');
  calibrate->add_option("--curve", cfg.curve_path, "Write the accuracy curve as CSV");
  add_output(calibrate);
  add_format(calibrate, {"json", "table"});

  auto* run_cmd = app.add_subcommand("run", "Execute a controller on recorded or remote observations");
  run_cmd->add_option("--controller", cfg.controller_path, "Controller JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--frames", cfg.frames_path, "Frames as JSON lines")->required()->check(CLI::ExistingFile);
  auto* t_opt = run_cmd->add_option("--t", cfg.t, "True threshold")->check(CLI::Range(0.0, 1.0));
  auto* f_opt = run_cmd->add_option("--f", cfg.f, "False threshold")->check(CLI::Range(0.0, 1.0));
  auto* th_opt = run_cmd->add_option("--thresholds", cfg.thresholds_path, "Thresholds JSON from calibrate")
                     ->check(CLI::ExistingFile);
  t_opt->needs(f_opt);
  f_opt->needs(t_opt);
  th_opt->excludes(t_opt);
  th_opt->excludes(f_opt);
  run_cmd->add_option("--pt", cfg.pt, "True-side accuracy for the runtime bound")->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--pf", cfg.pf, "False-side accuracy for the runtime bound")->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--backend-url", cfg.backend_url,
                      std::string("Remote perception service (") + kBackendUrlEnv + " takes precedence)");
  run_cmd->callback([&, th_opt, t_opt] {
    if (th_opt->count() == 0 && t_opt->count() == 0) throw CLI::RequiredError("--t/--f or --thresholds");
  });
  add_output(run_cmd);
  add_format(run_cmd, {"json", "table"});

  auto* dot = app.add_subcommand("export-dot", "Render a controller, model or their product as Graphviz");
  auto* dot_c = dot->add_option("--controller", cfg.controller_path, "Controller JSON")->check(CLI::ExistingFile);
  auto* dot_m = dot->add_option("--model", cfg.model_path, "Model JSON")->check(CLI::ExistingFile);
  dot->add_flag("--harden", cfg.harden_first, "Harden the controller first");
  dot->callback([dot_c, dot_m] {
    if (dot_c->count() + dot_m->count() == 0) throw CLI::RequiredError("--controller or --model");
  });
  add_output(dot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (compile->parsed()) return cmd_compile(cfg, out, err);
    if (harden_cmd->parsed()) return cmd_harden(cfg, out, err);
    if (product->parsed()) return cmd_product(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (smv->parsed()) return cmd_export_smv(cfg, out, err);
    if (calibrate->parsed()) return cmd_calibrate(cfg, out, err);
    if (run_cmd->parsed()) return cmd_run(cfg, out, err);
    if (dot->parsed()) return cmd_export_dot(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace groundfsa::cli
