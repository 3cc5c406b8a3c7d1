#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "groundfsa/cli.hpp"
#include "support/fixtures.hpp"

using namespace groundfsa;
using namespace groundfsa::testing;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "groundfsa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("groundfsa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  /// Compiles a data case to a controller file and returns its path.
  std::string compiled(const std::string& name, bool hardened = false) {
    const auto path = tmp(name + (hardened ? "_hardened" : "") + ".json");
    std::vector<std::string> args{"compile", "--steps", data_path(name + "/steps.txt"), "--pddl",
                                  data_path(name + "/actions.txt"), "-o", path};
    if (fs::exists(data_path(name + "/synonyms.json"))) {
      args.push_back("--synonyms");
      args.push_back(data_path(name + "/synonyms.json"));
    }
    if (hardened) args.push_back("--harden");
    const auto r = invoke(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return path;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CompileMatchesLibraryOutput) {
  const auto path = compiled("crossing");
  EXPECT_EQ(read_file(path), dump_json(controller_to_json(compile_case("crossing").controller)));
  const auto dot = invoke({"compile", "--steps", data_path("crossing/steps.txt"), "--pddl",
                           data_path("crossing/actions.txt"), "--format", "dot"});
  EXPECT_EQ(dot.code, 0);
  EXPECT_TRUE(dot.out.starts_with("digraph"));
}

TEST_F(CliTest, CompileEmptyStepsFails) {
  write_file(tmp("empty.txt"), "");
  const auto r = invoke({"compile", "--steps", tmp("empty.txt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("MalformedNumbering"), std::string::npos) << r.err;
}

TEST_F(CliTest, HardenTwiceFails) {
  const auto plain = compiled("crossing");
  const auto once = invoke({"harden", "--controller", plain, "-o", tmp("h.json")});
  EXPECT_EQ(once.code, 0);
  EXPECT_EQ(isomorphism_mismatch(load_controller(tmp("h.json")), expected_crossing_hardened()), "");
  const auto twice = invoke({"harden", "--controller", tmp("h.json")});
  EXPECT_EQ(twice.code, 1);
  EXPECT_NE(twice.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, VerifyExitCodes) {
  const auto c = compiled("crossing");
  const auto holds = invoke({"verify", "--model", data_path("crossing/model.json"), "--controller", c, "--spec-file",
                             data_path("crossing/spec.ltl")});
  EXPECT_EQ(holds.code, 0) << holds.err;
  EXPECT_EQ(Json::parse(holds.out).at("holds"), true);
  EXPECT_NE(holds.err.find("hardening it first"), std::string::npos);

  write_file(tmp("mutant.json"), dump_json(controller_to_json(crossing_mutant())));
  const auto violated = invoke({"verify", "--model", data_path("crossing/model.json"), "--controller",
                                tmp("mutant.json"), "--spec", "G !(act:cross_road & !traffic_light_is_green)",
                                "--format", "table"});
  EXPECT_EQ(violated.code, 2);
  EXPECT_NE(violated.out.find("verdict: violated"), std::string::npos);
  EXPECT_NE(violated.out.find("counterexample:"), std::string::npos);
  EXPECT_EQ(violated.err, "");
}

TEST_F(CliTest, VerifyBadSpecAndUnknownAtom) {
  const auto c = compiled("crossing", true);
  const auto model = data_path("crossing/model.json");
  EXPECT_EQ(invoke({"verify", "--model", model, "--controller", c, "--spec", "G (a &"}).code, 1);
  const auto unbound = invoke({"verify", "--model", model, "--controller", c, "--spec", "G !car"});
  EXPECT_EQ(unbound.code, 1);
  EXPECT_NE(unbound.err.find("car"), std::string::npos);
}

TEST_F(CliTest, ExportSmvMatchesGoldenAndVerifyEmitsIt) {
  const auto c = compiled("arm", true);
  const auto r = invoke({"export-smv", "--model", data_path("arm/model.json"), "--controller", c, "--spec-file",
                         data_path("arm/spec.ltl")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, read_file(golden_path("arm.smv")));
  const auto v = invoke({"verify", "--model", data_path("arm/model.json"), "--controller", c, "--spec-file",
                         data_path("arm/spec.ltl"), "--emit-smv", tmp("arm.smv"), "-o", tmp("verdict.json")});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(read_file(tmp("arm.smv")), r.out);
  EXPECT_EQ(Json::parse(read_file(tmp("verdict.json"))).at("mode"), "assumption1");
}

TEST_F(CliTest, RunCrossingTrajectory) {
  const auto c = compiled("crossing", true);
  const auto r = invoke({"run", "--controller", c, "--frames", data_path("crossing/frames.jsonl"), "--t", "0.45",
                         "--f", "0.2", "--pt", "0.983", "--pf", "0.975"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("state_sequence"), Json({"q1", "q2", "q2", "q3", "q3", "q4"}));
  EXPECT_EQ(j.at("n_certain"), 5);
  EXPECT_NEAR(j.at("runtime_bound").get<double>(), std::pow(0.975, 5), 1e-12);
}

TEST_F(CliTest, CalibrateThenRunWithThresholdsFile) {
  const auto cal = invoke({"calibrate", "--records", data_path("calibration/synthetic_records.csv"), "-o",
                           tmp("th.json"), "--curve", tmp("curve.csv")});
  ASSERT_EQ(cal.code, 0) << cal.err;
  const auto th = Json::parse(read_file(tmp("th.json")));
  EXPECT_NEAR(th.at("t").get<double>(), 0.45, 1e-12);
  EXPECT_NEAR(th.at("f").get<double>(), 0.2, 1e-12);
  EXPECT_TRUE(read_file(tmp("curve.csv")).starts_with("threshold,acc_true"));

  const auto r = invoke({"run", "--controller", compiled("crossing", true), "--frames",
                         data_path("crossing/frames.jsonl"), "--thresholds", tmp("th.json"), "--format", "table"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("states: q1 -> q2 -> q2 -> q3 -> q3 -> q4"), std::string::npos);
  EXPECT_NE(r.out.find("runtime_bound: 0.88"), std::string::npos);

  const auto infeasible = invoke({"calibrate", "--records", data_path("calibration/synthetic_records.csv"),
                                  "--target-pt", "1", "--target-pf", "1", "--grid", "0.1,0.2"});
  EXPECT_EQ(infeasible.code, 1);
  EXPECT_NE(infeasible.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"compile"}).code, 1);
  EXPECT_EQ(invoke({"compile", "--steps", tmp("missing.txt")}).code, 1);
  EXPECT_EQ(invoke({"export-dot"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);

  const auto c = compiled("crossing", true);
  const auto model = data_path("crossing/model.json");
  const auto spec = data_path("crossing/spec.ltl");
  // Spec must be given exactly once.
  EXPECT_EQ(invoke({"verify", "--model", model, "--controller", c}).code, 1);
  EXPECT_EQ(invoke({"verify", "--model", model, "--controller", c, "--spec", "G true", "--spec-file", spec}).code, 1);
  EXPECT_EQ(invoke({"verify", "--model", model, "--controller", c, "--spec-file", spec, "--mode", "fuzzy"}).code, 1);

  const auto frames = data_path("crossing/frames.jsonl");
  EXPECT_EQ(invoke({"run", "--controller", c, "--frames", frames}).code, 1);
  EXPECT_EQ(invoke({"run", "--controller", c, "--frames", frames, "--t", "0.45"}).code, 1);
  write_file(tmp("th.json"), R"({"t": 0.45, "f": 0.2})");
  EXPECT_EQ(invoke({"run", "--controller", c, "--frames", frames, "--thresholds", tmp("th.json"), "--t", "0.5", "--f",
                    "0.1"})
                .code,
            1);
  EXPECT_EQ(invoke({"run", "--controller", c, "--frames", frames, "--t", "0.2", "--f", "0.45"}).code, 1);
}

TEST_F(CliTest, OutputIsByteStable) {
  const auto c = compiled("crossing", true);
  std::vector<std::string> args{"product", "--model", data_path("crossing/model.json"), "--controller", c};
  const auto a = invoke(args);
  const auto b = invoke(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  args.push_back("--format");
  args.push_back("dot");
  EXPECT_EQ(invoke(args).out, invoke(args).out);
  EXPECT_EQ(invoke({"export-dot", "--model", data_path("crossing/model.json")}).code, 0);
}
