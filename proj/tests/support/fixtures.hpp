#pragma once

#include <fstream>
#include <string>

#include "groundfsa/controller_ops.hpp"
#include "groundfsa/io.hpp"
#include "groundfsa/runtime/perception.hpp"
#include "groundfsa/text/compiler.hpp"
#include "groundfsa/verify/spec.hpp"
#include "support/oracles.hpp"

namespace groundfsa::testing {

inline std::string data_path(const std::string& rel) { return std::string(GROUNDFSA_DATA_DIR) + "/" + rel; }
inline std::string golden_path(const std::string& rel) { return std::string(GROUNDFSA_GOLDEN_DIR) + "/" + rel; }

inline text::CompileResult compile_case(const std::string& name) {
  text::CompileOptions options;
  const std::string syn = data_path(name + "/synonyms.json");
  if (std::ifstream(syn).good()) options.synonyms = text::SynonymTable::from_json(Json::parse(read_file(syn)));
  return text::compile_transcripts(read_file(data_path(name + "/steps.txt")),
                                   read_file(data_path(name + "/actions.txt")), options);
}

inline EnvironmentModel model_case(const std::string& name) { return load_model(data_path(name + "/model.json")); }

inline Spec spec_case(const std::string& name) { return parse_spec(read_file(data_path(name + "/spec.ltl"))); }

inline std::vector<ObservationFrame> frames_case(const std::string& name) {
  return read_frames_jsonl(read_file(data_path(name + "/frames.jsonl")));
}

/// Expected unhardened crossing controller.
inline ExpectedController expected_crossing() {
  return {{"q1", "q2", "q3", "q4"},
          "q1",
          {{"q1", "at_pedestrian_crossing", "noop", "q1"},
           {"q1", "!at_pedestrian_crossing", "approach_pedestrian_crossing", "q2"},
           {"q2", "!traffic_light_is_green", "noop", "q2"},
           {"q2", "traffic_light_is_green", "noop", "q3"},
           {"q3", "!traffic_light_is_green | !at_pedestrian_crossing", "noop", "q3"},
           {"q3", "traffic_light_is_green & at_pedestrian_crossing", "cross_road", "q4"},
           {"q4", "true", "noop", "q4"}}};
}

inline ExpectedController expected_crossing_hardened() {
  return {{"q1", "q2", "q3", "q4"},
          "q1",
          {{"q1", "at_pedestrian_crossing | UNC", "noop", "q1"},
           {"q1", "!at_pedestrian_crossing", "approach_pedestrian_crossing", "q2"},
           {"q2", "UNC | !traffic_light_is_green", "noop", "q2"},
           {"q2", "traffic_light_is_green", "noop", "q3"},
           {"q3", "UNC | !traffic_light_is_green | !at_pedestrian_crossing", "noop", "q3"},
           {"q3", "traffic_light_is_green & at_pedestrian_crossing", "cross_road", "q4"},
           {"q4", "true", "noop", "q4"}}};
}

/// Expected unhardened arm controller.
inline ExpectedController expected_arm() {
  return {{"q1", "q2", "q3", "q4"},
          "q1",
          {{"q1", "!block_on_table", "noop", "q1"},
           {"q1", "block_on_table", "target_one_block", "q2"},
           {"q2", "!block_targeted", "noop", "q2"},
           {"q2", "block_targeted", "classify_color", "q3"},
           {"q3", "!block_red & !block_yellow", "noop", "q3"},
           {"q3", "block_red", "place_block", "q4"},
           {"q3", "block_yellow", "leave_block", "q4"},
           {"q4", "true", "noop", "q1"}}};
}

/// Copy of `c` with the guard of transition `index` replaced.
inline Controller with_guard(const Controller& c, std::size_t index, Formula guard) {
  std::vector<ControllerTransition> ts(c.transitions().begin(), c.transitions().end());
  ts[index].guard = std::move(guard);
  return Controller(std::vector<Proposition>(c.propositions().begin(), c.propositions().end()),
                    std::vector<std::string>(c.actions().begin(), c.actions().end()),
                    std::vector<std::string>(c.states().begin(), c.states().end()), c.init(), ts);
}

/// Crossing controller whose cross_road guard is weakened to `true`, hardened.
inline Controller crossing_mutant() {
  const auto plain = compile_case("crossing").controller;
  std::size_t emit = 0;
  for (std::size_t i = 0; i < plain.transitions().size(); ++i) {
    if (plain.transitions()[i].action == "cross_road") emit = i;
  }
  return harden(with_guard(plain, emit, Formula::constant(true)));
}

}  // namespace groundfsa::testing
