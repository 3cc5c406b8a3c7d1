#pragma once

#include <string>
#include <vector>

#include "groundfsa/calibration/monte_carlo.hpp"

namespace groundfsa::testing {

struct SyntheticCase {
  std::string name;
  PiecewiseScoreModel model;
  Thresholds thresholds;
  std::uint64_t seed;
};

/// The battery of synthetic detectors used for the single-evaluation bound.
inline std::vector<SyntheticCase> synthetic_battery() {
  std::vector<SyntheticCase> out;
  auto add = [&](std::string name, std::vector<ScoreSegment> segs, double t, double f, std::uint64_t seed) {
    out.push_back({std::move(name), PiecewiseScoreModel(std::move(segs)), Thresholds{t, f, "synthetic"}, seed});
  };
  // Accuracies 0.99 above t and 0.96 below f.
  add("three-band 0.99/0.96", {{0.0, 0.2, 0.4, 0.04}, {0.2, 0.45, 0.2, 0.5}, {0.45, 1.0, 0.4, 0.99}}, 0.45, 0.2, 11);
  add("three-band 0.983/0.975", {{0.0, 0.2, 0.45, 0.025}, {0.2, 0.45, 0.1, 0.4}, {0.45, 1.0, 0.45, 0.983}}, 0.45, 0.2,
      12);
  add("graded",
      {{0.0, 0.1, 0.2, 0.01},
       {0.1, 0.2, 0.15, 0.05},
       {0.2, 0.3, 0.1, 0.3},
       {0.3, 0.45, 0.1, 0.6},
       {0.45, 0.6, 0.2, 0.95},
       {0.6, 1.0, 0.25, 0.995}},
      0.45, 0.2, 13);
  add("mostly true", {{0.0, 0.2, 0.05, 0.1}, {0.2, 0.45, 0.1, 0.7}, {0.45, 1.0, 0.85, 0.97}}, 0.45, 0.2, 14);
  add("mostly false", {{0.0, 0.2, 0.85, 0.02}, {0.2, 0.45, 0.1, 0.3}, {0.45, 1.0, 0.05, 0.9}}, 0.45, 0.2, 15);
  add("weak detector", {{0.0, 0.3, 0.4, 0.3}, {0.3, 0.7, 0.2, 0.5}, {0.7, 1.0, 0.4, 0.8}}, 0.45, 0.2, 16);
  add("wide band", {{0.0, 0.1, 0.3, 0.01}, {0.1, 0.6, 0.4, 0.5}, {0.6, 1.0, 0.3, 0.999}}, 0.6, 0.1, 17);
  add("narrow band", {{0.0, 0.45, 0.5, 0.1}, {0.45, 1.0, 0.5, 0.92}}, 0.5, 0.45, 18);
  add("near-threshold", {{0.0, 0.3, 0.5, 0.05}, {0.3, 0.31, 0.01, 0.5}, {0.31, 1.0, 0.49, 0.96}}, 0.31, 0.3, 19);
  std::vector<ScoreSegment> ramp;
  for (int i = 0; i < 10; ++i) ramp.push_back({i / 10.0, (i + 1) / 10.0, 1.0, (i + 0.5) / 10.0});
  add("linear ramp", ramp, 0.45, 0.2, 20);
  return out;
}

}  // namespace groundfsa::testing
