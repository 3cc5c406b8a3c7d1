#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "groundfsa/calibration/records.hpp"
#include "groundfsa/error.hpp"
#include "groundfsa/runtime/perception.hpp"

namespace groundfsa {

enum class Side { True, False };

/// Accuracy of one side at one threshold; `accuracy` is empty when no record
/// qualifies.
struct SideAccuracy {
  std::optional<double> accuracy;
  std::size_t count = 0;

  friend bool operator==(const SideAccuracy&, const SideAccuracy&) = default;
};

/// True side: among records scoring at least `threshold`, the fraction that
/// are true. False side: among records scoring at most `threshold`, the
/// fraction that are false.
inline SideAccuracy accuracy_at(std::span<const CalibrationRecord> records, double threshold, Side side) {
  std::size_t count = 0;
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (side == Side::True ? r.score >= threshold : r.score <= threshold) {
      ++count;
      if (r.truth == (side == Side::True)) ++correct;
    }
  }
  if (count == 0) return {};
  return {static_cast<double>(correct) / static_cast<double>(count), count};
}

struct AccuracyCurve {
  std::vector<double> grid;
  std::vector<std::optional<double>> acc_true;
  std::vector<std::optional<double>> acc_false;
  std::vector<std::size_t> count_true;
  std::vector<std::size_t> count_false;
};

/// Thresholds 0.05, 0.10, ..., 0.65.
inline std::vector<double> default_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 13; ++k) g.push_back(k / 20.0);
  return g;
}

inline void validate_grid(std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw std::invalid_argument("grid values must lie in [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
}

/// Both accuracy curves over `grid`, from sorted score lists and binary
/// search rather than one pass per grid point.
inline AccuracyCurve sweep(std::span<const CalibrationRecord> records, std::span<const double> grid) {
  validate_grid(grid);
  std::vector<double> pos;
  std::vector<double> neg;
  for (const auto& r : records) (r.truth ? pos : neg).push_back(r.score);
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  auto at_least = [](const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(v.end() - std::lower_bound(v.begin(), v.end(), x));
  };
  auto at_most = [](const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
  };

  AccuracyCurve c;
  c.grid.assign(grid.begin(), grid.end());
  for (double g : grid) {
    const std::size_t tp = at_least(pos, g);
    const std::size_t fp = at_least(neg, g);
    const std::size_t tn = at_most(neg, g);
    const std::size_t fn = at_most(pos, g);
    c.count_true.push_back(tp + fp);
    c.acc_true.push_back(tp + fp == 0 ? std::nullopt
                                      : std::optional(static_cast<double>(tp) / static_cast<double>(tp + fp)));
    c.count_false.push_back(tn + fn);
    c.acc_false.push_back(tn + fn == 0 ? std::nullopt
                                       : std::optional(static_cast<double>(tn) / static_cast<double>(tn + fn)));
  }
  return c;
}

struct ThresholdSelection {
  Thresholds thresholds;
  double p_t = 0.0;
  double p_f = 0.0;
};

/// Smallest grid t whose true-side accuracy meets `target_t` for which some
/// grid f < t meets `target_f` on the false side; f is the largest such.
/// Undefined accuracies never qualify.
inline ThresholdSelection select_thresholds(const AccuracyCurve& curve, double target_t, double target_f,
                                            std::string source = {}) {
  if (curve.grid.empty()) throw std::invalid_argument("empty accuracy curve");
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    if (!curve.acc_true[i] || *curve.acc_true[i] < target_t) continue;
    for (std::size_t j = i; j-- > 0;) {
      if (curve.acc_false[j] && *curve.acc_false[j] >= target_f) {
        return ThresholdSelection{Thresholds{curve.grid[i], curve.grid[j], std::move(source)}, *curve.acc_true[i],
                                  *curve.acc_false[j]};
      }
    }
  }
  throw Infeasible("no grid pair f < t reaches accuracy targets (" + std::to_string(target_t) + ", " +
                   std::to_string(target_f) + ")");
}

/// `threshold,acc_true,count_true,acc_false,count_false`; undefined
/// accuracies are empty cells.
inline std::string curve_to_csv(const AccuracyCurve& c) {
  std::ostringstream os;
  os.precision(10);
  os << "threshold,acc_true,count_true,acc_false,count_false\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    os << c.grid[i] << ",";
    if (c.acc_true[i]) os << *c.acc_true[i];
    os << "," << c.count_true[i] << ",";
    if (c.acc_false[i]) os << *c.acc_false[i];
    os << "," << c.count_false[i] << "\n";
  }
  return os.str();
}

}  // namespace groundfsa
