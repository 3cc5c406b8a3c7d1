#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "groundfsa/error.hpp"
#include "groundfsa/tribool.hpp"
#include "json.hpp"

namespace groundfsa {

/// True/false cutoffs of the score classifier; `source` names the data that
/// produced them.
struct Thresholds {
  double t = 0.5;
  double f = 0.5;
  std::string source;

  void validate() const {
    if (!(f >= 0.0 && f < t && t <= 1.0)) {
      throw std::invalid_argument("thresholds must satisfy 0 <= f < t <= 1 (got t=" + std::to_string(t) +
                                  ", f=" + std::to_string(f) + ")");
    }
  }
};

/// Scores at or above t are True, at or below f are False, anything in
/// between is Unknown.
inline TriBool classify_score(double score, const Thresholds& th) {
  if (score >= th.t) return TriBool::True;
  if (score <= th.f) return TriBool::False;
  return TriBool::Unknown;
}

struct ObservationFrame {
  std::string frame_id;
  /// Recorded confidence per proposition.
  std::map<std::string, double> scores;
  /// Opaque reference (for example an image path) a remote backend resolves.
  std::optional<std::string> frame_ref;
};

/// Source of confidence scores in [0, 1].
class PerceptionBackend {
 public:
  virtual ~PerceptionBackend() = default;

  virtual double score(const std::string& proposition, const ObservationFrame& frame) = 0;

  /// Scores for several propositions at once; backends that batch requests
  /// override this.
  virtual std::map<std::string, double> score_all(const std::vector<std::string>& propositions,
                                                  const ObservationFrame& frame) {
    std::map<std::string, double> out;
    for (const auto& p : propositions) out[p] = score(p, frame);
    return out;
  }
};

/// Reads scores stored in the frame. A proposition without a recorded score
/// was not detected and scores 0.
class RecordedScoreBackend final : public PerceptionBackend {
 public:
  double score(const std::string& proposition, const ObservationFrame& frame) override {
    auto it = frame.scores.find(proposition);
    return it == frame.scores.end() ? 0.0 : it->second;
  }
};

namespace detail {

inline double checked_score(double s, const ObservationFrame& frame, const std::string& prop) {
  if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
    throw BackendFailure(frame.frame_id, "score " + std::to_string(s) + " for '" + prop + "' is outside [0, 1]");
  }
  return s;
}

}  // namespace detail

/// Classifies one proposition on one frame; returns the value and the score.
inline std::pair<TriBool, double> eval_prop(const std::string& proposition, const ObservationFrame& frame,
                                            PerceptionBackend& backend, const Thresholds& th) {
  th.validate();
  double s = 0.0;
  try {
    s = backend.score(proposition, frame);
  } catch (const BackendFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendFailure(frame.frame_id, e.what());
  }
  s = detail::checked_score(s, frame, proposition);
  return {classify_score(s, th), s};
}

inline ObservationFrame frame_from_json(const nlohmann::json& j) {
  ObservationFrame f;
  f.frame_id = j.at("frame_id").get<std::string>();
  if (j.contains("scores")) {
    for (auto it = j.at("scores").begin(); it != j.at("scores").end(); ++it) {
      const double s = it.value().get<double>();
      if (!(s >= 0.0 && s <= 1.0)) {
        throw InvalidDocument("frame '" + f.frame_id + "': score for '" + it.key() + "' is outside [0, 1]");
      }
      f.scores[it.key()] = s;
    }
  }
  if (j.contains("frame_ref")) f.frame_ref = j.at("frame_ref").get<std::string>();
  return f;
}

inline nlohmann::json frame_to_json(const ObservationFrame& f) {
  nlohmann::json j{{"frame_id", f.frame_id}, {"scores", f.scores}};
  if (f.frame_ref) j["frame_ref"] = *f.frame_ref;
  return j;
}

/// One JSON object per nonblank line.
inline std::vector<ObservationFrame> read_frames_jsonl(const std::string& text) {
  std::vector<ObservationFrame> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(frame_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidDocument("frames line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace groundfsa
