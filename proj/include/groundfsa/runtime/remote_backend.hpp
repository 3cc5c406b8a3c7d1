#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groundfsa/error.hpp"
#include "groundfsa/runtime/perception.hpp"
#include "httplib.h"
#include "json.hpp"

namespace groundfsa {

/// Environment variable naming the remote perception service.
inline constexpr const char* kBackendUrlEnv = "FSA_GROUND_BACKEND_URL";

/// The service URL to use: the environment variable when set and nonempty,
/// otherwise `configured`.
inline std::optional<std::string> resolve_backend_url(const std::optional<std::string>& configured) {
  if (const char* env = std::getenv(kBackendUrlEnv); env != nullptr && *env != '\0') return std::string(env);
  return configured;
}

/// Scores frames through an HTTP service.
///
/// Request:  POST <url> `{"frame_ref": "...", "propositions": ["p", ...]}`
/// Response: `{"scores": {"p": 0.7, ...}}`; propositions absent from the
/// response score 0.
class RemoteBackend final : public PerceptionBackend {
 public:
  explicit RemoteBackend(const std::string& url, int timeout_seconds = 10) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("backend URL needs a scheme: '" + url + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    timeout_ = timeout_seconds;
  }

  double score(const std::string& proposition, const ObservationFrame& frame) override {
    return score_all({proposition}, frame).at(proposition);
  }

  std::map<std::string, double> score_all(const std::vector<std::string>& propositions,
                                          const ObservationFrame& frame) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    const nlohmann::json body{{"frame_ref", frame.frame_ref.value_or(frame.frame_id)},
                              {"propositions", propositions}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) throw BackendFailure(frame.frame_id, "request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw BackendFailure(frame.frame_id, "HTTP status " + std::to_string(res->status));
    std::map<std::string, double> out;
    try {
      const auto j = nlohmann::json::parse(res->body);
      const auto& scores = j.at("scores");
      for (const auto& p : propositions) {
        const double s = scores.contains(p) ? scores.at(p).get<double>() : 0.0;
        out[p] = detail::checked_score(s, frame, p);
      }
    } catch (const nlohmann::json::exception& e) {
      throw BackendFailure(frame.frame_id, std::string("malformed response: ") + e.what());
    }
    return out;
  }

 private:
  std::string origin_;
  std::string path_;
  int timeout_ = 10;
};

}  // namespace groundfsa
