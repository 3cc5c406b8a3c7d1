#pragma once

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "groundfsa/error.hpp"
#include "json.hpp"

namespace groundfsa {

/// One scored detection with its ground truth.
struct CalibrationRecord {
  std::string proposition;
  double score = 0.0;
  bool truth = false;

  friend bool operator==(const CalibrationRecord&, const CalibrationRecord&) = default;
};

namespace detail {

inline std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_truth(std::string s, std::size_t line) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidDocument("line " + std::to_string(line) + ": truth must be true/false/1/0, got '" + s + "'");
}

inline double parse_score(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InvalidDocument("line " + std::to_string(line) + ": bad score '" + s + "'");
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidDocument("line " + std::to_string(line) + ": score outside [0, 1]");
  return v;
}

}  // namespace detail

/// CSV with header `proposition,score,truth`.
inline std::vector<CalibrationRecord> read_records_csv(const std::string& text) {
  std::vector<CalibrationRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim_copy(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(detail::trim_copy(cell));
    if (header) {
      header = false;
      if (cells != std::vector<std::string>{"proposition", "score", "truth"}) {
        throw InvalidDocument("records CSV must start with the header 'proposition,score,truth'");
      }
      continue;
    }
    if (cells.size() != 3) throw InvalidDocument("line " + std::to_string(line_no) + ": expected 3 columns");
    out.push_back({cells[0], detail::parse_score(cells[1], line_no), detail::parse_truth(cells[2], line_no)});
  }
  return out;
}

/// JSON lines `{"proposition": ..., "score": ..., "truth": ...}`.
inline std::vector<CalibrationRecord> read_records_jsonl(const std::string& text) {
  std::vector<CalibrationRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim_copy(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const double s = j.at("score").get<double>();
      if (!(s >= 0.0 && s <= 1.0)) throw InvalidDocument("line " + std::to_string(line_no) + ": score outside [0, 1]");
      out.push_back({j.value("proposition", std::string()), s, j.at("truth").get<bool>()});
    } catch (const nlohmann::json::exception& e) {
      throw InvalidDocument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

/// Picks the reader by content: JSON lines when the first nonblank character
/// is `{`, CSV otherwise.
inline std::vector<CalibrationRecord> read_records(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return read_records_jsonl(text);
  return read_records_csv(text);
}

}  // namespace groundfsa
